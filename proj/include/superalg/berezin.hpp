#pragma once

#include <stdexcept>
#include <vector>

#include "superalg/grassmann.hpp"
#include "superalg/supermatrix.hpp"

namespace superalg {

// Partition of the generators {1..n} into parameters and fiber coordinates.
struct FiberSplit {
    int n = 0;
    IndexSet parameters;
    IndexSet fiber;

    FiberSplit() = default;
    FiberSplit(int n_, IndexSet params, IndexSet fib) : n(n_), parameters(params), fiber(fib) {
        if ((parameters & fiber).bits != 0) throw std::invalid_argument("fiber split: sets overlap");
        if ((parameters | fiber).bits != IndexSet::full(n).bits)
            throw std::invalid_argument("fiber split: sets do not cover all generators");
    }
    static FiberSplit full(int n) { return FiberSplit(n, IndexSet(), IndexSet::full(n)); }
    // Fiber = the given generators, everything else is a parameter.
    static FiberSplit with_fiber(int n, IndexSet fib) { return FiberSplit(n, fib.complement(n), fib); }
};

// Integral over the fiber generators: the coefficient of the fiber monomial,
// taken with the fiber monomial moved to the left of the parameters.
template <class S>
Grassmann<S> berezin_integral(const Grassmann<S>& f, const FiberSplit& split) {
    if (split.n != f.n()) throw GeneratorMismatch("berezin_integral: split and element disagree on n");
    Mask F = split.fiber.bits;
    Grassmann<S> out(f.n());
    for (Mask I = 0; I < f.size(); ++I) {
        if ((I & F) != F || Ring<S>::is_zero(f[I], 0.0)) continue;
        Mask P = I & ~F;
        if (epsilon_sign(F, P) > 0) out[P] += f[I];
        else out[P] -= f[I];
    }
    return out;
}

template <class S>
Grassmann<S> berezin_integral(const Grassmann<S>& f) {
    return berezin_integral(f, FiberSplit::full(f.n()));
}

// Odd coordinate change on the fiber: generator j goes to images[j-1].
// Parameter generators must map to themselves.
template <class S>
struct OddSubstitution {
    FiberSplit split;
    std::vector<Grassmann<S>> images;

    OddSubstitution() = default;
    OddSubstitution(FiberSplit s, std::vector<Grassmann<S>> im) : split(s), images(std::move(im)) { validate(); }

    static OddSubstitution identity(const FiberSplit& s) {
        std::vector<Grassmann<S>> im;
        for (int j = 1; j <= s.n; ++j) im.push_back(Grassmann<S>::generator(s.n, j));
        return OddSubstitution(s, std::move(im));
    }

    // Fiber Jacobian d(eta_i)/d(xi_j), i, j running over fiber generators.
    GMatrix<S> jacobian() const {
        auto fib = split.fiber.to_list();
        int q = int(fib.size());
        auto m = gmatrix_zero<S>(q, q, split.n);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) m(a, b) = images[fib[a] - 1].derivative(fib[b]);
        return m;
    }

    void validate() const {
        if (int(images.size()) != split.n) throw std::invalid_argument("substitution needs one image per generator");
        for (int j = 1; j <= split.n; ++j) {
            const auto& im = images[j - 1];
            if (im.n() != split.n) throw GeneratorMismatch("substitution image has the wrong generator count");
            if (!im.is_odd(0.0)) throw ParityError("substitution image of th" + std::to_string(j) + " is not odd");
            if (split.parameters.contains(j) && im != Grassmann<S>::generator(split.n, j))
                throw std::invalid_argument("parameter generators must map to themselves");
        }
        if (Ring<S>::is_zero(determinant(body_of(jacobian()), 0.0), 0.0)) throw SingularError("singular body Jacobian");
    }
};

// f(eta(xi)): each monomial becomes the ordered product of the images.
template <class S>
Grassmann<S> substitute_odd(const Grassmann<S>& f, const OddSubstitution<S>& sub) {
    if (f.n() != sub.split.n) throw GeneratorMismatch("substitute_odd: generator count mismatch");
    int n = f.n();
    Grassmann<S> out(n);
    for (Mask I = 0; I < f.size(); ++I) {
        if (Ring<S>::is_zero(f[I], 0.0)) continue;
        auto term = Grassmann<S>::constant(n, f[I]);
        for (int j : IndexSet(I).to_list()) {
            term = term * sub.images[j - 1];
            if (term.is_zero(0.0)) break;
        }
        out += term;
    }
    return out;
}

// piBer of the tangent map for a purely odd fiber change: Det(d eta/d xi)^{-1}.
// Parameters stay formal generators of the result.
template <class S>
Grassmann<S> fiber_jacobian_piber(const OddSubstitution<S>& sub) {
    auto jac = sub.jacobian();
    if (jac.rows() == 0) return Grassmann<S>::constant(sub.split.n, Ring<S>::one());
    return even_determinant(jac, sub.split.n).inverse();
}

// Integral of f(eta) * piBer minus the integral of f; identically zero.
template <class S>
Grassmann<S> change_of_variables_residual(const Grassmann<S>& f, const OddSubstitution<S>& sub) {
    auto lhs = berezin_integral(substitute_odd(f, sub) * fiber_jacobian_piber(sub), sub.split);
    return lhs - berezin_integral(f, sub.split);
}

template <class S>
Grassmann<S> change_of_variables_residual(const Grassmann<S>& f, const OddSubstitution<S>& sub, const FiberSplit& split) {
    if (split.fiber.bits != sub.split.fiber.bits || split.n != sub.split.n)
        throw std::invalid_argument("split does not match the substitution");
    return change_of_variables_residual(f, sub);
}

}  // namespace superalg
