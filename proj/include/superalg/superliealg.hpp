#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "superalg/freealg.hpp"
#include "superalg/grassmann.hpp"
#include "superalg/series.hpp"
#include "superalg/supermatrix.hpp"

namespace superalg {

class StructureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class MembershipError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotNilpotentError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Faithful matrix representation on a p|q graded space.
struct MatrixRep {
    int p = 0;
    int q = 0;
    std::vector<Matrix<Q>> basis;  // one matrix per basis vector
};

// Super Lie algebra with basis e_1..e_d (even), f_1..f_m (odd) and rational
// structure constants [b_i, b_j] = sum_k c(i,j,k) b_k.
class SuperLieAlgebra {
public:
    struct Bracket {
        int i, j;
        std::map<int, Q> result;
    };

    // Brackets not listed (and not implied by graded antisymmetry) are zero.
    // Throws StructureError on any violation of antisymmetry, parity or Jacobi.
    SuperLieAlgebra(std::string name, int d, int m, std::vector<std::string> names, const std::vector<Bracket>& table);

    static SuperLieAlgebra heisenberg_like(int m);
    static SuperLieAlgebra axi_beta();
    static SuperLieAlgebra osp12();
    static SuperLieAlgebra preset(const std::string& name);  // "heisenberg-like(m)", "axi-beta", "osp12"

    static SuperLieAlgebra from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    const std::string& name() const { return name_; }
    int even_dim() const { return d_; }
    int odd_dim() const { return m_; }
    int dim() const { return d_ + m_; }
    int parity(int i) const { return i >= d_ ? 1 : 0; }
    const std::string& basis_name(int i) const { return names_.at(std::size_t(i)); }
    int index_of(const std::string& name) const;
    const Q& c(int i, int j, int k) const { return c_[(std::size_t(i) * dim() + j) * dim() + k]; }

    const std::optional<MatrixRep>& matrix_rep() const { return rep_; }
    void set_matrix_rep(MatrixRep rep);  // validated against the structure constants

    // Residuals of the defining identities, for diagnostics.
    Q antisymmetry_defect() const;
    Q jacobi_defect() const;
    Q parity_defect() const;

private:
    Q& cref(int i, int j, int k) { return c_[(std::size_t(i) * dim() + j) * dim() + k]; }
    void validate() const;

    std::string name_;
    int d_, m_;
    std::vector<std::string> names_;
    std::vector<Q> c_;
    std::optional<MatrixRep> rep_;
};

// Element sum_i a_i b_i of g (x) Lambda_n with coefficients on the left.
template <class S>
class LieElement {
public:
    using G = Grassmann<S>;

    LieElement(const SuperLieAlgebra& alg, int n) : alg_(&alg), c_(std::size_t(alg.dim()), G(n)) {}
    static LieElement basis(const SuperLieAlgebra& alg, int n, int i, const G& coeff) {
        LieElement x(alg, n);
        x.c_.at(std::size_t(i)) = coeff;
        return x;
    }
    static LieElement basis(const SuperLieAlgebra& alg, int n, int i) {
        return basis(alg, n, i, G::constant(n, Ring<S>::one()));
    }

    const SuperLieAlgebra& algebra() const { return *alg_; }
    int n() const { return c_.empty() ? 0 : c_[0].n(); }
    const G& operator[](int i) const { return c_.at(std::size_t(i)); }
    G& operator[](int i) { return c_.at(std::size_t(i)); }

    LieElement& operator+=(const LieElement& o) {
        same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    LieElement& operator-=(const LieElement& o) {
        same(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
    friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
    LieElement operator-() const {
        LieElement r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend LieElement operator*(LieElement a, const S& s) {
        for (auto& x : a.c_) x *= s;
        return a;
    }
    // Left multiplication by a Grassmann scalar.
    friend LieElement operator*(const G& a, LieElement x) {
        for (auto& y : x.c_) y = a * y;
        return x;
    }
    friend bool operator==(const LieElement& a, const LieElement& b) {
        return a.alg_ == b.alg_ && a.c_ == b.c_;
    }
    friend bool operator!=(const LieElement& a, const LieElement& b) { return !(a == b); }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }
    // Element of (g (x) A)_0: even coefficients on e_i, odd on f_j.
    bool is_even() const {
        for (int i = 0; i < alg_->dim(); ++i)
            if (!(alg_->parity(i) ? c_[std::size_t(i)].is_odd() : c_[std::size_t(i)].is_even())) return false;
        return true;
    }
    // Supported on the even basis with even coefficients.
    bool in_even_part() const {
        for (int i = 0; i < alg_->dim(); ++i) {
            const auto& x = c_[std::size_t(i)];
            if (alg_->parity(i) ? !x.is_zero() : !x.is_even()) return false;
        }
        return true;
    }
    // Supported on the odd basis with odd coefficients.
    bool in_odd_part() const {
        for (int i = 0; i < alg_->dim(); ++i) {
            const auto& x = c_[std::size_t(i)];
            if (alg_->parity(i) ? !x.is_odd() : !x.is_zero()) return false;
        }
        return true;
    }
    Mask generators_used() const {
        Mask m = 0;
        for (const auto& x : c_) m |= x.generators_used();
        return m;
    }

    std::string to_string() const {
        std::string out;
        for (int i = 0; i < alg_->dim(); ++i) {
            const auto& x = c_[std::size_t(i)];
            if (x.is_zero(0.0)) continue;
            if (!out.empty()) out += " + ";
            out += "(" + x.to_string() + ")*" + alg_->basis_name(i);
        }
        return out.empty() ? "0" : out;
    }

private:
    void same(const LieElement& o) const {
        if (o.alg_ != alg_) throw std::invalid_argument("elements of different algebras");
        if (o.n() != n()) throw GeneratorMismatch("elements over different Grassmann algebras");
    }
    const SuperLieAlgebra* alg_;
    std::vector<G> c_;
};

// [aX, bY] = (-1)^{|b||X|} a b [X, Y], extended bilinearly.
template <class S>
LieElement<S> bracket(const LieElement<S>& x, const LieElement<S>& y) {
    const auto& alg = x.algebra();
    if (&alg != &y.algebra()) throw std::invalid_argument("bracket: algebra mismatch");
    int n = x.n(), D = alg.dim();
    LieElement<S> r(alg, n);
    for (int i = 0; i < D; ++i) {
        if (x[i].is_zero(0.0)) continue;
        for (int j = 0; j < D; ++j) {
            if (y[j].is_zero(0.0)) continue;
            Grassmann<S> ab = x[i] * y[j].conj_C_pow(alg.parity(i));
            if (ab.is_zero(0.0)) continue;
            for (int k = 0; k < D; ++k) {
                const Q& c = alg.c(i, j, k);
                if (c != 0) r[k] += ab * Ring<S>::from_q(c);
            }
        }
    }
    return r;
}

// Matrix of ad(v) in right coordinates: column j holds [v, b_j].
template <class S>
SuperMatrix<S> ad_matrix(const LieElement<S>& v) {
    const auto& alg = v.algebra();
    int n = v.n(), D = alg.dim();
    SuperMatrix<S> m(alg.even_dim(), alg.odd_dim(), n);
    for (int j = 0; j < D; ++j) {
        auto col = bracket(v, LieElement<S>::basis(alg, n, j));
        for (int k = 0; k < D; ++k) m(k, j) = col[k].conj_C_pow(alg.parity(k));
    }
    return m;
}

// Coordinates of x as a column vector (right coordinates).
template <class S>
std::vector<Grassmann<S>> right_coordinates(const LieElement<S>& x) {
    std::vector<Grassmann<S>> out;
    for (int k = 0; k < x.algebra().dim(); ++k) out.push_back(x[k].conj_C_pow(x.algebra().parity(k)));
    return out;
}

template <class S>
LieElement<S> from_right_coordinates(const SuperLieAlgebra& alg, const std::vector<Grassmann<S>>& v) {
    LieElement<S> x(alg, v.empty() ? 0 : v[0].n());
    for (int k = 0; k < alg.dim(); ++k) x[k] = v[std::size_t(k)].conj_C_pow(alg.parity(k));
    return x;
}

template <class S>
LieElement<S> apply(const SuperMatrix<S>& m, const LieElement<S>& x) {
    auto v = right_coordinates(x);
    std::vector<Grassmann<S>> out(v.size(), Grassmann<S>(x.n()));
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) out[std::size_t(i)] += m(i, j) * v[std::size_t(j)];
    return from_right_coordinates(x.algebra(), out);
}

// Smallest k with ad(v)^k = 0; throws if no power up to the bound vanishes.
template <class S>
int ad_nilpotency_index(const LieElement<S>& v) {
    auto m = ad_matrix(v);
    int bound = v.algebra().dim() * (v.n() + 1) + 1;
    auto power = SuperMatrix<S>::identity(m.p(), m.q(), m.n());
    for (int k = 0; k <= bound; ++k) {
        if (power.max_abs() == 0.0) return k;
        power = power * m;
    }
    throw NotNilpotentError("ad(v) is not nilpotent");
}

// Matrix of s(ad v) for a power series s; the sum terminates.
template <class S>
SuperMatrix<S> series_matrix(SeriesKind kind, const LieElement<S>& v) {
    int k = ad_nilpotency_index(v);
    auto s = named_series(kind, std::max(k, 1));
    auto m = ad_matrix(v);
    auto power = SuperMatrix<S>::identity(m.p(), m.q(), m.n());
    SuperMatrix<S> sum(m.p(), m.q(), m.n());
    for (int j = 0; j < k; ++j) {
        if (s[j] != 0) sum += power.scaled(Ring<S>::from_q(s[j]));
        power = power * m;
    }
    return sum;
}

// s(ad v) Y evaluated by repeated brackets; s must reach the nilpotency order.
template <class S>
LieElement<S> apply_series(const PowerSeries& s, const LieElement<S>& v, const LieElement<S>& y) {
    int k = ad_nilpotency_index(v);
    if (s.order() < k - 1) throw std::invalid_argument("series truncated below the nilpotency order of ad(v)");
    LieElement<S> term = y, sum(y.algebra(), y.n());
    for (int j = 0; j < k; ++j) {
        if (s[j] != 0) sum += term * Ring<S>::from_q(s[j]);
        term = bracket(v, term);
    }
    return sum;
}

template <class S>
LieElement<S> series_of_ad(SeriesKind kind, const LieElement<S>& v, const LieElement<S>& y) {
    return apply_series(named_series(kind, std::max(ad_nilpotency_index(v), 1)), v, y);
}

// Evaluates a Lie polynomial in X, Y by nested brackets.
template <class S>
LieElement<S> evaluate(const LiePolynomial& p, const LieElement<S>& x, const LieElement<S>& y) {
    LieElement<S> sum(x.algebra(), x.n());
    std::map<Word, LieElement<S>> memo;
    std::function<LieElement<S>(const Word&)> rn = [&](const Word& w) -> LieElement<S> {
        if (w.len == 1) return w.letter(0) ? y : x;
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        auto r = bracket(w.letter(0) ? y : x, rn(w.suffix(1)));
        memo.emplace(w, r);
        return r;
    };
    for (const auto& [q, w] : p.terms) sum += rn(w) * Ring<S>::from_q(q);
    return sum;
}

// Degree needed so that every bracket of higher degree vanishes: each term of
// degree k carries k odd coefficients, so k > (number of generators) kills it.
template <class S>
int nilpotent_bch_degree(const LieElement<S>& x, const LieElement<S>& y) {
    return std::popcount(x.generators_used() | y.generators_used());
}

// log(e^X e^Y) - X - Y truncated at the given degree.
template <class S>
LieElement<S> bch_truncated(const LieElement<S>& x, const LieElement<S>& y, int degree) {
    if (degree > kMaxBchDegree) throw std::invalid_argument("BCH degree cap (8) exceeded");
    LieElement<S> sum(x.algebra(), x.n());
    for (int k = 2; k <= degree; ++k) sum += evaluate(bch_component(k), x, y);
    return sum;
}

template <class S>
struct Separation {
    LieElement<S> b0;
    LieElement<S> b1;
    int degree;
};

// exp(X) exp(Y) = exp(B0) exp(X + Y + B1) for X, Y in the odd part.
template <class S>
Separation<S> separate_even_odd(const LieElement<S>& x, const LieElement<S>& y) {
    if (!x.in_odd_part() || !y.in_odd_part()) throw MembershipError("separate_even_odd needs odd-part arguments");
    int deg = nilpotent_bch_degree(x, y);
    if (deg > kMaxBchDegree)
        throw std::invalid_argument("separate_even_odd: more than 8 odd generators in the arguments");
    Separation<S> s{LieElement<S>(x.algebra(), x.n()), LieElement<S>(x.algebra(), x.n()), deg};
    for (int k = 2; k <= deg; ++k) {
        auto bk = evaluate(separation_component(k), x, y);
        if (k % 2 == 0) s.b0 += bk;
        else s.b1 += bk;
    }
    return s;
}

// Matrix of an element under the algebra's matrix representation; the
// coefficient a of a basis matrix F contributes C^{row parity}(a) F_ij.
template <class S>
SuperMatrix<S> to_matrix(const LieElement<S>& x) {
    const auto& rep = x.algebra().matrix_rep();
    if (!rep) throw std::invalid_argument("algebra has no matrix representation");
    int n = x.n();
    SuperMatrix<S> m(rep->p, rep->q, n);
    for (int b = 0; b < x.algebra().dim(); ++b) {
        const auto& a = x[b];
        if (a.is_zero(0.0)) continue;
        auto ac = a.conj_C();
        const auto& F = rep->basis[std::size_t(b)];
        for (int i = 0; i < F.rows(); ++i)
            for (int j = 0; j < F.cols(); ++j) {
                if (F(i, j) == 0) continue;
                m(i, j) += (i >= rep->p ? ac : a) * Ring<S>::from_q(F(i, j));
            }
    }
    return m;
}

// Coordinate blocks of the invariant vector fields at v in the odd part:
// A = [v, e] components on f, B = b+(ad v) on f, H = h(ad v) from f to e.
template <class S>
struct VfBlocks {
    GMatrix<S> A;  // m x d
    GMatrix<S> B;  // m x m
    GMatrix<S> H;  // d x m
    SuperMatrix<S> assembled() const {
        int d = H.rows(), m = B.rows(), n = B.data().empty() ? A.data()[0].n() : B.data()[0].n();
        SuperMatrix<S> out(d, m, n);
        out.mat().set_block(0, 0, gmatrix_identity<S>(d, n));
        out.mat().set_block(0, d, H);
        out.mat().set_block(d, 0, A);
        out.mat().set_block(d, d, B);
        return out;
    }
};

template <class S>
VfBlocks<S> invariant_vf_blocks(const LieElement<S>& v) {
    if (!v.in_odd_part()) throw MembershipError("invariant_vf_blocks needs v in the odd part");
    const auto& alg = v.algebra();
    int d = alg.even_dim(), m = alg.odd_dim();
    auto ad = ad_matrix(v);
    auto bp = series_matrix(SeriesKind::BPlus, v);
    auto h = series_matrix(SeriesKind::H, v);
    return VfBlocks<S>{ad.mat().block(d, 0, m, d), bp.mat().block(d, d, m, m), h.mat().block(0, d, d, m)};
}

// Delta = Det(B) / Det(1 - H B^{-1} A).
template <class S>
Grassmann<S> delta_function(const VfBlocks<S>& blk) {
    int d = blk.H.rows();
    int n = blk.B.data().empty() ? blk.A.data()[0].n() : blk.B.data()[0].n();
    auto binv = ginverse(blk.B, n);
    auto one = Grassmann<S>::constant(n, Ring<S>::one());
    auto detB = blk.B.rows() ? even_determinant(blk.B, n) : one;
    auto inner = gmatrix_identity<S>(d, n);
    if (d > 0 && blk.B.rows() > 0) inner = inner - blk.H * binv * blk.A;
    auto den = d ? even_determinant(inner, n) : one;
    return detB * den.inverse();
}

// S_IJ = int d xi  Delta_{(I u J)^c} xi^I xi^J xi^{(I u J)^c}.
template <class S>
Matrix<S> s_matrix(const Grassmann<S>& delta) {
    int n = delta.n();
    Mask full = IndexSet::full(n).bits;
    std::size_t N = std::size_t(1) << n;
    Matrix<S> out(static_cast<int>(N), static_cast<int>(N), Ring<S>::zero());
    for (Mask I = 0; I < N; ++I)
        for (Mask J = 0; J < N; ++J) {
            if (I & J) continue;
            Mask K = full & ~(I | J);
            if (Ring<S>::is_zero(delta[K], 0.0)) continue;
            // xi^I xi^J xi^K = eps(I,J) eps(I|J, K) xi^full
            int sign = epsilon_sign(I, J) * epsilon_sign(I | J, K);
            out(int(I), int(J)) = sign > 0 ? delta[K] : -delta[K];
        }
    return out;
}

template <class S>
LieElement<S> lift(const SuperLieAlgebra& alg, int n, const std::vector<Q>& body_coeffs) {
    LieElement<S> x(alg, n);
    for (int i = 0; i < alg.dim(); ++i) x[i] = Grassmann<S>::constant(n, Ring<S>::from_q(body_coeffs.at(std::size_t(i))));
    return x;
}

}  // namespace superalg
