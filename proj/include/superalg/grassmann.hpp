#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "superalg/scalar.hpp"

namespace superalg {

inline constexpr int kMaxGenerators = 16;

using Mask = std::uint32_t;

// Subset of {1..n}; generator j lives in bit j-1.
struct IndexSet {
    Mask bits = 0;

    IndexSet() = default;
    explicit IndexSet(Mask b) : bits(b) {}
    IndexSet(std::initializer_list<int> idx) {
        for (int j : idx) insert(j);
    }
    static IndexSet from_list(const std::vector<int>& idx) {
        IndexSet s;
        for (int j : idx) s.insert(j);
        return s;
    }
    static IndexSet full(int n) { return IndexSet(n >= 32 ? ~Mask(0) : (Mask(1) << n) - 1); }

    void insert(int j) {
        if (j < 1 || j > kMaxGenerators) throw std::out_of_range("generator index out of range");
        bits |= Mask(1) << (j - 1);
    }
    bool contains(int j) const { return j >= 1 && j <= 32 && ((bits >> (j - 1)) & 1u); }
    int size() const { return std::popcount(bits); }
    int parity() const { return size() & 1; }
    bool empty() const { return bits == 0; }
    IndexSet complement(int n) const { return IndexSet(full(n).bits & ~bits); }
    std::vector<int> to_list() const {
        std::vector<int> out;
        for (Mask b = bits; b; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
        return out;
    }
    friend IndexSet operator|(IndexSet a, IndexSet b) { return IndexSet(a.bits | b.bits); }
    friend IndexSet operator&(IndexSet a, IndexSet b) { return IndexSet(a.bits & b.bits); }
    friend bool operator==(IndexSet a, IndexSet b) { return a.bits == b.bits; }
};

class OverlapError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class GeneratorMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Number of pairs i in I, j in J with i > j, mod 2.
inline int inversion_parity(Mask I, Mask J) {
    int cnt = 0;
    for (Mask b = J; b; b &= b - 1) cnt += std::popcount(I >> (std::countr_zero(b) + 1));
    return cnt & 1;
}

// (-1)^{eps(I,J)}: sign of the permutation sorting I followed by J.
inline int epsilon_sign(Mask I, Mask J) {
    if (I & J) throw OverlapError("epsilon_sign: index sets overlap");
    return inversion_parity(I, J) ? -1 : 1;
}

inline int epsilon_sign(IndexSet I, IndexSet J) {
    return epsilon_sign(I.bits, J.bits);
}

// Element of the Grassmann algebra on n generators with coefficients in S,
// stored densely: coeffs[mask] multiplies xi^mask.
template <class S>
class Grassmann {
public:
    using R = Ring<S>;

    Grassmann() : Grassmann(0) {}
    explicit Grassmann(int n) : n_(n) {
        if (n < 0 || n > kMaxGenerators) throw std::out_of_range("generator count must lie in 0..16");
        c_.assign(std::size_t(1) << n, R::zero());
    }

    static Grassmann constant(int n, const S& s) {
        Grassmann g(n);
        g.c_[0] = s;
        return g;
    }
    static Grassmann generator(int n, int j) {
        if (j < 1 || j > n) throw std::out_of_range("generator index out of range");
        Grassmann g(n);
        g.c_[Mask(1) << (j - 1)] = R::one();
        return g;
    }
    static Grassmann monomial(int n, Mask I, const S& s = R::one()) {
        Grassmann g(n);
        if (I >> n) throw std::out_of_range("monomial index exceeds generator count");
        g.c_[I] = s;
        return g;
    }

    int n() const { return n_; }
    std::size_t size() const { return c_.size(); }
    const S& operator[](Mask I) const { return c_[I]; }
    S& operator[](Mask I) { return c_[I]; }
    const S& coeff(IndexSet I) const { return c_.at(I.bits); }
    void set(IndexSet I, const S& s) { c_.at(I.bits) = s; }
    const std::vector<S>& coeffs() const { return c_; }

    S body() const { return c_[0]; }

    bool is_zero(double tol = kFloatTol) const {
        for (const auto& x : c_)
            if (!R::is_zero(x, tol)) return false;
        return true;
    }

    std::vector<Mask> support(double tol = 0.0) const {
        std::vector<Mask> out;
        for (Mask I = 0; I < c_.size(); ++I)
            if (!R::is_zero(c_[I], tol)) out.push_back(I);
        return out;
    }

    // Union of the generators occurring in nonzero terms.
    Mask generators_used() const {
        Mask m = 0;
        for (Mask I = 0; I < c_.size(); ++I)
            if (!R::is_zero(c_[I], 0.0)) m |= I;
        return m;
    }

    Grassmann even_part() const { return part(0); }
    Grassmann odd_part() const { return part(1); }
    Grassmann nilpotent_part() const {
        Grassmann g = *this;
        g.c_[0] = R::zero();
        return g;
    }

    bool is_even(double tol = kFloatTol) const { return odd_part().is_zero(tol); }
    bool is_odd(double tol = kFloatTol) const { return even_part().is_zero(tol); }
    // 0 or 1 for homogeneous elements (zero counts as even), -1 otherwise.
    int parity(double tol = kFloatTol) const {
        if (is_even(tol)) return 0;
        if (is_odd(tol)) return 1;
        return -1;
    }

    Grassmann& operator+=(const Grassmann& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Grassmann& operator-=(const Grassmann& o) {
        check(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Grassmann& operator*=(const S& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Grassmann operator-() const {
        Grassmann g(n_);
        for (std::size_t i = 0; i < c_.size(); ++i) g.c_[i] = -c_[i];
        return g;
    }

    friend Grassmann operator+(Grassmann a, const Grassmann& b) { return a += b; }
    friend Grassmann operator-(Grassmann a, const Grassmann& b) { return a -= b; }
    friend Grassmann operator*(Grassmann a, const S& s) { return a *= s; }
    friend Grassmann operator*(const S& s, Grassmann a) { return a *= s; }

    friend Grassmann operator*(const Grassmann& a, const Grassmann& b) {
        a.check(b);
        Grassmann r(a.n_);
        auto sa = a.support(0.0);
        auto sb = b.support(0.0);
        for (Mask I : sa) {
            for (Mask J : sb) {
                if (I & J) continue;
                if (inversion_parity(I, J))
                    r.c_[I | J] -= a.c_[I] * b.c_[J];
                else
                    r.c_[I | J] += a.c_[I] * b.c_[J];
            }
        }
        return r;
    }
    Grassmann& operator*=(const Grassmann& o) { return *this = *this * o; }

    friend bool operator==(const Grassmann& a, const Grassmann& b) {
        if (a.n_ != b.n_) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!R::eq(a.c_[i], b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const Grassmann& a, const Grassmann& b) { return !(a == b); }

    bool approx_equal(const Grassmann& b, double tol) const {
        if (n_ != b.n_) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!R::eq(c_[i], b.c_[i], tol)) return false;
        return true;
    }

    // Largest coefficient modulus.
    double max_abs() const {
        double m = 0.0;
        for (const auto& x : c_) m = std::max(m, R::abs(x));
        return m;
    }
    // Sum of coefficient moduli; submultiplicative.
    double norm1() const {
        double m = 0.0;
        for (const auto& x : c_) m += R::abs(x);
        return m;
    }

    // The grading automorphism: identity on the even part, minus on the odd part.
    Grassmann conj_C() const {
        Grassmann g = *this;
        for (Mask I = 0; I < c_.size(); ++I)
            if (std::popcount(I) & 1) g.c_[I] = -g.c_[I];
        return g;
    }
    Grassmann conj_C_pow(int k) const { return (k & 1) ? conj_C() : *this; }

    // Conjugates coefficients only; generators are fixed.
    Grassmann complex_conjugate() const {
        if constexpr (!R::complex) {
            throw RingError("complex conjugation needs a complex coefficient ring");
        } else {
            Grassmann g(n_);
            for (std::size_t i = 0; i < c_.size(); ++i) g.c_[i] = R::conj(c_[i]);
            return g;
        }
    }

    // Embeds into the algebra on n+m generators (the first n are kept).
    Grassmann adjoin(int m) const {
        if (m < 0 || n_ + m > kMaxGenerators) throw std::out_of_range("generator capacity exceeded");
        Grassmann g(n_ + m);
        for (std::size_t i = 0; i < c_.size(); ++i) g.c_[i] = c_[i];
        return g;
    }

    // Moves generator j to position map[j-1] (1-based targets) inside an algebra on n_out generators.
    Grassmann relabel(const std::vector<int>& map, int n_out) const {
        Grassmann g(n_out);
        for (Mask I = 0; I < c_.size(); ++I) {
            if (R::is_zero(c_[I], 0.0)) continue;
            // Build the image monomial by multiplying generator images in order.
            Mask out = 0;
            int sign = 1;
            bool dead = false;
            for (Mask b = I; b; b &= b - 1) {
                int j = std::countr_zero(b);
                Mask t = Mask(1) << (map.at(j) - 1);
                if (out & t) { dead = true; break; }
                if (inversion_parity(out, t)) sign = -sign;
                out |= t;
            }
            if (dead) continue;
            if (sign > 0) g.c_[out] += c_[I];
            else g.c_[out] -= c_[I];
        }
        return g;
    }

    Grassmann pow(unsigned k) const {
        Grassmann r = constant(n_, R::one());
        for (unsigned i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    // Inverse when the body is invertible: b^{-1} sum_k (-b^{-1} nu)^k.
    Grassmann inverse() const {
        if (R::is_zero(c_[0], 0.0)) throw RingError("element with zero body is not invertible");
        S binv = R::one() / c_[0];
        Grassmann x = nilpotent_part() * (-binv);
        Grassmann term = constant(n_, R::one());
        Grassmann sum = term;
        for (int k = 1; k <= n_; ++k) {
            term = term * x;
            if (term.is_zero(0.0)) break;
            sum += term;
        }
        return sum * binv;
    }

    // exp of an element with zero body; the series stops after n terms.
    Grassmann exp_nilpotent() const {
        if (!R::is_zero(c_[0], 0.0)) throw RingError("exp_nilpotent: body must vanish");
        Grassmann term = constant(n_, R::one());
        Grassmann sum = term;
        for (int k = 1; k <= n_; ++k) {
            term = term * *this;
            term *= R::from_q(Q(1, k));
            if (term.is_zero(0.0)) break;
            sum += term;
        }
        return sum;
    }

    // Left derivative d/dxi_j: xi^I -> (-1)^{#(i in I, i<j)} xi^{I\{j}}.
    Grassmann derivative(int j) const {
        if (j < 1 || j > n_) throw std::out_of_range("derivative index out of range");
        Mask t = Mask(1) << (j - 1);
        Grassmann g(n_);
        for (Mask I = 0; I < c_.size(); ++I) {
            if (!(I & t)) continue;
            int before = std::popcount(I & (t - 1));
            if (before & 1) g.c_[I & ~t] -= c_[I];
            else g.c_[I & ~t] += c_[I];
        }
        return g;
    }

    std::string to_string() const;

private:
    Grassmann part(int p) const {
        Grassmann g(n_);
        for (Mask I = 0; I < c_.size(); ++I)
            if ((std::popcount(I) & 1) == p) g.c_[I] = c_[I];
        return g;
    }
    void check(const Grassmann& o) const {
        if (o.n_ != n_) throw GeneratorMismatch("mismatched generator counts");
    }

    int n_;
    std::vector<S> c_;
};

template <class S>
Grassmann<S> conjugation_C(const Grassmann<S>& x) {
    return x.conj_C();
}

template <class S>
Grassmann<S> complex_conjugate(const Grassmann<S>& x) {
    return x.complex_conjugate();
}

template <class S>
Grassmann<S> adjoin_generators(const Grassmann<S>& x, int m) {
    return x.adjoin(m);
}

inline std::string monomial_string(Mask I) {
    std::string s;
    for (Mask b = I; b; b &= b - 1) {
        if (!s.empty()) s += "*";
        s += "th" + std::to_string(std::countr_zero(b) + 1);
    }
    return s;
}

// Text form accepted by the expression parser, e.g. "1 - th1*th2".
template <class S>
std::string Grassmann<S>::to_string() const {
    std::string out;
    for (Mask I = 0; I < c_.size(); ++I) {
        if (R::is_zero(c_[I], 0.0)) continue;
        std::string cs = R::to_string(c_[I]);
        bool neg = false;
        if (!cs.empty() && cs[0] == '-') {
            neg = true;
            cs = cs.substr(1);
        }
        std::string term;
        if (I == 0) term = cs;
        else if (cs == "1") term = monomial_string(I);
        else term = cs + "*" + monomial_string(I);
        if (out.empty()) out = neg ? "-" + term : term;
        else out += (neg ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

template <class S>
nlohmann::json to_json(const Grassmann<S>& g) {
    nlohmann::json terms = nlohmann::json::array();
    for (Mask I = 0; I < g.size(); ++I) {
        if (Ring<S>::is_zero(g[I], 0.0)) continue;
        nlohmann::json t;
        t["index"] = IndexSet(I).to_list();
        t["re"] = Ring<S>::re_json(g[I]);
        auto im = Ring<S>::im_json(g[I]);
        if (!im.is_null()) t["im"] = im;
        terms.push_back(t);
    }
    return {{"n", g.n()}, {"terms", terms}};
}

template <class S>
Grassmann<S> grassmann_from_json(const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    Grassmann<S> g(n);
    for (const auto& t : j.at("terms")) {
        IndexSet I = IndexSet::from_list(t.at("index").get<std::vector<int>>());
        if (I.bits >> n) throw std::out_of_range("term index exceeds n");
        nlohmann::json im = t.contains("im") ? t["im"] : nlohmann::json();
        g[I.bits] += Ring<S>::from_json(t.at("re"), im);
    }
    return g;
}

}  // namespace superalg
