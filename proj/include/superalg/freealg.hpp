#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "superalg/scalar.hpp"

namespace superalg {

inline constexpr int kMaxBchDegree = 8;

// Word in the letters 0 (X) and 1 (Y); letter i sits in bit i.
struct Word {
    int len = 0;
    unsigned bits = 0;
    int letter(int i) const { return int(bits >> i & 1u); }
    Word suffix(int from) const { return Word{len - from, bits >> from}; }
    friend bool operator<(const Word& a, const Word& b) { return a.len != b.len ? a.len < b.len : a.bits < b.bits; }
    friend bool operator==(const Word& a, const Word& b) { return a.len == b.len && a.bits == b.bits; }
    std::string to_string() const;  // e.g. "XYY"
};

// Element of the free associative algebra on X, Y truncated above degree D.
class FreeElement {
public:
    explicit FreeElement(int degree);
    static FreeElement letter(int degree, int which);

    int degree() const { return D_; }
    const Q& operator[](const Word& w) const { return c_[index(w)]; }
    Q& operator[](const Word& w) { return c_[index(w)]; }

    FreeElement& operator+=(const FreeElement& o);
    FreeElement& operator-=(const FreeElement& o);
    friend FreeElement operator+(FreeElement a, const FreeElement& b) { return a += b; }
    friend FreeElement operator-(FreeElement a, const FreeElement& b) { return a -= b; }
    friend FreeElement operator*(const FreeElement& a, const FreeElement& b);
    friend FreeElement operator*(FreeElement a, const Q& s);
    friend bool operator==(const FreeElement& a, const FreeElement& b) { return a.c_ == b.c_; }

    FreeElement homogeneous(int k) const;
    FreeElement up_to(int k) const;   // components of degree <= k
    FreeElement exp() const;          // needs zero constant term
    FreeElement log1p() const;        // log(1 + this), needs zero constant term
    bool is_zero() const;

    std::vector<std::pair<Word, Q>> terms() const;
    std::string to_string() const;

private:
    static std::size_t index(const Word& w) { return ((std::size_t(1) << w.len) - 1) + w.bits; }
    int D_;
    std::vector<Q> c_;
};

inline FreeElement commutator(const FreeElement& a, const FreeElement& b) { return a * b - b * a; }

// Lie polynomial written as a combination of right-normed brackets
// [x1,[x2,[...,xk]]] of the word x1...xk.
struct LiePolynomial {
    std::vector<std::pair<Q, Word>> terms;
    FreeElement expand(int degree) const;
    std::string to_string() const;
};

// Dynkin-Specht-Wever projection of a homogeneous Lie element of degree k.
LiePolynomial to_lie_polynomial(const FreeElement& homogeneous, int k);

// Degree-k component of log(e^X e^Y) - X - Y, as a Lie polynomial (k >= 2).
const LiePolynomial& bch_component(int k);

// Homogeneous components B_k of the even/odd separation
// exp(X)exp(Y) = exp(sum_{k even} B_k) exp(X + Y + sum_{k odd} B_k).
const LiePolynomial& separation_component(int k);

// Same components as free associative elements (for symbolic checks).
FreeElement bch_component_free(int k);
FreeElement separation_component_free(int k);

}  // namespace superalg
