#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace superalg {

using Q = mpq_class;
using F64 = double;
using CF64 = std::complex<double>;

// Default comparison tolerance for the floating rings. Only ever used when
// comparing, never inside arithmetic.
inline constexpr double kFloatTol = 1e-12;

class RingError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Complex number with exact rational parts.
struct CQ {
    Q re{0};
    Q im{0};

    CQ() = default;
    CQ(const Q& r) : re(r) {}
    CQ(const Q& r, const Q& i) : re(r), im(i) {}
    CQ(long r) : re(r) {}
    CQ(int r) : re(r) {}

    CQ& operator+=(const CQ& o) { re += o.re; im += o.im; return *this; }
    CQ& operator-=(const CQ& o) { re -= o.re; im -= o.im; return *this; }
    CQ& operator*=(const CQ& o) {
        Q r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    CQ& operator/=(const CQ& o) {
        Q den = o.re * o.re + o.im * o.im;
        if (den == 0) throw RingError("division by zero");
        Q r = (re * o.re + im * o.im) / den;
        im = (im * o.re - re * o.im) / den;
        re = r;
        return *this;
    }
    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
};

inline CQ operator+(CQ a, const CQ& b) { return a += b; }
inline CQ operator-(CQ a, const CQ& b) { return a -= b; }
inline CQ operator*(CQ a, const CQ& b) { return a *= b; }
inline CQ operator/(CQ a, const CQ& b) { return a /= b; }
inline CQ operator-(const CQ& a) { return CQ(-a.re, -a.im); }
inline bool operator==(const CQ& a, const CQ& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const CQ& a, const CQ& b) { return !(a == b); }
inline CQ conj(const CQ& a) { return CQ(a.re, -a.im); }

inline Q qfrac(long a, long b) {
    Q q(a, b);
    q.canonicalize();
    return q;
}

std::string q_to_string(const Q& q);
Q q_from_string(const std::string& s);  // "p/q", "p", or a decimal literal

template <class S>
struct Ring;

template <>
struct Ring<Q> {
    static constexpr bool complex = false;
    static constexpr bool exact = true;
    static constexpr const char* name = "rational";
    static Q zero() { return Q(0); }
    static Q one() { return Q(1); }
    static Q from_q(const Q& q) { return q; }
    static Q from_cq(const CQ& c) {
        if (c.im != 0) throw RingError("complex value in the rational ring");
        return c.re;
    }
    static Q imag_unit() { throw RingError("the rational ring has no imaginary unit"); }
    static Q conj(const Q& a) { return a; }
    static bool is_zero(const Q& a, double = kFloatTol) { return sgn(a) == 0; }
    static bool eq(const Q& a, const Q& b, double = kFloatTol) { return a == b; }
    static double abs(const Q& a) { return std::fabs(a.get_d()); }
    static double real_d(const Q& a) { return a.get_d(); }
    static double imag_d(const Q&) { return 0.0; }
    static std::string to_string(const Q& a) { return q_to_string(a); }
    static nlohmann::json re_json(const Q& a) { return q_to_string(a); }
    static nlohmann::json im_json(const Q&) { return nullptr; }
    static Q from_json(const nlohmann::json& re, const nlohmann::json& im);
};

template <>
struct Ring<CQ> {
    static constexpr bool complex = true;
    static constexpr bool exact = true;
    static constexpr const char* name = "crational";
    static CQ zero() { return CQ(); }
    static CQ one() { return CQ(1); }
    static CQ from_q(const Q& q) { return CQ(q); }
    static CQ from_cq(const CQ& c) { return c; }
    static CQ imag_unit() { return CQ(0, 1); }
    static CQ conj(const CQ& a) { return superalg::conj(a); }
    static bool is_zero(const CQ& a, double = kFloatTol) { return a.is_zero(); }
    static bool eq(const CQ& a, const CQ& b, double = kFloatTol) { return a == b; }
    static double abs(const CQ& a) { return std::hypot(a.re.get_d(), a.im.get_d()); }
    static double real_d(const CQ& a) { return a.re.get_d(); }
    static double imag_d(const CQ& a) { return a.im.get_d(); }
    static std::string to_string(const CQ& a);
    static nlohmann::json re_json(const CQ& a) { return q_to_string(a.re); }
    static nlohmann::json im_json(const CQ& a) { return q_to_string(a.im); }
    static CQ from_json(const nlohmann::json& re, const nlohmann::json& im);
};

inline bool float_close(double a, double b, double tol) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tol * scale;
}

template <>
struct Ring<F64> {
    static constexpr bool complex = false;
    static constexpr bool exact = false;
    static constexpr const char* name = "f64";
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_q(const Q& q) { return q.get_d(); }
    static double from_cq(const CQ& c) {
        if (c.im != 0) throw RingError("complex value in the f64 ring");
        return c.re.get_d();
    }
    static double imag_unit() { throw RingError("the f64 ring has no imaginary unit"); }
    static double conj(double a) { return a; }
    static bool is_zero(double a, double tol = kFloatTol) { return std::fabs(a) <= tol; }
    static bool eq(double a, double b, double tol = kFloatTol) { return float_close(a, b, tol); }
    static double abs(double a) { return std::fabs(a); }
    static double real_d(double a) { return a; }
    static double imag_d(double) { return 0.0; }
    static std::string to_string(double a);
    static nlohmann::json re_json(double a) { return a; }
    static nlohmann::json im_json(double) { return nullptr; }
    static double from_json(const nlohmann::json& re, const nlohmann::json& im);
};

template <>
struct Ring<CF64> {
    static constexpr bool complex = true;
    static constexpr bool exact = false;
    static constexpr const char* name = "cf64";
    static CF64 zero() { return {0.0, 0.0}; }
    static CF64 one() { return {1.0, 0.0}; }
    static CF64 from_q(const Q& q) { return {q.get_d(), 0.0}; }
    static CF64 from_cq(const CQ& c) { return {c.re.get_d(), c.im.get_d()}; }
    static CF64 imag_unit() { return {0.0, 1.0}; }
    static CF64 conj(const CF64& a) { return std::conj(a); }
    static bool is_zero(const CF64& a, double tol = kFloatTol) { return std::abs(a) <= tol; }
    static bool eq(const CF64& a, const CF64& b, double tol = kFloatTol) {
        double scale = std::max({1.0, std::abs(a), std::abs(b)});
        return std::abs(a - b) <= tol * scale;
    }
    static double abs(const CF64& a) { return std::abs(a); }
    static double real_d(const CF64& a) { return a.real(); }
    static double imag_d(const CF64& a) { return a.imag(); }
    static std::string to_string(const CF64& a);
    static nlohmann::json re_json(const CF64& a) { return a.real(); }
    static nlohmann::json im_json(const CF64& a) { return a.imag(); }
    static CF64 from_json(const nlohmann::json& re, const nlohmann::json& im);
};

// 1ori(k): 1 for even k, i for odd k.  1ormi(k) is its conjugate.
template <class S>
S one_or_i(long k) {
    if (k % 2 == 0) return Ring<S>::one();
    return Ring<S>::imag_unit();
}

template <class S>
S one_or_minus_i(long k) {
    return Ring<S>::conj(one_or_i<S>(k));
}

}  // namespace superalg
