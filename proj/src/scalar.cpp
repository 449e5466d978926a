#include "superalg/scalar.hpp"

#include <cstdio>
#include <sstream>

namespace superalg {

std::string q_to_string(const Q& q) {
    return q.get_str();
}

Q q_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    auto dot = s.find_first_of(".eE");
    if (dot == std::string::npos) {
        Q q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
        q.canonicalize();
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        return q;
    }
    // Decimal literal: read it exactly as a fraction of powers of ten.
    std::string mant = s;
    long exp10 = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
        mant = s.substr(0, e);
        exp10 = std::stol(s.substr(e + 1));
    }
    auto p = mant.find('.');
    std::string digits = mant;
    if (p != std::string::npos) {
        digits = mant.substr(0, p) + mant.substr(p + 1);
        exp10 -= static_cast<long>(mant.size() - p - 1);
    }
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("bad decimal '" + s + "'");
    mpz_class num(digits, 10);
    mpz_class ten = 10, pw;
    mpz_pow_ui(pw.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Q q = exp10 < 0 ? Q(num, pw) : Q(num * pw);
    q.canonicalize();
    return q;
}

static std::string fmt_double(double a) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

std::string Ring<CQ>::to_string(const CQ& a) {
    if (a.im == 0) return q_to_string(a.re);
    if (a.re == 0) return q_to_string(a.im) + "*i";
    return "(" + q_to_string(a.re) + " + " + q_to_string(a.im) + "*i)";
}

std::string Ring<F64>::to_string(double a) {
    return fmt_double(a);
}

std::string Ring<CF64>::to_string(const CF64& a) {
    if (a.imag() == 0.0) return fmt_double(a.real());
    return "(" + fmt_double(a.real()) + " + " + fmt_double(a.imag()) + "*i)";
}

static Q q_json(const nlohmann::json& j) {
    if (j.is_null()) return Q(0);
    if (j.is_string()) return q_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Q(j.get<long>());
    throw std::invalid_argument("exact coefficient must be a \"p/q\" string");
}

static double d_json(const nlohmann::json& j) {
    if (j.is_null()) return 0.0;
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return q_from_string(j.get<std::string>()).get_d();
    throw std::invalid_argument("float coefficient must be a number");
}

Q Ring<Q>::from_json(const nlohmann::json& re, const nlohmann::json& im) {
    if (!im.is_null() && q_json(im) != 0) throw RingError("imaginary part in the rational ring");
    return q_json(re);
}

CQ Ring<CQ>::from_json(const nlohmann::json& re, const nlohmann::json& im) {
    return CQ(q_json(re), q_json(im));
}

double Ring<F64>::from_json(const nlohmann::json& re, const nlohmann::json& im) {
    if (!im.is_null() && d_json(im) != 0.0) throw RingError("imaginary part in the f64 ring");
    return d_json(re);
}

CF64 Ring<CF64>::from_json(const nlohmann::json& re, const nlohmann::json& im) {
    return {d_json(re), d_json(im)};
}

}  // namespace superalg
