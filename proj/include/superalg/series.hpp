#pragma once

#include <string>
#include <vector>

#include "superalg/scalar.hpp"

namespace superalg {

// Truncated power series sum c[k] t^k, k = 0..order, with exact coefficients.
class PowerSeries {
public:
    PowerSeries() = default;
    explicit PowerSeries(int order) : c_(std::size_t(order) + 1, Q(0)) {}
    PowerSeries(int order, std::vector<Q> coeffs);

    static PowerSeries constant(int order, const Q& a);
    static PowerSeries monomial(int order, int k, const Q& a = Q(1));
    static PowerSeries exp(int order);            // e^t
    static PowerSeries sinh_over_t(int order);    // sinh(t)/t
    static PowerSeries cosh(int order);

    int order() const { return int(c_.size()) - 1; }
    const Q& operator[](int k) const { return c_.at(std::size_t(k)); }
    Q& operator[](int k) { return c_.at(std::size_t(k)); }
    const std::vector<Q>& coeffs() const { return c_; }

    PowerSeries& operator+=(const PowerSeries& o);
    PowerSeries& operator-=(const PowerSeries& o);
    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator*(PowerSeries a, const Q& s);
    friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.c_ == b.c_; }

    PowerSeries inverse() const;                  // needs c[0] != 0
    PowerSeries divide_by_t() const;              // needs c[0] == 0; loses one order
    PowerSeries scale_argument(const Q& a) const; // t -> a t
    PowerSeries truncate(int order) const;

    bool is_even() const;
    bool is_odd() const;
    std::string to_string() const;

private:
    std::vector<Q> c_;
};

enum class SeriesKind { F, H, B, BMinus, BPlus };

// f(t) = (e^t - 1)/t, h(t) = (e^t - 1)/(e^t + 1), b(t) = t(e^t + 1)/(2(e^t - 1)),
// b-(t) = t/sinh t, b+(t) = t cosh t / sinh t.
PowerSeries named_series(SeriesKind kind, int order);
std::string series_name(SeriesKind kind);

}  // namespace superalg
