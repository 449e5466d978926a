#include "superalg/series.hpp"

#include <stdexcept>

namespace superalg {

PowerSeries::PowerSeries(int order, std::vector<Q> coeffs) : c_(std::move(coeffs)) {
    c_.resize(std::size_t(order) + 1, Q(0));
}

PowerSeries PowerSeries::constant(int order, const Q& a) {
    PowerSeries s(order);
    s.c_[0] = a;
    return s;
}

PowerSeries PowerSeries::monomial(int order, int k, const Q& a) {
    PowerSeries s(order);
    if (k <= order) s.c_[std::size_t(k)] = a;
    return s;
}

PowerSeries PowerSeries::exp(int order) {
    PowerSeries s(order);
    Q term(1);
    for (int k = 0; k <= order; ++k) {
        s.c_[std::size_t(k)] = term;
        term /= k + 1;
    }
    return s;
}

PowerSeries PowerSeries::sinh_over_t(int order) {
    PowerSeries s(order);
    Q fact(1);  // (k+1)!
    for (int k = 0; k <= order; ++k) {
        fact *= k + 1;
        if (k % 2 == 0) s.c_[std::size_t(k)] = 1 / fact;
    }
    return s;
}

PowerSeries PowerSeries::cosh(int order) {
    PowerSeries s(order);
    Q fact(1);
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        if (k % 2 == 0) s.c_[std::size_t(k)] = 1 / fact;
    }
    return s;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
    if (o.order() != order()) throw std::invalid_argument("series order mismatch");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
    if (o.order() != order()) throw std::invalid_argument("series order mismatch");
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    if (a.order() != b.order()) throw std::invalid_argument("series order mismatch");
    PowerSeries r(a.order());
    for (int i = 0; i <= a.order(); ++i)
        for (int j = 0; i + j <= a.order(); ++j) r.c_[std::size_t(i + j)] += a.c_[std::size_t(i)] * b.c_[std::size_t(j)];
    return r;
}

PowerSeries operator*(PowerSeries a, const Q& s) {
    for (auto& x : a.c_) x *= s;
    return a;
}

PowerSeries PowerSeries::inverse() const {
    if (c_[0] == 0) throw std::domain_error("series with zero constant term has no inverse");
    PowerSeries r(order());
    r.c_[0] = 1 / c_[0];
    for (int k = 1; k <= order(); ++k) {
        Q acc(0);
        for (int j = 1; j <= k; ++j) acc += c_[std::size_t(j)] * r.c_[std::size_t(k - j)];
        r.c_[std::size_t(k)] = -acc / c_[0];
    }
    return r;
}

PowerSeries PowerSeries::divide_by_t() const {
    if (c_[0] != 0) throw std::domain_error("series not divisible by t");
    PowerSeries r(order() - 1);
    for (int k = 1; k <= order(); ++k) r.c_[std::size_t(k - 1)] = c_[std::size_t(k)];
    return r;
}

PowerSeries PowerSeries::scale_argument(const Q& a) const {
    PowerSeries r = *this;
    Q p(1);
    for (auto& x : r.c_) {
        x *= p;
        p *= a;
    }
    return r;
}

PowerSeries PowerSeries::truncate(int order) const {
    PowerSeries r(order);
    for (int k = 0; k <= std::min(order, this->order()); ++k) r.c_[std::size_t(k)] = c_[std::size_t(k)];
    return r;
}

bool PowerSeries::is_even() const {
    for (std::size_t k = 1; k < c_.size(); k += 2)
        if (c_[k] != 0) return false;
    return true;
}

bool PowerSeries::is_odd() const {
    for (std::size_t k = 0; k < c_.size(); k += 2)
        if (c_[k] != 0) return false;
    return true;
}

std::string PowerSeries::to_string() const {
    std::string out;
    for (int k = 0; k <= order(); ++k) {
        const Q& x = c_[std::size_t(k)];
        if (x == 0) continue;
        std::string term = q_to_string(abs(x));
        if (k > 0) term += (k == 1 ? "*t" : "*t^" + std::to_string(k));
        if (out.empty()) out = (x < 0 ? "-" : "") + term;
        else out += (x < 0 ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

PowerSeries named_series(SeriesKind kind, int order) {
    // Work one order higher so that divisions by t keep the requested order.
    int w = order + 1;
    PowerSeries e = PowerSeries::exp(w);
    PowerSeries one = PowerSeries::constant(w, 1);
    PowerSeries f = (e - one).divide_by_t();  // order w-1 = order
    switch (kind) {
        case SeriesKind::F: return f;
        case SeriesKind::H: {
            PowerSeries num = (e - one).truncate(order), den = (e + one).truncate(order);
            return num * den.inverse();
        }
        case SeriesKind::B: {
            PowerSeries ep1 = (e + one).truncate(order);
            return ep1 * f.inverse() * Q(1, 2);
        }
        case SeriesKind::BMinus: return PowerSeries::sinh_over_t(order).inverse();
        case SeriesKind::BPlus: return PowerSeries::cosh(order) * PowerSeries::sinh_over_t(order).inverse();
    }
    throw std::invalid_argument("unknown series");
}

std::string series_name(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::F: return "f";
        case SeriesKind::H: return "h";
        case SeriesKind::B: return "b";
        case SeriesKind::BMinus: return "b-";
        case SeriesKind::BPlus: return "b+";
    }
    return "?";
}

}  // namespace superalg
