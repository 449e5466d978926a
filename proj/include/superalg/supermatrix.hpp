#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "superalg/grassmann.hpp"
#include "superalg/matrix.hpp"

namespace superalg {

enum class MatrixParity { Even, Odd, None };

class SingularError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <class S>
using GMatrix = Matrix<Grassmann<S>>;

template <class S>
GMatrix<S> gmatrix_zero(int r, int c, int n) {
    return GMatrix<S>(r, c, Grassmann<S>(n));
}

template <class S>
GMatrix<S> gmatrix_identity(int k, int n) {
    auto m = gmatrix_zero<S>(k, k, n);
    for (int i = 0; i < k; ++i) m(i, i) = Grassmann<S>::constant(n, Ring<S>::one());
    return m;
}

template <class S>
Matrix<S> body_of(const GMatrix<S>& m) {
    Matrix<S> b(m.rows(), m.cols(), Ring<S>::zero());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) b(i, j) = m(i, j).body();
    return b;
}

template <class S>
GMatrix<S> lift(const Matrix<S>& m, int n) {
    auto g = gmatrix_zero<S>(m.rows(), m.cols(), n);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) g(i, j) = Grassmann<S>::constant(n, m(i, j));
    return g;
}

template <class S>
GMatrix<S> gscale(const GMatrix<S>& m, const S& s) {
    GMatrix<S> out = m;
    for (auto& x : out.data()) x *= s;
    return out;
}

template <class S>
Grassmann<S> cofactor_determinant(const GMatrix<S>& a, int col, const Grassmann<S>& prefactor, int n);

// Determinant of a square matrix whose entries are even (hence commute).
// Gaussian elimination on body-invertible pivots.
template <class S>
Grassmann<S> even_determinant(GMatrix<S> a, int n) {
    int k = a.rows();
    if (k != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    for (const auto& x : a.data())
        if (!x.is_even()) throw ParityError("determinant needs even entries");
    auto det = Grassmann<S>::constant(n, Ring<S>::one());
    for (int col = 0; col < k; ++col) {
        int p = -1;
        double best = 0.0;
        for (int i = col; i < k; ++i) {
            const S& b = a(i, col).body();
            if (Ring<S>::is_zero(b, 0.0)) continue;
            if (Ring<S>::exact) { p = i; break; }
            if (Ring<S>::abs(b) > best) { best = Ring<S>::abs(b); p = i; }
        }
        if (p < 0) {
            // Body matrix singular: the determinant is nilpotent. Fall back to
            // cofactor expansion along this column, which needs no division.
            return cofactor_determinant(a, col, det, n);
        }
        if (p != col) {
            for (int j = 0; j < k; ++j) std::swap(a(col, j), a(p, j));
            det = -det;
        }
        det = det * a(col, col);
        auto inv = a(col, col).inverse();
        for (int i = col + 1; i < k; ++i) {
            if (a(i, col).is_zero(0.0)) continue;
            auto f = a(i, col) * inv;
            for (int j = col; j < k; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return det;
}

// det(a restricted to rows/cols >= col) times prefactor, by Laplace expansion.
template <class S>
Grassmann<S> cofactor_determinant(const GMatrix<S>& a, int col, const Grassmann<S>& prefactor, int n) {
    int k = a.rows() - col;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = col + i;
    std::function<Grassmann<S>(std::vector<int>, int)> rec = [&](std::vector<int> rows, int c) {
        if (rows.empty()) return Grassmann<S>::constant(n, Ring<S>::one());
        auto sum = Grassmann<S>(n);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto& x = a(rows[r], c);
            if (x.is_zero(0.0)) continue;
            std::vector<int> rest = rows;
            rest.erase(rest.begin() + long(r));
            auto minor = rec(rest, c + 1);
            if (r % 2) sum -= x * minor;
            else sum += x * minor;
        }
        return sum;
    };
    return prefactor * rec(idx, col);
}

// Block matrix of shape p|q over the Grassmann algebra on n generators.
// Rows/columns 0..p-1 are even, p..p+q-1 odd. Entries are right coordinates:
// column j holds the coefficients of the image of the j-th basis vector, so
// the plain matrix product is composition.
template <class S>
class SuperMatrix {
public:
    using G = Grassmann<S>;

    SuperMatrix() = default;
    SuperMatrix(int p, int q, int n, MatrixParity par = MatrixParity::None)
        : p_(p), q_(q), n_(n), par_(par), m_(gmatrix_zero<S>(p + q, p + q, n)) {}
    SuperMatrix(int p, int q, GMatrix<S> m, MatrixParity par = MatrixParity::None)
        : p_(p), q_(q), par_(par), m_(std::move(m)) {
        if (m_.rows() != p + q || m_.cols() != p + q) throw std::invalid_argument("supermatrix shape mismatch");
        n_ = m_.data().empty() ? 0 : m_.data()[0].n();
        validate();
    }

    static SuperMatrix identity(int p, int q, int n) {
        return SuperMatrix(p, q, gmatrix_identity<S>(p + q, n), MatrixParity::Even);
    }
    static SuperMatrix from_body(int p, int q, int n, const Matrix<S>& b, MatrixParity par = MatrixParity::None) {
        return SuperMatrix(p, q, lift(b, n), par);
    }

    int p() const { return p_; }
    int q() const { return q_; }
    int n() const { return n_; }
    int dim() const { return p_ + q_; }
    MatrixParity declared_parity() const { return par_; }
    void declare(MatrixParity par) {
        par_ = par;
        validate();
    }
    int row_parity(int i) const { return i >= p_ ? 1 : 0; }

    G& operator()(int i, int j) { return m_(i, j); }
    const G& operator()(int i, int j) const { return m_(i, j); }
    const GMatrix<S>& mat() const { return m_; }
    GMatrix<S>& mat() { return m_; }

    GMatrix<S> A() const { return m_.block(0, 0, p_, p_); }
    GMatrix<S> B() const { return m_.block(0, p_, p_, q_); }
    GMatrix<S> C() const { return m_.block(p_, 0, q_, p_); }
    GMatrix<S> D() const { return m_.block(p_, p_, q_, q_); }

    Matrix<S> body() const { return body_of(m_); }

    bool body_is_zero() const {
        for (const auto& x : m_.data())
            if (!Ring<S>::is_zero(x.body(), 0.0)) return false;
        return true;
    }

    // Parity of the matrix as a linear map, if homogeneous.
    std::optional<MatrixParity> detect_parity() const {
        bool even = true, odd = true;
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) {
                const auto& x = m_(i, j);
                if (x.is_zero()) continue;
                int block = row_parity(i) ^ row_parity(j);
                int ep = x.parity();
                if (ep < 0) return std::nullopt;
                if ((ep ^ block) != 0) even = false;
                if ((ep ^ block) != 1) odd = false;
            }
        if (even) return MatrixParity::Even;
        if (odd) return MatrixParity::Odd;
        return std::nullopt;
    }

    SuperMatrix& operator+=(const SuperMatrix& o) {
        shape(o);
        m_ += o.m_;
        par_ = par_ == o.par_ ? par_ : MatrixParity::None;
        return *this;
    }
    SuperMatrix& operator-=(const SuperMatrix& o) {
        shape(o);
        m_ -= o.m_;
        par_ = par_ == o.par_ ? par_ : MatrixParity::None;
        return *this;
    }
    friend SuperMatrix operator+(SuperMatrix a, const SuperMatrix& b) { return a += b; }
    friend SuperMatrix operator-(SuperMatrix a, const SuperMatrix& b) { return a -= b; }
    SuperMatrix operator-() const { return SuperMatrix(p_, q_, -m_, par_); }

    friend SuperMatrix operator*(const SuperMatrix& a, const SuperMatrix& b) {
        a.shape(b);
        MatrixParity par = MatrixParity::None;
        if (a.par_ != MatrixParity::None && b.par_ != MatrixParity::None)
            par = (a.par_ == b.par_) ? MatrixParity::Even : MatrixParity::Odd;
        SuperMatrix out(a.p_, a.q_, a.m_ * b.m_);
        out.par_ = par;
        return out;
    }

    SuperMatrix scaled(const S& s) const { return SuperMatrix(p_, q_, gscale(m_, s), par_); }

    // Matrix of the map a*M for a Grassmann scalar a acting on the left:
    // entry (i,j) becomes C^{row parity}(a) * M_ij.
    SuperMatrix left_scaled(const G& a) const {
        SuperMatrix out = *this;
        G ac = a.conj_C();
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) out(i, j) = (row_parity(i) ? ac : a) * m_(i, j);
        out.par_ = MatrixParity::None;
        return out;
    }

    friend bool operator==(const SuperMatrix& a, const SuperMatrix& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && a.m_ == b.m_;
    }
    friend bool operator!=(const SuperMatrix& a, const SuperMatrix& b) { return !(a == b); }

    double max_abs() const {
        double r = 0.0;
        for (const auto& x : m_.data()) r = std::max(r, x.max_abs());
        return r;
    }

    // Row-sum norm with the l1 norm on each entry.
    double norm_inf() const {
        double r = 0.0;
        for (int i = 0; i < dim(); ++i) {
            double s = 0.0;
            for (int j = 0; j < dim(); ++j) s += m_(i, j).norm1();
            r = std::max(r, s);
        }
        return r;
    }

    // (A B; C D) -> (A^T C^T; -B^T D^T), for even matrices.
    SuperMatrix supertranspose() const {
        SuperMatrix out(p_, q_, n_, par_);
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) {
                const auto& x = m_(j, i);
                bool neg = row_parity(i) == 1 && row_parity(j) == 0;
                out(i, j) = neg ? -x : x;
            }
        return out;
    }

private:
    void shape(const SuperMatrix& o) const {
        if (o.p_ != p_ || o.q_ != q_ || o.n_ != n_) throw std::invalid_argument("supermatrix shape mismatch");
    }
    void validate() const {
        if (par_ == MatrixParity::None) return;
        int want = par_ == MatrixParity::Even ? 0 : 1;
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j) {
                const auto& x = m_(i, j);
                int block = row_parity(i) ^ row_parity(j);
                auto wrong = ((block ^ want) == 0) ? x.odd_part() : x.even_part();
                if (!wrong.is_zero()) throw ParityError("entry parity contradicts the declared matrix parity");
            }
    }

    int p_ = 0;
    int q_ = 0;
    int n_ = 0;
    MatrixParity par_ = MatrixParity::None;
    GMatrix<S> m_;
};

// Inverse via the numeric body inverse and a terminating geometric series.
template <class S>
GMatrix<S> ginverse(const GMatrix<S>& m, int n) {
    Matrix<S> b = body_of(m);
    Matrix<S> binv;
    try {
        binv = inverse(b);
    } catch (const RingError&) {
        throw SingularError("singular body");
    }
    GMatrix<S> binv_g = lift(binv, n);
    GMatrix<S> x = binv_g * (m - lift(b, n));  // nilpotent
    int k = m.rows();
    GMatrix<S> term = gmatrix_identity<S>(k, n);
    GMatrix<S> sum = term;
    for (int i = 1; i <= n; ++i) {
        term = -(term * x);
        bool zero = true;
        for (const auto& e : term.data())
            if (!e.is_zero(0.0)) { zero = false; break; }
        if (zero) break;
        sum += term;
    }
    return sum * binv_g;
}

template <class S>
SuperMatrix<S> inverse(const SuperMatrix<S>& m) {
    return SuperMatrix<S>(m.p(), m.q(), ginverse(m.mat(), m.n()), m.declared_parity() == MatrixParity::Even ? MatrixParity::Even : MatrixParity::None);
}

// Ber = Det(A - B D^{-1} C) Det(D)^{-1}.
template <class S>
Grassmann<S> berezinian(const SuperMatrix<S>& m) {
    if (m.detect_parity() != MatrixParity::Even) throw ParityError("berezinian needs an even matrix");
    int n = m.n();
    auto one = Grassmann<S>::constant(n, Ring<S>::one());
    GMatrix<S> A = m.A(), B = m.B(), C = m.C(), D = m.D();
    Grassmann<S> detD = one;
    GMatrix<S> schur = A;
    if (m.q() > 0) {
        GMatrix<S> Dinv;
        try {
            Dinv = ginverse(D, n);
        } catch (const SingularError&) {
            throw SingularError("berezinian: body of D is singular");
        }
        if (m.p() > 0) schur = A - B * Dinv * C;
        detD = even_determinant(D, n);
    }
    Grassmann<S> top = m.p() > 0 ? even_determinant(schur, n) : one;
    return top * detD.inverse();
}

// pi-Ber = |Det(A - B D^{-1} C)| Det(D)^{-1}, |x| = |body x| x / body x.
template <class S>
Grassmann<S> pi_berezinian(const SuperMatrix<S>& m) {
    if (m.detect_parity() != MatrixParity::Even) throw ParityError("pi_berezinian needs an even matrix");
    int n = m.n();
    auto one = Grassmann<S>::constant(n, Ring<S>::one());
    Grassmann<S> top = one;
    if (m.p() > 0) {
        GMatrix<S> schur = m.A();
        if (m.q() > 0) schur = m.A() - m.B() * ginverse(m.D(), n) * m.C();
        top = even_determinant(schur, n);
    }
    S b = top.body();
    if (Ring<S>::is_zero(b, 0.0)) throw SingularError("pi_berezinian: zero body determinant");
    bool negative;
    if constexpr (Ring<S>::complex) {
        if (Ring<S>::imag_d(b) != 0.0) throw RingError("pi_berezinian: non-real body determinant");
        negative = Ring<S>::real_d(b) < 0;
    } else {
        negative = Ring<S>::real_d(b) < 0;
    }
    Grassmann<S> detD = m.q() > 0 ? even_determinant(m.D(), n) : one;
    Grassmann<S> r = top * detD.inverse();
    return negative ? -r : r;
}

// exp of a matrix whose entries all have zero body; the series terminates.
template <class S>
SuperMatrix<S> exp_nilpotent(const SuperMatrix<S>& m) {
    if (!m.body_is_zero()) throw RingError("exp_nilpotent: entries must have zero body");
    int n = m.n();
    auto id = SuperMatrix<S>::identity(m.p(), m.q(), n);
    SuperMatrix<S> term = id, sum = id;
    for (int k = 1; k <= n + 1; ++k) {
        term = (term * m).scaled(Ring<S>::from_q(Q(1, k)));
        if (term.max_abs() == 0.0) break;
        sum += term;
    }
    sum.declare(MatrixParity::None);
    return sum;
}

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scaling and squaring with a degree-18 Taylor polynomial, float rings only.
template <class S>
SuperMatrix<S> exp_numeric(const SuperMatrix<S>& m, double tol) {
    static_assert(!Ring<S>::exact, "exp_numeric needs a float coefficient ring");
    auto raw = [](const SuperMatrix<S>& x) {
        double nrm = x.norm_inf();
        int s = 0;
        while (nrm / std::ldexp(1.0, s) > 0.5) {
            if (++s > 1024) throw ConvergenceError("exp_numeric: scaling count exceeded");
        }
        SuperMatrix<S> a = x.scaled(S(1.0 / std::ldexp(1.0, s)));
        auto id = SuperMatrix<S>::identity(x.p(), x.q(), x.n());
        SuperMatrix<S> term = id, sum = id;
        for (int k = 1; k <= 18; ++k) {
            term = (term * a).scaled(S(1.0 / k));
            sum += term;
        }
        for (int i = 0; i < s; ++i) sum = sum * sum;
        return sum;
    };
    SuperMatrix<S> e = raw(m);
    SuperMatrix<S> einv = raw(-m);
    auto res = e * einv - SuperMatrix<S>::identity(m.p(), m.q(), m.n());
    if (!(res.max_abs() <= tol)) throw ConvergenceError("exp_numeric: residual above tolerance");
    e.declare(MatrixParity::None);
    return e;
}

inline std::string parity_name(MatrixParity p) {
    switch (p) {
        case MatrixParity::Even: return "even";
        case MatrixParity::Odd: return "odd";
        default: return "none";
    }
}

template <class S>
nlohmann::json to_json(const SuperMatrix<S>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(row);
    }
    nlohmann::json par = m.declared_parity() == MatrixParity::None ? nlohmann::json() : nlohmann::json(parity_name(m.declared_parity()));
    return {{"p", m.p()}, {"q", m.q()}, {"entries", rows}, {"parity", par}};
}

template <class S>
SuperMatrix<S> supermatrix_from_json(const nlohmann::json& j) {
    int p = j.at("p").get<int>(), q = j.at("q").get<int>();
    const auto& rows = j.at("entries");
    if (int(rows.size()) != p + q) throw std::invalid_argument("entries must be (p+q)x(p+q)");
    int n = -1;
    std::vector<Grassmann<S>> flat;
    for (const auto& row : rows) {
        if (int(row.size()) != p + q) throw std::invalid_argument("entries must be (p+q)x(p+q)");
        for (const auto& e : row) {
            flat.push_back(grassmann_from_json<S>(e));
            if (n < 0) n = flat.back().n();
            if (flat.back().n() != n) throw GeneratorMismatch("entries disagree on n");
        }
    }
    GMatrix<S> g = gmatrix_zero<S>(p + q, p + q, n < 0 ? 0 : n);
    for (int i = 0; i < p + q; ++i)
        for (int k = 0; k < p + q; ++k) g(i, k) = flat[std::size_t(i) * (p + q) + k];
    MatrixParity par = MatrixParity::None;
    if (j.contains("parity") && j["parity"].is_string()) {
        auto s = j["parity"].get<std::string>();
        if (s == "even") par = MatrixParity::Even;
        else if (s == "odd") par = MatrixParity::Odd;
        else throw std::invalid_argument("parity must be even, odd or null");
    }
    return SuperMatrix<S>(p, q, std::move(g), par);
}

}  // namespace superalg
