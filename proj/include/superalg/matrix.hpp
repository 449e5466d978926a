#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "superalg/scalar.hpp"

namespace superalg {

// Dense row-major matrix. T is a scalar ring element or a Grassmann element.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, const T& fill) : r_(rows), c_(cols), d_(std::size_t(rows) * cols, fill) {}

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& operator()(int i, int j) { return d_[std::size_t(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return d_[std::size_t(i) * c_ + j]; }
    const std::vector<T>& data() const { return d_; }
    std::vector<T>& data() { return d_; }

    Matrix block(int i0, int j0, int rows, int cols) const {
        Matrix out(rows, cols, d_.empty() ? T() : d_[0]);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
        return out;
    }
    void set_block(int i0, int j0, const Matrix& b) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    Matrix& operator+=(const Matrix& o) {
        same_shape(o);
        for (std::size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        same_shape(o);
        for (std::size_t k = 0; k < d_.size(); ++k) d_[k] -= o.d_[k];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    Matrix operator-() const {
        Matrix m = *this;
        for (auto& x : m.d_) x = -x;
        return m;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.c_ != b.r_) throw std::invalid_argument("matrix product: shape mismatch");
        Matrix out(a.r_, b.c_, a.d_.empty() ? T() : a.d_[0] - a.d_[0]);
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                const T& x = a(i, k);
                for (int j = 0; j < b.c_; ++j) out(i, j) += x * b(k, j);
            }
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix transpose() const {
        Matrix out(c_, r_, d_.empty() ? T() : d_[0]);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

private:
    void same_shape(const Matrix& o) const {
        if (o.r_ != r_ || o.c_ != c_) throw std::invalid_argument("matrix shape mismatch");
    }
    int r_ = 0;
    int c_ = 0;
    std::vector<T> d_;
};

template <class S>
Matrix<S> scalar_identity(int n) {
    Matrix<S> m(n, n, Ring<S>::zero());
    for (int i = 0; i < n; ++i) m(i, i) = Ring<S>::one();
    return m;
}

template <class S>
Matrix<S> scalar_zero(int r, int c) {
    return Matrix<S>(r, c, Ring<S>::zero());
}

template <class S>
Matrix<S> scale(const Matrix<S>& m, const S& s) {
    Matrix<S> out = m;
    for (auto& x : out.data()) x *= s;
    return out;
}

template <class S>
Matrix<S> adjoint(const Matrix<S>& m) {
    Matrix<S> out(m.cols(), m.rows(), Ring<S>::zero());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(j, i) = Ring<S>::conj(m(i, j));
    return out;
}

template <class S>
double max_abs(const Matrix<S>& m) {
    double r = 0.0;
    for (const auto& x : m.data()) r = std::max(r, Ring<S>::abs(x));
    return r;
}

template <class S>
bool is_zero_matrix(const Matrix<S>& m, double tol = kFloatTol) {
    for (const auto& x : m.data())
        if (!Ring<S>::is_zero(x, tol)) return false;
    return true;
}

template <class S>
std::vector<S> mat_vec(const Matrix<S>& m, const std::vector<S>& v) {
    if (int(v.size()) != m.cols()) throw std::invalid_argument("mat_vec: size mismatch");
    std::vector<S> out(m.rows(), Ring<S>::zero());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

namespace detail {

// Pivot choice: first nonzero for exact rings, largest modulus for float rings.
template <class S>
int choose_pivot(const Matrix<S>& a, int col, int from, double tol) {
    int best = -1;
    double best_abs = 0.0;
    for (int i = from; i < a.rows(); ++i) {
        if (Ring<S>::is_zero(a(i, col), Ring<S>::exact ? 0.0 : tol)) continue;
        if (Ring<S>::exact) return i;
        double v = Ring<S>::abs(a(i, col));
        if (v > best_abs) { best_abs = v; best = i; }
    }
    return best;
}

template <class S>
void swap_rows(Matrix<S>& a, int i, int j) {
    if (i == j) return;
    for (int k = 0; k < a.cols(); ++k) std::swap(a(i, k), a(j, k));
}

}  // namespace detail

// Reduced row echelon form in place; returns pivot columns.
template <class S>
std::vector<int> rref(Matrix<S>& a, double tol = 1e-10) {
    std::vector<int> piv;
    int row = 0;
    for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
        int p = detail::choose_pivot(a, col, row, tol);
        if (p < 0) continue;
        detail::swap_rows(a, row, p);
        S inv = Ring<S>::one() / a(row, col);
        for (int k = 0; k < a.cols(); ++k) a(row, k) *= inv;
        for (int i = 0; i < a.rows(); ++i) {
            if (i == row || Ring<S>::is_zero(a(i, col), 0.0)) continue;
            S f = a(i, col);
            for (int k = 0; k < a.cols(); ++k) a(i, k) -= f * a(row, k);
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

template <class S>
int rank(Matrix<S> a, double tol = 1e-10) {
    return int(rref(a, tol).size());
}

// Columns form a basis of the kernel.
template <class S>
Matrix<S> kernel_basis(Matrix<S> a, double tol = 1e-10) {
    int n = a.cols();
    auto piv = rref(a, tol);
    std::vector<bool> is_piv(n, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    Matrix<S> k(n, int(free_cols.size()), Ring<S>::zero());
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
        int fc = free_cols[f];
        k(fc, int(f)) = Ring<S>::one();
        for (std::size_t r = 0; r < piv.size(); ++r) k(piv[r], int(f)) = -a(int(r), fc);
    }
    return k;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    int n = m.rows();
    Matrix<S> aug(n, 2 * n, Ring<S>::zero());
    aug.set_block(0, 0, m);
    for (int i = 0; i < n; ++i) aug(i, n + i) = Ring<S>::one();
    auto piv = rref(aug, tol);
    if (int(piv.size()) < n || piv[n - 1] != n - 1) throw RingError("singular matrix");
    return aug.block(0, n, n, n);
}

template <class S>
S determinant(Matrix<S> a, double tol = 1e-12) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    S det = Ring<S>::one();
    int n = a.rows();
    for (int col = 0; col < n; ++col) {
        int p = detail::choose_pivot(a, col, col, tol);
        if (p < 0) return Ring<S>::zero();
        if (p != col) {
            detail::swap_rows(a, col, p);
            det = -det;
        }
        det *= a(col, col);
        S inv = Ring<S>::one() / a(col, col);
        for (int i = col + 1; i < n; ++i) {
            if (Ring<S>::is_zero(a(i, col), 0.0)) continue;
            S f = a(i, col) * inv;
            for (int k = col; k < n; ++k) a(i, k) -= f * a(col, k);
        }
    }
    return det;
}

}  // namespace superalg
