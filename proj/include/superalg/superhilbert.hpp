#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "superalg/grassmann.hpp"
#include "superalg/matrix.hpp"
#include "superalg/supermatrix.hpp"

namespace superalg {

struct FormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sparse matrix stored by columns. Used for operators and for Gram matrices of
// forms; most operators here are signed permutations or close to it.
template <class S>
class LinearOp {
public:
    using R = Ring<S>;
    using Column = std::map<int, S>;

    LinearOp() = default;
    LinearOp(int rows, int cols) : rows_(rows), cols_(std::size_t(cols)) {}

    static LinearOp identity(int n) {
        LinearOp m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, R::one());
        return m;
    }
    static LinearOp from_dense(const Matrix<S>& d) {
        LinearOp m(d.rows(), d.cols());
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j) m.set(i, j, d(i, j));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return int(cols_.size()); }
    const Column& column(int j) const { return cols_[std::size_t(j)]; }

    S get(int i, int j) const {
        const auto& c = cols_[std::size_t(j)];
        auto it = c.find(i);
        return it == c.end() ? R::zero() : it->second;
    }
    void set(int i, int j, const S& v) {
        auto& c = cols_[std::size_t(j)];
        if (R::is_zero(v, 0.0)) c.erase(i);
        else c[i] = v;
    }
    void add(int i, int j, const S& v) {
        if (R::is_zero(v, 0.0)) return;
        auto& c = cols_[std::size_t(j)];
        auto it = c.find(i);
        if (it == c.end()) {
            c.emplace(i, v);
            return;
        }
        it->second += v;
        if (R::is_zero(it->second, 0.0)) c.erase(it);
    }

    std::vector<S> apply(const std::vector<S>& x) const {
        if (int(x.size()) != cols()) throw std::invalid_argument("operator applied to a vector of the wrong size");
        std::vector<S> y(std::size_t(rows_), R::zero());
        for (int j = 0; j < cols(); ++j) {
            if (R::is_zero(x[std::size_t(j)], 0.0)) continue;
            for (const auto& [i, v] : cols_[std::size_t(j)]) y[std::size_t(i)] += v * x[std::size_t(j)];
        }
        return y;
    }

    friend LinearOp operator*(const LinearOp& a, const LinearOp& b) {
        if (a.cols() != b.rows_) throw std::invalid_argument("operator product: shape mismatch");
        LinearOp out(a.rows_, b.cols());
        for (int j = 0; j < b.cols(); ++j)
            for (const auto& [k, bv] : b.cols_[std::size_t(j)])
                for (const auto& [i, av] : a.cols_[std::size_t(k)]) out.add(i, j, av * bv);
        return out;
    }
    friend LinearOp operator+(LinearOp a, const LinearOp& b) {
        a.same_shape(b);
        for (int j = 0; j < b.cols(); ++j)
            for (const auto& [i, v] : b.cols_[std::size_t(j)]) a.add(i, j, v);
        return a;
    }
    friend LinearOp operator-(LinearOp a, const LinearOp& b) {
        a.same_shape(b);
        for (int j = 0; j < b.cols(); ++j)
            for (const auto& [i, v] : b.cols_[std::size_t(j)]) a.add(i, j, -v);
        return a;
    }
    friend LinearOp operator*(const S& s, LinearOp a) {
        if (R::is_zero(s, 0.0)) return LinearOp(a.rows_, a.cols());
        for (auto& c : a.cols_)
            for (auto& [i, v] : c) v = s * v;
        return a;
    }
    friend bool operator==(const LinearOp& a, const LinearOp& b) {
        if (a.rows_ != b.rows_ || a.cols() != b.cols()) return false;
        for (int j = 0; j < a.cols(); ++j) {
            const auto &ca = a.cols_[std::size_t(j)], &cb = b.cols_[std::size_t(j)];
            if (ca.size() != cb.size()) return false;
            for (auto ia = ca.begin(), ib = cb.begin(); ia != ca.end(); ++ia, ++ib)
                if (ia->first != ib->first || !R::eq(ia->second, ib->second, 0.0)) return false;
        }
        return true;
    }

    // Conjugate transpose.
    LinearOp adjoint() const {
        LinearOp out(cols(), rows_);
        for (int j = 0; j < cols(); ++j)
            for (const auto& [i, v] : cols_[std::size_t(j)]) out.set(j, i, R::conj(v));
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : cols_)
            for (const auto& [i, v] : c) m = std::max(m, R::abs(v));
        return m;
    }
    std::size_t nonzeros() const {
        std::size_t k = 0;
        for (const auto& c : cols_) k += c.size();
        return k;
    }

    Matrix<S> dense() const {
        Matrix<S> d(rows_, cols(), R::zero());
        for (int j = 0; j < cols(); ++j)
            for (const auto& [i, v] : cols_[std::size_t(j)]) d(i, j) = v;
        return d;
    }

    // Entries whose row and column parity differ by p.
    LinearOp parity_part(const std::vector<int>& row_par, const std::vector<int>& col_par, int p) const {
        LinearOp out(rows_, cols());
        for (int j = 0; j < cols(); ++j)
            for (const auto& [i, v] : cols_[std::size_t(j)])
                if (((row_par[std::size_t(i)] + col_par[std::size_t(j)]) & 1) == p) out.set(i, j, v);
        return out;
    }

    // 0 or 1 for a homogeneous operator, -1 when mixed. The zero operator is even.
    int parity(const std::vector<int>& row_par, const std::vector<int>& col_par) const {
        int p = -2;
        for (int j = 0; j < cols(); ++j)
            for (const auto& [i, v] : cols_[std::size_t(j)]) {
                int q = (row_par[std::size_t(i)] + col_par[std::size_t(j)]) & 1;
                if (p == -2) p = q;
                else if (p != q) return -1;
            }
        return p == -2 ? 0 : p;
    }

private:
    void same_shape(const LinearOp& o) const {
        if (o.rows_ != rows_ || o.cols() != cols()) throw std::invalid_argument("operator shape mismatch");
    }
    int rows_ = 0;
    std::vector<Column> cols_;
};

// Value of the sesquilinear form with Gram matrix K: conj(x)^T K y.
template <class S>
S form_value(const LinearOp<S>& K, const std::vector<S>& x, const std::vector<S>& y) {
    auto ky = K.apply(y);
    S s = Ring<S>::zero();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!Ring<S>::is_zero(x[i], 0.0)) s += Ring<S>::conj(x[i]) * ky[i];
    return s;
}

template <class S>
S form_value(const Matrix<S>& K, const std::vector<S>& x, const std::vector<S>& y) {
    auto ky = mat_vec(K, y);
    S s = Ring<S>::zero();
    for (std::size_t i = 0; i < x.size(); ++i) s += Ring<S>::conj(x[i]) * ky[i];
    return s;
}

// Hermitian with positive leading minors.
template <class S>
bool is_positive_definite(const Matrix<S>& m) {
    using R = Ring<S>;
    int n = m.rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!R::eq(m(i, j), R::conj(m(j, i)), kFloatTol)) return false;
    for (int k = 1; k <= n; ++k) {
        S d = determinant(m.block(0, 0, k, k));
        if (!(R::real_d(d) > (R::exact ? 0.0 : kFloatTol))) return false;
        if (R::exact && R::imag_d(d) != 0.0) return false;
    }
    return true;
}

// Finite-dimensional graded space E = E0 + E1 (even basis vectors first) with
// a metric and a super scalar product, both given by Gram matrices.
template <class S>
struct ProtoSuperHilbert {
    using R = Ring<S>;
    int d0 = 0;
    int d1 = 0;
    Matrix<S> metric;
    Matrix<S> super_sp;

    ProtoSuperHilbert() = default;
    ProtoSuperHilbert(int d0_, int d1_, Matrix<S> g, Matrix<S> s)
        : d0(d0_), d1(d1_), metric(std::move(g)), super_sp(std::move(s)) {
        validate();
    }

    // C with the standard metric and <a|b> = conj(a) b.
    static ProtoSuperHilbert scalars() {
        return ProtoSuperHilbert(1, 0, scalar_identity<S>(1), scalar_identity<S>(1));
    }

    int dim() const { return d0 + d1; }
    int parity(int a) const { return a >= d0 ? 1 : 0; }
    std::vector<int> parities() const {
        std::vector<int> p;
        for (int a = 0; a < dim(); ++a) p.push_back(parity(a));
        return p;
    }

    void validate() const {
        int d = dim();
        if (metric.rows() != d || metric.cols() != d || super_sp.rows() != d || super_sp.cols() != d)
            throw FormError("Gram matrices do not match the graded dimension");
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                if (parity(a) != parity(b) && !R::is_zero(metric(a, b), kFloatTol))
                    throw FormError("metric pairs even and odd vectors");
        if (!is_positive_definite(metric)) throw FormError("metric is not positive definite");
        if (graded_symmetry_defect(super_sp) > (R::exact ? 0.0 : kFloatTol))
            throw FormError("super scalar product is not graded symmetric");
        if (R::is_zero(determinant(super_sp), R::exact ? 0.0 : 1e-9))
            throw FormError("super scalar product is degenerate");
    }

    // max |K_ba - (-1)^{p(a)p(b)} conj(K_ab)|
    double graded_symmetry_defect(const Matrix<S>& K) const {
        double m = 0.0;
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b) {
                S t = R::conj(K(a, b));
                if (parity(a) & parity(b)) t = -t;
                m = std::max(m, R::abs(K(b, a) - t));
            }
        return m;
    }

    // Even, graded symmetric, positive on E0 and -i times positive on E1.
    bool is_super_metric() const {
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b)
                if (parity(a) != parity(b) && !R::is_zero(super_sp(a, b), kFloatTol)) return false;
        if (graded_symmetry_defect(super_sp) > (R::exact ? 0.0 : kFloatTol)) return false;
        if (!is_positive_definite(super_sp.block(0, 0, d0, d0))) return false;
        if (d1 == 0) return true;
        auto odd = super_sp.block(d0, d0, d1, d1);
        if (!R::complex) return false;
        return is_positive_definite(scale(odd, -R::imag_unit()));
    }

    // Conjugation C on E: flips the sign of odd components.
    std::vector<S> conj_C(std::vector<S> v) const {
        for (int a = d0; a < dim(); ++a) v[std::size_t(a)] = -v[std::size_t(a)];
        return v;
    }
};

// Functions of n odd variables with values in E: psi = sum_I xi^I psi_I,
// stored at index I * dim(E) + a.
template <class S>
class FnSpace {
public:
    using R = Ring<S>;
    using Vec = std::vector<S>;

    FnSpace(ProtoSuperHilbert<S> base, int n) : E_(std::move(base)), n_(n) {
        if (n < 0 || n > kMaxGenerators) throw std::invalid_argument("odd variable count out of range");
    }

    const ProtoSuperHilbert<S>& base() const { return E_; }
    int n() const { return n_; }
    int fiber_dim() const { return E_.dim(); }
    int dim() const { return (1 << n_) * E_.dim(); }
    int index(Mask I, int a) const { return int(I) * E_.dim() + a; }
    Mask monomial_of(int idx) const { return Mask(idx / E_.dim()); }
    int component_of(int idx) const { return idx % E_.dim(); }
    int parity(int idx) const { return (std::popcount(monomial_of(idx)) + E_.parity(component_of(idx))) & 1; }
    std::vector<int> parities() const {
        std::vector<int> p;
        for (int i = 0; i < dim(); ++i) p.push_back(parity(i));
        return p;
    }
    Mask full() const { return IndexSet::full(n_).bits; }

    Vec zero() const { return Vec(std::size_t(dim()), R::zero()); }
    Vec basis(int idx) const {
        auto v = zero();
        v[std::size_t(idx)] = R::one();
        return v;
    }
    Vec basis(Mask I, int a) const { return basis(index(I, a)); }

    // Block diagonal: sum_I <chi_I, psi_I>_E.
    LinearOp<S> metric_form() const {
        LinearOp<S> K(dim(), dim());
        int d = E_.dim();
        for (Mask I = 0; I <= full(); ++I)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) K.set(index(I, a), index(I, b), E_.metric(a, b));
        return K;
    }

    // sum_I (-1)^{eps(I,I^c)} <C^{|I|} chi_I | C^n psi_{I^c}>_E
    LinearOp<S> super_sp_form() const {
        LinearOp<S> K(dim(), dim());
        int d = E_.dim();
        for (Mask I = 0; I <= full(); ++I) {
            Mask Ic = full() & ~I;
            int sign = epsilon_sign(I, Ic);
            int k = std::popcount(I);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    int s = sign;
                    if ((k & 1) && E_.parity(a)) s = -s;
                    if ((n_ & 1) && E_.parity(b)) s = -s;
                    S v = E_.super_sp(a, b);
                    K.set(index(I, a), index(Ic, b), s > 0 ? v : S(-v));
                }
        }
        return K;
    }

    // C on functions: (-1)^{parity of the component}.
    LinearOp<S> conj_C() const {
        LinearOp<S> c(dim(), dim());
        for (int i = 0; i < dim(); ++i) c.set(i, i, parity(i) ? S(-R::one()) : R::one());
        return c;
    }

    // Left multiplication by xi_j.
    LinearOp<S> mult_xi(int j) const {
        check_index(j);
        LinearOp<S> m(dim(), dim());
        Mask bit = Mask(1) << (j - 1);
        for (Mask I = 0; I <= full(); ++I) {
            if (I & bit) continue;
            S s = epsilon_sign(bit, I) > 0 ? R::one() : S(-R::one());
            for (int a = 0; a < E_.dim(); ++a) m.set(index(I | bit, a), index(I, a), s);
        }
        return m;
    }

    // d/dxi_j: xi^I -> (-1)^{#(I before j)} xi^{I \ j}.
    LinearOp<S> d_xi(int j) const {
        check_index(j);
        LinearOp<S> m(dim(), dim());
        Mask bit = Mask(1) << (j - 1);
        for (Mask I = 0; I <= full(); ++I) {
            if (!(I & bit)) continue;
            S s = epsilon_sign(bit, I & ~bit) > 0 ? R::one() : S(-R::one());
            for (int a = 0; a < E_.dim(); ++a) m.set(index(I & ~bit, a), index(I, a), s);
        }
        return m;
    }

    // Inv_j = xi_j + i d/dxi_j
    LinearOp<S> inv_operator(int j) const { return mult_xi(j) + R::imag_unit() * d_xi(j); }

    // (-i)^n Inv_n ... Inv_1
    LinearOp<S> fourier_via_inv() const {
        auto F = LinearOp<S>::identity(dim());
        for (int j = 1; j <= n_; ++j) F = inv_operator(j) * F;
        return one_or_minus_i_pow(n_) * F;
    }

    // Berezin integral over xi of exp(-i sum_p xi_p kappa_p) psi(xi), computed in
    // the Grassmann algebra on (xi, kappa) and read back with kappa renamed xi.
    LinearOp<S> fourier_direct() const {
        if (2 * n_ > kMaxGenerators) throw std::invalid_argument("fourier_direct: too many odd variables");
        int N = 2 * n_;
        Grassmann<S> arg(N);
        for (int p = 1; p <= n_; ++p)
            arg += Grassmann<S>::generator(N, p) * Grassmann<S>::generator(N, n_ + p) * S(-R::imag_unit());
        auto kernel = arg.exp_nilpotent();
        auto ksupp = kernel.support();
        Mask fiber = full();
        LinearOp<S> F(dim(), dim());
        for (Mask I = 0; I <= full(); ++I) {
            // integral of kernel * xi^I, term by term
            std::map<Mask, S> image;
            for (Mask M : ksupp) {
                if (M & I) continue;
                Mask T = M | I;
                if ((T & fiber) != fiber) continue;
                Mask P = T & ~fiber;
                int s = epsilon_sign(M, I) * epsilon_sign(fiber, P);
                S v = kernel[M];
                image[P >> n_] += s > 0 ? v : S(-v);
            }
            for (const auto& [J, v] : image)
                for (int a = 0; a < E_.dim(); ++a) F.set(index(J, a), index(I, a), v);
        }
        return F;
    }

    // Componentwise: xi^I -> 1ormi(|I^c|) (-1)^{eps(I,I^c)} xi^{I^c}
    LinearOp<S> fourier_componentwise() const {
        LinearOp<S> F(dim(), dim());
        for (Mask I = 0; I <= full(); ++I) {
            Mask Ic = full() & ~I;
            S v = one_or_minus_i<S>(std::popcount(Ic));
            if (epsilon_sign(I, Ic) < 0) v = -v;
            for (int a = 0; a < E_.dim(); ++a) F.set(index(Ic, a), index(I, a), v);
        }
        return F;
    }

    // Twisted Hodge star: v^I (x) e -> *(v^I) (x) J_{|I|}(e), J_k = C^n J C^k.
    LinearOp<S> twisted_hodge_star(const Matrix<S>& J) const {
        int d = E_.dim();
        if (J.rows() != d || J.cols() != d) throw std::invalid_argument("twisted_hodge_star: J has the wrong size");
        LinearOp<S> H(dim(), dim());
        for (Mask I = 0; I <= full(); ++I) {
            Mask Ic = full() & ~I;
            int k = std::popcount(I);
            int sign = epsilon_sign(I, Ic);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    int s = sign;
                    if ((k & 1) && E_.parity(a)) s = -s;
                    if ((n_ & 1) && E_.parity(b)) s = -s;
                    S v = J(b, a);
                    H.set(index(Ic, b), index(I, a), s > 0 ? v : S(-v));
                }
        }
        return H;
    }

    // Restriction of an operator to the columns of one parity.
    LinearOp<S> restrict_columns(const LinearOp<S>& A, int alpha) const {
        LinearOp<S> out(A.rows(), A.cols());
        for (int j = 0; j < A.cols(); ++j)
            if (parity(j) == alpha)
                for (const auto& [i, v] : A.column(j)) out.set(i, j, v);
        return out;
    }

private:
    static S one_or_minus_i_pow(int n) {
        // (-i)^n
        S r = R::one();
        for (int k = 0; k < n; ++k) r *= -R::imag_unit();
        return r;
    }
    void check_index(int j) const {
        if (j < 1 || j > n_) throw std::out_of_range("odd variable index out of range");
    }
    ProtoSuperHilbert<S> E_;
    int n_;
};

template <class S>
S metric_g0(const FnSpace<S>& V, const std::vector<S>& chi, const std::vector<S>& psi) {
    return form_value(V.metric_form(), chi, psi);
}

template <class S>
S super_sp_g0(const FnSpace<S>& V, const std::vector<S>& chi, const std::vector<S>& psi) {
    return form_value(V.super_sp_form(), chi, psi);
}

template <class S>
LinearOp<S> inv_operator(const FnSpace<S>& V, int j) {
    return V.inv_operator(j);
}

template <class S>
std::vector<S> fourier_odd(const FnSpace<S>& V, const std::vector<S>& psi) {
    if (!Ring<S>::complex) throw RingError("the odd Fourier transform needs a complex coefficient ring");
    return V.fourier_via_inv().apply(psi);
}

// Hodge star on the exterior algebra of an oriented orthonormal basis v_1..v_n,
// stored like a Grassmann element (coefficient of v^I at mask I).
template <class S>
Grassmann<S> hodge_star(const Grassmann<S>& w) {
    int n = w.n();
    Mask full = IndexSet::full(n).bits;
    Grassmann<S> out(n);
    for (Mask I = 0; I <= full; ++I) {
        if (Ring<S>::is_zero(w[I], 0.0)) continue;
        Mask Ic = full & ~I;
        out[Ic] = epsilon_sign(I, Ic) > 0 ? w[I] : S(-w[I]);
    }
    return out;
}

template <class S>
LinearOp<S> hodge_star_op(int n, int dimE = 1) {
    FnSpace<S> V(ProtoSuperHilbert<S>::scalars(), n);
    Mask full = V.full();
    LinearOp<S> H((1 << n) * dimE, (1 << n) * dimE);
    for (Mask I = 0; I <= full; ++I) {
        Mask Ic = full & ~I;
        S v = epsilon_sign(I, Ic) > 0 ? Ring<S>::one() : S(-Ring<S>::one());
        for (int a = 0; a < dimE; ++a) H.set(int(Ic) * dimE + a, int(I) * dimE + a, v);
    }
    return H;
}

// J with <e|f> = <J e, f> for all e, f: J = G^{-1} S^H.
template <class S>
Matrix<S> j_from_forms(const ProtoSuperHilbert<S>& E) {
    return inverse(E.metric) * adjoint(E.super_sp);
}

template <class S>
LinearOp<S> twisted_hodge_star(const FnSpace<S>& V, const Matrix<S>& J) {
    return V.twisted_hodge_star(J);
}

// Residual of  <Av|w> + <v|A0 w> + <C v|A1 w> = 0  over a basis, with A0, A1 the
// even and odd parts of A. The sign flag gives graded symmetry instead.
template <class S>
double graded_skew_residual(const LinearOp<S>& A, const LinearOp<S>& K, const std::vector<int>& par, int sign = 1) {
    auto A0 = A.parity_part(par, par, 0);
    auto A1 = A.parity_part(par, par, 1);
    LinearOp<S> C(int(par.size()), int(par.size()));
    for (std::size_t i = 0; i < par.size(); ++i) C.set(int(i), int(i), par[i] ? S(-Ring<S>::one()) : Ring<S>::one());
    auto R = K * A0 + C * K * A1;
    if (sign < 0) R = A.adjoint() * K - R;
    else R = A.adjoint() * K + R;
    return R.max_abs();
}

template <class S>
double check_graded_skew(const LinearOp<S>& A, const LinearOp<S>& K, const std::vector<int>& par) {
    return graded_skew_residual(A, K, par, 1);
}

template <class S>
double check_graded_symmetric(const LinearOp<S>& A, const LinearOp<S>& K, const std::vector<int>& par) {
    return graded_skew_residual(A, K, par, -1);
}

template <class S>
double check_graded_skew(const FnSpace<S>& V, const LinearOp<S>& A) {
    return check_graded_skew(A, V.super_sp_form(), V.parities());
}

// Graded space with Gram matrices of a metric and a super scalar product, in
// the sparse form used by the equivalence check.
template <class S>
struct FormedSpace {
    std::vector<int> parity;
    LinearOp<S> metric;
    LinearOp<S> super_sp;

    static FormedSpace of(const FnSpace<S>& V) { return {V.parities(), V.metric_form(), V.super_sp_form()}; }
    static FormedSpace of(const ProtoSuperHilbert<S>& E) {
        return {E.parities(), LinearOp<S>::from_dense(E.metric), LinearOp<S>::from_dense(E.super_sp)};
    }
};

struct EquivalenceReport {
    bool kernels_span = false;
    bool metric_preserved = false;
    bool super_sp_rule = false;
    double metric_residual = 0.0;
    double super_sp_residual = 0.0;
    bool ok() const { return kernels_span && metric_preserved && super_sp_rule; }
};

// Equivalence of super Hilbert spaces for a bijection A: X -> Y:
//  (i)   ker A0 + ker A1 = X
//  (ii)  <Ax, Ay> = <x, y>
//  (iii) <Ax|Ay> = <x|y> for y in ker A1; = <Cx|y> for x in ker A1, y in ker A0;
//        = i <Cx|y> for x, y in ker A0.
template <class S>
EquivalenceReport shs_equivalence_report(const LinearOp<S>& A, const FormedSpace<S>& X, const FormedSpace<S>& Y,
                                         double tol = 0.0) {
    using R = Ring<S>;
    int n = A.cols();
    if (A.rows() != int(Y.parity.size()) || n != int(X.parity.size()))
        throw std::invalid_argument("equivalence check: operator does not match the spaces");
    auto Ad = A.dense();
    if (A.rows() != n || rank(Ad) != n) throw std::invalid_argument("equivalence check: operator is not bijective");
    EquivalenceReport rep;

    auto A0 = A.parity_part(Y.parity, X.parity, 0).dense();
    auto A1 = A.parity_part(Y.parity, X.parity, 1).dense();
    auto k0 = kernel_basis(A0), k1 = kernel_basis(A1);
    Matrix<S> both(n, k0.cols() + k1.cols(), R::zero());
    both.set_block(0, 0, k0);
    both.set_block(0, k0.cols(), k1);
    rep.kernels_span = both.cols() > 0 && rank(both) == n;

    rep.metric_residual = (A.adjoint() * Y.metric * A - X.metric).max_abs();
    rep.metric_preserved = rep.metric_residual <= tol;

    auto col = [](const Matrix<S>& m, int j) {
        std::vector<S> v(std::size_t(m.rows()));
        for (int i = 0; i < m.rows(); ++i) v[std::size_t(i)] = m(i, j);
        return v;
    };
    auto cflip = [&](std::vector<S> v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (X.parity[i]) v[i] = -v[i];
        return v;
    };
    auto lhs = [&](const std::vector<S>& x, const std::vector<S>& y) {
        return form_value(Y.super_sp, A.apply(x), A.apply(y));
    };
    double res = 0.0;
    for (int a = 0; a < n; ++a)
        for (int j = 0; j < k1.cols(); ++j) {
            auto x = col(scalar_identity<S>(n), a), y = col(k1, j);
            res = std::max(res, R::abs(lhs(x, y) - form_value(X.super_sp, x, y)));
        }
    for (int a = 0; a < k1.cols(); ++a)
        for (int j = 0; j < k0.cols(); ++j) {
            auto x = col(k1, a), y = col(k0, j);
            res = std::max(res, R::abs(lhs(x, y) - form_value(X.super_sp, cflip(x), y)));
        }
    if (k0.cols() > 0) {
        S iu = R::imag_unit();
        for (int a = 0; a < k0.cols(); ++a)
            for (int j = 0; j < k0.cols(); ++j) {
                auto x = col(k0, a), y = col(k0, j);
                res = std::max(res, R::abs(lhs(x, y) - iu * form_value(X.super_sp, cflip(x), y)));
            }
    }
    rep.super_sp_residual = res;
    rep.super_sp_rule = res <= tol;
    return rep;
}

template <class S>
bool check_shs_equivalence(const LinearOp<S>& A, const FormedSpace<S>& X, const FormedSpace<S>& Y, double tol = 0.0) {
    return shs_equivalence_report(A, X, Y, tol).ok();
}

// Extension of a form on E to E (x) Lambda_n, vectors written v.l:
//   <v.l | w.m> = <v|w0> conj(l) m + <v|w1> C(conj(l)) m
// with w0, w1 the even and odd parts of w. Vectors are lists of Grassmann
// coefficients, one per basis vector of E.
template <class S>
Grassmann<S> extend_form(const std::vector<int>& par, const LinearOp<S>& K, const std::vector<Grassmann<S>>& x,
                         const std::vector<Grassmann<S>>& y) {
    if (x.size() != par.size() || y.size() != par.size())
        throw std::invalid_argument("extend_form: vector length does not match the space");
    int n = x.empty() ? 0 : x[0].n();
    Grassmann<S> out(n);
    for (int b = 0; b < K.cols(); ++b) {
        const auto& yb = y[std::size_t(b)];
        if (yb.is_zero(0.0)) continue;
        for (const auto& [a, s] : K.column(b)) {
            if (Ring<S>::is_zero(s, 0.0) || x[std::size_t(a)].is_zero(0.0)) continue;
            Grassmann<S> lc = x[std::size_t(a)];
            if constexpr (Ring<S>::complex) lc = lc.complex_conjugate();
            if (par[std::size_t(b)]) lc = lc.conj_C();
            out += (lc * yb) * s;
        }
    }
    return out;
}

template <class S>
Grassmann<S> extend_form_to_A(const ProtoSuperHilbert<S>& E, const std::vector<Grassmann<S>>& x,
                              const std::vector<Grassmann<S>>& y) {
    if (int(x.size()) != E.dim() || int(y.size()) != E.dim())
        throw std::invalid_argument("extend_form_to_A: vector length does not match E");
    return extend_form(E.parities(), LinearOp<S>::from_dense(E.super_sp), x, y);
}

namespace detail {

template <class S>
nlohmann::json scalar_json(const S& v) {
    auto im = Ring<S>::im_json(v);
    if (im.is_null()) return Ring<S>::re_json(v);
    return nlohmann::json::array({Ring<S>::re_json(v), im});
}

template <class S>
S scalar_from_json(const nlohmann::json& j) {
    if (j.is_array()) return Ring<S>::from_json(j.at(0), j.at(1));
    return Ring<S>::from_json(j, nullptr);
}

template <class S>
nlohmann::json matrix_json(const Matrix<S>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(scalar_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

template <class S>
Matrix<S> matrix_from_json(const nlohmann::json& j, int d) {
    if (!j.is_array() || int(j.size()) != d) throw FormError("Gram matrix has the wrong number of rows");
    Matrix<S> m(d, d, Ring<S>::zero());
    for (int i = 0; i < d; ++i) {
        if (!j[i].is_array() || int(j[i].size()) != d) throw FormError("Gram matrix row has the wrong length");
        for (int k = 0; k < d; ++k) m(i, k) = scalar_from_json<S>(j[i][k]);
    }
    return m;
}

}  // namespace detail

// Complex entries are written as [re, im]; exact values as strings.
template <class S>
nlohmann::json to_json(const ProtoSuperHilbert<S>& E) {
    return {{"d0", E.d0},
            {"d1", E.d1},
            {"metric", detail::matrix_json(E.metric)},
            {"super_sp", detail::matrix_json(E.super_sp)}};
}

template <class S>
ProtoSuperHilbert<S> proto_super_hilbert_from_json(const nlohmann::json& j) {
    int d0 = j.at("d0").get<int>(), d1 = j.at("d1").get<int>();
    if (d0 < 0 || d1 < 0) throw FormError("negative graded dimension");
    return ProtoSuperHilbert<S>(d0, d1, detail::matrix_from_json<S>(j.at("metric"), d0 + d1),
                                detail::matrix_from_json<S>(j.at("super_sp"), d0 + d1));
}

// Function psi = sum_I xi^I psi_I as {"n", "components": [{"index", "value": [...]}]}.
template <class S>
nlohmann::json to_json(const FnSpace<S>& V, const std::vector<S>& psi) {
    nlohmann::json comps = nlohmann::json::array();
    int d = V.fiber_dim();
    for (Mask I = 0; I <= V.full(); ++I) {
        bool any = false;
        nlohmann::json val = nlohmann::json::array();
        for (int a = 0; a < d; ++a) {
            const S& v = psi[std::size_t(V.index(I, a))];
            any = any || !Ring<S>::is_zero(v, 0.0);
            val.push_back(detail::scalar_json(v));
        }
        if (any) comps.push_back({{"index", IndexSet(I).to_list()}, {"value", val}});
    }
    return {{"n", V.n()}, {"components", comps}};
}

template <class S>
std::vector<S> fn_from_json(const FnSpace<S>& V, const nlohmann::json& j) {
    if (j.at("n").get<int>() != V.n()) throw GeneratorMismatch("function has the wrong number of odd variables");
    auto psi = V.zero();
    for (const auto& c : j.at("components")) {
        IndexSet I;
        for (int k : c.at("index")) {
            if (k < 1 || k > V.n()) throw std::out_of_range("monomial index out of range");
            I.insert(k);
        }
        const auto& val = c.at("value");
        if (int(val.size()) != V.fiber_dim()) throw FormError("component has the wrong length");
        for (int a = 0; a < V.fiber_dim(); ++a) psi[std::size_t(V.index(I.bits, a))] = detail::scalar_from_json<S>(val[a]);
    }
    return psi;
}

}  // namespace superalg
