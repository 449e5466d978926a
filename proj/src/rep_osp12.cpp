#include <random>

#include "superalg/repharness.hpp"

namespace superalg {

namespace {

using GQ = Grassmann<Q>;
using LE = LieElement<Q>;
using SM = SuperMatrix<Q>;
using Form = std::array<Q, 4>;  // coefficients of (a, b, c, d)

const SuperLieAlgebra& osp() {
    static const SuperLieAlgebra a = SuperLieAlgebra::osp12();
    return a;
}

Form lf(Q a, Q b, Q c, Q d) { return {a, b, c, d}; }
const Q half = qfrac(1, 2);

Q eval(const Form& f, const std::array<Q, 4>& p) { return f[0] * p[0] + f[1] * p[1] + f[2] * p[2] + f[3] * p[3]; }

Form scaled(const Form& f, const Q& s) { return {f[0] * s, f[1] * s, f[2] * s, f[3] * s}; }
Form added(const Form& f, const Form& g) { return {f[0] + g[0], f[1] + g[1], f[2] + g[2], f[3] + g[3]}; }

// e_i^R on the coordinate functions: e1 = diag(1,-1), e2 = E12, e3 = E21 acting from the left.
Form derive(int i, const Form& f) {
    if (i == 1) return {f[0], f[1], -f[2], -f[3]};
    if (i == 2) return {0, 0, f[0], f[1]};
    return {f[2], f[3], 0, 0};
}

OspEntry entry(Form l0, Form l1 = {}, Form l2 = {}, Form l3 = {}) { return OspEntry{{l0, l1, l2, l3}}; }

OspEntry adjoint_entry(const OspEntry& e) {
    OspEntry r;
    r.L[0] = e.L[0];
    for (int i = 1; i <= 3; ++i) {
        r.L[0] = added(r.L[0], scaled(derive(i, e.L[std::size_t(i)]), Q(-1)));
        r.L[std::size_t(i)] = scaled(e.L[std::size_t(i)], Q(-1));
    }
    return r;
}

// index in (1, xi eta, xi, eta) of the monomial mask (xi = th1, eta = th2)
int slot(Mask M) {
    static const int s[4] = {0, 2, 3, 1};
    return s[M];
}
Mask mask_of(int slot_index) {
    static const Mask m[4] = {0, 3, 1, 2};
    return m[slot_index];
}

std::array<Q, 4> inverse_point(const std::array<Q, 4>& p) { return {p[3], -p[1], -p[2], p[0]}; }

void require_sl2(const std::array<Q, 4>& p) {
    if (p[0] * p[3] - p[1] * p[2] != 1) throw std::invalid_argument("osp12: body point must satisfy ad - bc = 1");
}

Matrix<Q> body_group(const std::array<Q, 4>& p) {
    Matrix<Q> g(3, 3, Q(0));
    g(0, 0) = 1;
    g(1, 1) = p[0];
    g(1, 2) = p[1];
    g(2, 1) = p[2];
    g(2, 2) = p[3];
    return g;
}

LE v_osp(int n = 2) {
    LE v(osp(), n);
    v[3] = GQ::generator(n, 1);
    v[4] = GQ::generator(n, 2);
    return v;
}

LE apply_body(const Matrix<Q>& M, const LE& x) { return apply(SM::from_body(3, 2, x.n(), M), x); }

SM from_rows(int p, int q, const std::vector<std::vector<GQ>>& rows) {
    SM m(p, q, rows[0][0].n());
    for (int i = 0; i < p + q; ++i)
        for (int j = 0; j < p + q; ++j) m(i, j) = rows[std::size_t(i)][std::size_t(j)];
    return m;
}

std::array<Q, 4> random_sl2(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
    Q a;
    do a = qfrac(num(rng), den(rng));
    while (a == 0);
    Q b = qfrac(num(rng), den(rng)), c = qfrac(num(rng), den(rng));
    return {a, b, c, (1 + b * c) / a};
}

// Vector field data of f_i^R at a body point: coefficients of e_1..e_3 and of d/dxi, d/deta.
struct VfData {
    std::array<GQ, 3> e;
    GQ dxi, deta;
};

VfData vf_at(int i, const std::array<Q, 4>& p) {
    int n = 2;
    auto v = v_osp(n);
    auto Y = LE::basis(osp(), n, 2 + i);
    auto h = series_of_ad(SeriesKind::H, apply_body(osp_ad(p), v), Y);
    auto b = series_of_ad(SeriesKind::BMinus, v, apply_body(osp_ad(inverse_point(p)), Y));
    return {{-h[0], -h[1], -h[2]}, b[3], b[4]};
}

// Entry values of the operator matrix of f_i^R at p: [row][col][0..3].
using PointMatrix = std::array<std::array<std::array<Q, 4>, 4>, 4>;

PointMatrix operator_at(int i, const std::array<Q, 4>& p) {
    int n = 2;
    auto vf = vf_at(i, p);
    PointMatrix out{};
    for (int col = 0; col < 4; ++col) {
        auto mono = GQ::monomial(n, mask_of(col));
        for (int k = 0; k < 3; ++k) {
            auto t = vf.e[std::size_t(k)] * mono;
            for (Mask J = 0; J < 4; ++J) out[std::size_t(slot(J))][std::size_t(col)][std::size_t(k + 1)] = t[J];
        }
        auto mult = vf.dxi * mono.derivative(1) + vf.deta * mono.derivative(2);
        for (Mask J = 0; J < 4; ++J) out[std::size_t(slot(J))][std::size_t(col)][0] = mult[J];
    }
    return out;
}

Matrix<Q> ad_display_rows(const std::array<Q, 4>& p) {
    auto [a, b, c, d] = p;
    Matrix<Q> M(5, 5, Q(0));
    M(0, 0) = a * d + b * c;
    M(0, 1) = -a * c;
    M(0, 2) = b * d;
    M(1, 0) = -2 * a * b;
    M(1, 1) = a * a;
    M(1, 2) = -b * b;
    M(2, 0) = 2 * c * d;
    M(2, 1) = -c * c;
    M(2, 2) = d * d;
    M(3, 3) = a;
    M(3, 4) = -b;
    M(4, 3) = -c;
    M(4, 4) = d;
    return M;
}

std::array<Q, 4> osp_points(int t) {
    static const std::array<std::array<int, 4>, 5> pts = {{{1, 0, 0, 1}, {1, 1, 0, 1}, {1, 0, 1, 1}, {2, 1, 1, 1}, {3, 2, 1, 1}}};
    const auto& q = pts[std::size_t(t)];
    return {q[0], q[1], q[2], q[3]};
}

// ---------------------------------------------------------------------------
// individual checks; each returns 0 on success

double commutator_table_defect() {
    // [x, y] for x <= y in the basis order (e1, e2, e3, f1, f2)
    struct Row {
        int i, j;
        std::vector<std::pair<int, int>> result;
    };
    std::vector<Row> table = {
        {0, 1, {{1, 2}}},  {0, 2, {{2, -2}}}, {1, 2, {{0, 1}}},  {0, 3, {{3, 1}}},  {1, 3, {}},
        {2, 3, {{4, -1}}}, {0, 4, {{4, -1}}}, {1, 4, {{3, -1}}}, {2, 4, {}},        {3, 3, {{1, -2}}},
        {3, 4, {{0, -1}}}, {4, 4, {{2, 2}}},  {0, 0, {}},        {1, 1, {}},        {2, 2, {}},
    };
    int bad = 0;
    for (const auto& r : table) {
        LE want(osp(), 0);
        for (auto [k, c] : r.result) want += LE::basis(osp(), 0, k) * Q(c);
        if (!(bracket(LE::basis(osp(), 0, r.i), LE::basis(osp(), 0, r.j)) == want)) ++bad;
    }
    return bad + double(osp().jacobi_defect() != 0);
}

double ad_display_defect() {
    int n = 2;
    auto xi = GQ::generator(n, 1), eta = GQ::generator(n, 2);
    GQ z(n), xe = xi * eta;
    auto ad = ad_matrix(v_osp());
    auto want = from_rows(3, 2, {{z, z, z, -eta, -xi},
                                 {z, z, z, xi * Q(-2), z},
                                 {z, z, z, z, eta * Q(2)},
                                 {xi, -eta, z, z, z},
                                 {-eta, z, -xi, z, z}});
    auto sq = from_rows(3, 2, {{xe * Q(2), z, z, z, z},
                               {z, xe * Q(2), z, z, z},
                               {z, z, xe * Q(2), z, z},
                               {z, z, z, xe * Q(-3), z},
                               {z, z, z, z, xe * Q(-3)}});
    return (ad - want).max_abs() + (ad * ad - sq).max_abs() + (ad * ad * ad).max_abs();
}

SM exp_nilpotent_matrix(const SM& X) {
    auto sum = SM::identity(X.p(), X.q(), X.n()), term = sum;
    for (int k = 1; k <= X.n() + 1; ++k) {
        term = (term * X).scaled(Q(1, k));
        sum += term;
    }
    return sum;
}

SM exp_v() { return exp_nilpotent_matrix(to_matrix(v_osp())); }

double exp_display_defect() {
    int n = 2;
    auto xi = GQ::generator(n, 1), eta = GQ::generator(n, 2), one = GQ::constant(n, 1);
    GQ z(n), xe = xi * eta;
    auto X = to_matrix(v_osp());
    auto Xd = from_rows(1, 2, {{z, eta, xi}, {xi, z, z}, {-eta, z, z}});
    auto E = from_rows(1, 2, {{one - xe, eta, xi}, {xi, one + xe * half, z}, {-eta, z, one + xe * half}});
    return (X - Xd).max_abs() + (exp_v() - E).max_abs();
}

SM identified(const std::array<Q, 4>& p) { return SM::from_body(1, 2, 2, body_group(p)) * exp_v(); }

double identification_defect(std::mt19937_64& rng) {
    int n = 2;
    auto xi = GQ::generator(n, 1), eta = GQ::generator(n, 2), one = GQ::constant(n, 1);
    auto h = one + xi * eta * half;
    double r = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto p = random_sl2(rng);
        auto [a, b, c, d] = p;
        auto want = from_rows(1, 2, {{one - xi * eta, eta, xi},
                                     {xi * a - eta * b, h * a, h * b},
                                     {xi * c - eta * d, h * c, h * d}});
        auto g = identified(p);
        r += (g - want).max_abs();
        // general element with alpha = eta, beta = xi and a' = (1 + xi eta / 2) a, ...
        auto A = h * a, B = h * b, C = h * c, D = h * d;
        auto gen = from_rows(1, 2, {{one + eta * xi, eta, xi}, {A * xi - B * eta, A, B}, {C * xi - D * eta, C, D}});
        r += (g - gen).max_abs();
        r += (A * D - B * C - (one - eta * xi)).max_abs();
    }
    return r;
}

// With the C-twisted rows of right-coordinate matrices the invariance reads
// st^-1(g) J g = J, st^-1 (A B; C D) = (A^T -C^T; B^T D^T) = st^3.
SM inverse_supertranspose(const SM& g) { return g.supertranspose().supertranspose().supertranspose(); }

double membership_defect(std::mt19937_64& rng) {
    Matrix<Q> Jb(3, 3, Q(0));
    Jb(0, 0) = 1;
    Jb(1, 2) = 1;
    Jb(2, 1) = -1;
    auto J = SM::from_body(1, 2, 2, Jb);
    double r = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto g = identified(random_sl2(rng));
        r += (inverse_supertranspose(g) * J * g - J).max_abs();
    }
    auto X = to_matrix(v_osp());
    r += (inverse_supertranspose(X) * J + J * X).max_abs();
    return r;
}

double ad_defect(std::mt19937_64& rng) {
    double r = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto p = random_sl2(rng);
        r += (osp_ad(p) != osp_ad_display(p)) ? 1.0 : 0.0;
        // Ad(g) is an automorphism of the brackets
        auto M = osp_ad(p);
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                auto x = LE::basis(osp(), 0, i), y = LE::basis(osp(), 0, j);
                if (!(apply_body(M, bracket(x, y)) == bracket(apply_body(M, x), apply_body(M, y)))) r += 1.0;
            }
    }
    return r;
}

double blocks_defect() {
    int n = 2;
    auto xi = GQ::generator(n, 1), eta = GQ::generator(n, 2), one = GQ::constant(n, 1);
    GQ z(n), b = one - xi * eta;
    auto blk = invariant_vf_blocks(v_osp());
    auto want = from_rows(3, 2, {{one, z, z, eta * -half, xi * -half},
                                 {z, one, z, -xi, z},
                                 {z, z, one, z, eta},
                                 {xi, -eta, z, b, z},
                                 {-eta, z, -xi, z, b}});
    return (blk.assembled() - want).max_abs() + (delta_function(blk) - (one + xi * eta)).max_abs();
}

// b-(ad v) Ad(g^-1) Y and h(ad(Ad(g) v)) Y against the reference formulas
double series_display_defect(std::mt19937_64& rng) {
    int n = 2;
    auto xi = GQ::generator(n, 1), eta = GQ::generator(n, 2), one = GQ::constant(n, 1);
    auto h = one + xi * eta * half;
    double r = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto p = random_sl2(rng);
        auto [a, b, c, d] = p;
        auto v = v_osp(n);
        std::array<std::array<GQ, 2>, 2> bm = {{{h * d, h * b}, {h * c, h * a}}};
        auto u = d * eta - c * xi, w = a * xi - b * eta;
        std::array<std::array<GQ, 2>, 3> hm = {{{u * -half, w * -half}, {-w, GQ(n)}, {GQ(n), u}}};
        for (int i = 1; i <= 2; ++i) {
            auto Y = LE::basis(osp(), n, 2 + i);
            auto bmv = series_of_ad(SeriesKind::BMinus, v, apply_body(osp_ad(inverse_point(p)), Y));
            auto hv = series_of_ad(SeriesKind::H, apply_body(osp_ad(p), v), Y);
            for (int k = 0; k < 3; ++k) r += (hv[k] - hm[std::size_t(k)][std::size_t(i - 1)]).max_abs();
            for (int k = 0; k < 2; ++k) r += (bmv[3 + k] - bm[std::size_t(k)][std::size_t(i - 1)]).max_abs();
        }
    }
    return r;
}

// displayed right-invariant vector fields
double vf_display_defect(std::mt19937_64& rng) {
    int n = 2;
    auto xi = GQ::generator(n, 1), eta = GQ::generator(n, 2), one = GQ::constant(n, 1);
    auto h = one + xi * eta * half;
    double r = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto p = random_sl2(rng);
        auto [a, b, c, d] = p;
        auto u = d * eta - c * xi, w = a * xi - b * eta;
        auto f1 = vf_at(1, p), f2 = vf_at(2, p);
        r += (f1.e[0] - u * half).max_abs() + (f1.e[1] - w).max_abs() + f1.e[2].max_abs();
        r += (f1.dxi - h * d).max_abs() + (f1.deta - h * c).max_abs();
        r += (f2.e[0] - w * half).max_abs() + f2.e[1].max_abs() + (f2.e[2] - (c * xi - d * eta)).max_abs();
        r += (f2.dxi - h * b).max_abs() + (f2.deta - h * a).max_abs();
    }
    return r;
}

double matrix_defect(const OspOpMatrix& x, const OspOpMatrix& y) {
    double r = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r += x[std::size_t(i)][std::size_t(j)] == y[std::size_t(i)][std::size_t(j)] ? 0.0 : 1.0;
    return r;
}

// reference f2 differs from the derived matrix exactly in column 0
double reference_f2_defect() {
    auto p = osp_fR_display(2), d = osp_fR_derived(2);
    double r = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            bool same = p[std::size_t(i)][std::size_t(j)] == d[std::size_t(i)][std::size_t(j)];
            bool want_same = !(j == 0 && i >= 2);
            if (same != want_same) r += 1.0;
        }
    return r;
}

double s_form_defect() {
    // mask order (1, xi, eta, xi eta) to (1, xi eta, xi, eta)
    auto delta = GQ::constant(2, 1) + GQ::generator(2, 1) * GQ::generator(2, 2);
    auto sm = s_matrix(delta), S = osp_s_form();
    double r = 0.0;
    for (Mask I = 0; I < 4; ++I)
        for (Mask J = 0; J < 4; ++J) r += sm(int(I), int(J)) == S(slot(I), slot(J)) ? 0.0 : 1.0;
    return r;
}

// S as a map on C^4 is invertible and stretches e_empty: |S e|^2 = 2 != 1
double box_map_defect() {
    auto S = osp_s_form();
    if (rank(S) != 4) return 1.0;
    Q n2 = 0;
    for (int i = 0; i < 4; ++i) n2 += S(i, 0) * S(i, 0);
    return n2 == 2 ? 0.0 : 1.0;
}

}  // namespace

// ---------------------------------------------------------------------------

OspOpMatrix osp_fR_display(int i) {
    OspOpMatrix M{};
    Form z{};
    if (i == 1) {
        M[0][2] = entry(lf(0, 0, 0, 1));
        M[0][3] = entry(lf(0, 0, 1, 0));
        M[1][2] = entry(lf(0, 0, 0, half), lf(0, 0, 0, -half), lf(0, 1, 0, 0));
        M[1][3] = entry(lf(0, 0, half, 0), lf(0, 0, -half, 0), lf(1, 0, 0, 0));
        M[2][0] = entry(z, lf(0, 0, -half, 0), lf(1, 0, 0, 0));
        M[2][1] = entry(lf(0, 0, -1, 0));
        M[3][0] = entry(z, lf(0, 0, 0, half), lf(0, -1, 0, 0));
        M[3][1] = entry(lf(0, 0, 0, 1));
    } else if (i == 2) {
        M[0][2] = entry(lf(0, 1, 0, 0));
        M[0][3] = entry(lf(1, 0, 0, 0));
        M[1][2] = entry(lf(0, half, 0, 0), lf(0, half, 0, 0), z, lf(0, 0, 0, 1));
        M[1][3] = entry(lf(half, 0, 0, 0), lf(half, 0, 0, 0), z, lf(0, 0, 1, 0));
        M[2][0] = entry(z, lf(half, 0, 0, 0), z, lf(0, 0, -1, 0));
        M[2][1] = entry(lf(-1, 0, 0, 0));
        M[3][0] = entry(z, lf(0, -half, 0, 0), z, lf(0, 0, 0, 1));
        M[3][1] = entry(lf(0, 1, 0, 0));
    } else {
        throw std::invalid_argument("osp_fR_display: i must be 1 or 2");
    }
    return M;
}

OspOpMatrix osp_fR_corrected(int i) {
    auto M = osp_fR_display(i);
    if (i == 2) {
        Form z{};
        M[2][0] = entry(z, lf(half, 0, 0, 0), z, lf(0, 0, 1, 0));
        M[3][0] = entry(z, lf(0, -half, 0, 0), z, lf(0, 0, 0, -1));
    }
    return M;
}

OspOpMatrix osp_fR_derived(int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("osp_fR_derived: i must be 1 or 2");
    // entries are linear in (a, b, c, d); fit on four points, confirm on a fifth
    std::array<PointMatrix, 5> vals;
    for (int t = 0; t < 5; ++t) vals[std::size_t(t)] = operator_at(i, osp_points(t));
    Matrix<Q> P(4, 4, Q(0));
    for (int t = 0; t < 4; ++t)
        for (int k = 0; k < 4; ++k) P(t, k) = osp_points(t)[std::size_t(k)];
    auto Pinv = inverse(P);
    OspOpMatrix M{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            for (int l = 0; l < 4; ++l) {
                Form f{};
                for (int k = 0; k < 4; ++k)
                    for (int t = 0; t < 4; ++t) f[std::size_t(k)] += Pinv(k, t) * vals[std::size_t(t)][std::size_t(r)][std::size_t(c)][std::size_t(l)];
                if (eval(f, osp_points(4)) != vals[4][std::size_t(r)][std::size_t(c)][std::size_t(l)])
                    throw std::logic_error("osp_fR_derived: entry is not linear in (a, b, c, d)");
                M[std::size_t(r)][std::size_t(c)].L[std::size_t(l)] = f;
            }
    return M;
}

Matrix<Q> osp_s_form() {
    Matrix<Q> S(4, 4, Q(0));
    S(0, 0) = 1;   // <chi_0, psi_0>
    S(0, 1) = 1;   // <chi_0, psi_xieta>
    S(2, 3) = 1;   // <chi_xi, psi_eta>
    S(3, 2) = -1;  // -<chi_eta, psi_xi>
    S(1, 0) = 1;   // <chi_xieta, psi_0>
    return S;
}

Q osp_preservation_symbolic(const OspOpMatrix& f, const Matrix<Q>& S) {
    static const int C[4] = {1, 1, -1, -1};
    Q worst = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            OspEntry r;
            for (int k = 0; k < 4; ++k) {
                auto adj = adjoint_entry(f[std::size_t(k)][std::size_t(i)]);
                const auto& a = f[std::size_t(k)][std::size_t(j)];
                for (int l = 0; l < 4; ++l) {
                    r.L[std::size_t(l)] = added(r.L[std::size_t(l)], scaled(adj.L[std::size_t(l)], S(k, j)));
                    r.L[std::size_t(l)] = added(r.L[std::size_t(l)], scaled(a.L[std::size_t(l)], S(i, k) * C[i]));
                }
            }
            for (const auto& form : r.L)
                for (const auto& q : form) worst = std::max(worst, Q(abs(q)));
        }
    return worst;
}

Q osp_preservation_standin(const OspOpMatrix& f, const Matrix<Q>& S, const std::array<Q, 4>& abcd, int k,
                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    std::array<Matrix<Q>, 4> E;
    E[0] = Matrix<Q>(k, k, Q(0));
    for (int i = 0; i < k; ++i) E[0](i, i) = 1;
    for (int e = 1; e <= 3; ++e) {
        E[std::size_t(e)] = Matrix<Q>(k, k, Q(0));
        for (int r = 0; r < k; ++r)
            for (int c = r + 1; c < k; ++c) {
                Q v = qfrac(num(rng), den(rng));
                E[std::size_t(e)](r, c) = v;
                E[std::size_t(e)](c, r) = -v;
            }
    }
    auto block = [&](const OspEntry& x) {
        Matrix<Q> B(k, k, Q(0));
        for (int l = 0; l < 4; ++l) {
            Q s = eval(x.L[std::size_t(l)], abcd);
            if (s == 0) continue;
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) B(r, c) += s * E[std::size_t(l)](r, c);
        }
        return B;
    };
    Matrix<Q> A(4 * k, 4 * k, Q(0)), AH(4 * k, 4 * k, Q(0)), SB(4 * k, 4 * k, Q(0)), CS(4 * k, 4 * k, Q(0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const auto& x = f[std::size_t(i)][std::size_t(j)];
            A.set_block(i * k, j * k, block(x));
            // transpose of L0 + sum L_l E_l minus the derivative terms e_l(L_l)
            auto adj = block(x).transpose();
            Q dterm = 0;
            for (int l = 1; l <= 3; ++l) dterm += eval(derive(l, x.L[std::size_t(l)]), abcd);
            for (int r = 0; r < k; ++r) adj(r, r) -= dterm;
            AH.set_block(j * k, i * k, adj);
            for (int r = 0; r < k; ++r) {
                SB(i * k + r, j * k + r) = S(i, j);
                CS(i * k + r, j * k + r) = (i >= 2 ? -S(i, j) : S(i, j));
            }
        }
    auto R = AH * SB + CS * A;
    Q worst = 0;
    for (int r = 0; r < R.rows(); ++r)
        for (int c = 0; c < R.cols(); ++c) worst = std::max(worst, Q(abs(R(r, c))));
    return worst;
}

Matrix<Q> osp_ad(const std::array<Q, 4>& abcd) {
    require_sl2(abcd);
    const auto& rep = *osp().matrix_rep();
    auto g = body_group(abcd), gi = body_group(inverse_point(abcd));
    Matrix<Q> M(5, 5, Q(0));
    for (int j = 0; j < 5; ++j) {
        auto X = g * rep.basis[std::size_t(j)] * gi;
        std::array<Q, 5> c = {X(1, 1), X(1, 2), X(2, 1), X(0, 2), X(0, 1)};
        Matrix<Q> back(3, 3, Q(0));
        for (int k = 0; k < 5; ++k) {
            M(k, j) = c[std::size_t(k)];
            const auto& B = rep.basis[std::size_t(k)];
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s) back(r, s) += c[std::size_t(k)] * B(r, s);
        }
        if (back != X) throw std::logic_error("osp_ad: conjugate left the span of the basis");
    }
    return M;
}

Matrix<Q> osp_ad_display(const std::array<Q, 4>& abcd) { return ad_display_rows(abcd); }

std::vector<RepCheckReport> verify_osp12(const HarnessOptions& opt) {
    std::uint64_t seed = opt.seed;
    auto rng = [seed](int salt) { return std::mt19937_64(seed * 1000003u + std::uint64_t(salt)); };
    std::vector<CheckSpec> checks;
    checks.push_back({"commutator table", true, [] { return commutator_table_defect(); }});
    checks.push_back({"ad(xi f1 + eta f2) and its square", true, [] { return ad_display_defect(); }});
    checks.push_back({"exp(xi f1 + eta f2)", true, [] { return exp_display_defect(); }});
    checks.push_back({"identification map product", true, [rng] {
                          auto r = rng(1);
                          return identification_defect(r);
                      }});
    checks.push_back({"identified elements preserve the OSp form", true, [rng] {
                          auto r = rng(2);
                          return membership_defect(r);
                      }});
    checks.push_back({"Ad(g) matrix", true, [rng] {
                          auto r = rng(3);
                          return ad_defect(r);
                      }});
    checks.push_back({"blocks (1 H; A B) and Delta = 1 + xi eta", true, [] { return blocks_defect(); }});
    checks.push_back({"b-(ad v) Ad(g^-1) Y and h(ad(Ad(g) v)) Y", true, [rng] {
                          auto r = rng(4);
                          return series_display_defect(r);
                      }});
    checks.push_back({"right-invariant fields f1^R, f2^R", true, [rng] {
                          auto r = rng(5);
                          return vf_display_defect(r);
                      }});
    checks.push_back({"S-form equals s_matrix(Delta)", true, [] { return s_form_defect(); }});
    checks.push_back({"operator matrix of f1^R", true, [] { return matrix_defect(osp_fR_derived(1), osp_fR_display(1)); }});
    checks.push_back({"operator matrix of f2^R (column 0 sign-corrected)", true, [] {
                          return matrix_defect(osp_fR_derived(2), osp_fR_corrected(2));
                      }});
    checks.push_back({"reference f2^R differs from the derived matrix only in column 0", true, [] { return reference_f2_defect(); }});
    checks.push_back({"f1^R, f2^R preserve the super scalar product", true, [] {
                          auto S = osp_s_form();
                          return Q(osp_preservation_symbolic(osp_fR_display(1), S) + osp_preservation_symbolic(osp_fR_corrected(2), S)).get_d();
                      }});
    checks.push_back({"preservation with 20 random skew stand-ins", true, [rng] {
                          auto r = rng(6);
                          auto S = osp_s_form();
                          Q tot = 0;
                          for (int t = 0; t < 20; ++t) {
                              auto p = random_sl2(r);
                              std::uint64_t s = r();
                              tot += osp_preservation_standin(osp_fR_display(1), S, p, 3, s);
                              tot += osp_preservation_standin(osp_fR_corrected(2), S, p, 3, s + 1);
                          }
                          return tot.get_d();
                      }});
    checks.push_back({"dropping <chi_0, psi_0> breaks preservation", true, [] {
                          auto S = osp_s_form();
                          S(0, 0) = 0;
                          return osp_preservation_symbolic(osp_fR_display(1), S) != 0 ? 0.0 : 1.0;
                      }});
    checks.push_back({"reference f2^R does not preserve the super scalar product", true, [] {
                          return osp_preservation_symbolic(osp_fR_display(2), osp_s_form()) != 0 ? 0.0 : 1.0;
                      }});
    checks.push_back({"S is invertible but not metric preserving", true, [] { return box_map_defect(); }});
    return run_checks("osp12", checks, opt.tol);
}

}  // namespace superalg
