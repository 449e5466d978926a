#include <mutex>
#include <optional>
#include <random>

#include "superalg/repharness.hpp"

namespace superalg {

namespace {

using G = Grassmann<CQ>;

G gen(int n, int j) { return G::generator(n, j); }
G cst(int n, const CQ& v) { return G::constant(n, v); }
CQ I_() { return CQ(0, 1); }

FnSpace<CQ> fn(int m) { return FnSpace<CQ>(ProtoSuperHilbert<CQ>::scalars(), m); }

// sum_J xi^J v_J in the common algebra on n generators.
G from_vector(int n, const std::vector<CQ>& v) {
    G f(n);
    for (Mask J = 0; J < v.size(); ++J) f[J] = v[J];
    return f;
}

// Formal group element with y = th_a th_b and eta_j = th_{c+j}.
HlElement<CQ> formal_element(int n, int m, int ya, int yb, int eta0) {
    HlElement<CQ> g{ya ? gen(n, ya) * gen(n, yb) : G(n), {}};
    for (int j = 0; j < m; ++j) g.eta.push_back(gen(n, eta0 + j));
    return g;
}

}  // namespace

GOp hl_rep_hat_matrix(const Q& k, int m, const HlElement<CQ>& g) {
    int n = g.y.n(), d = 1 << m;
    auto M = gop_zero(d, n - m);
    for (Mask I = 0; I < Mask(d); ++I) {
        auto c = fiber_coordinates(m, hl_rep_hat<CQ>(CQ(k), m, g, G::monomial(n, I)));
        for (int J = 0; J < d; ++J) M(J, int(I)) = c[std::size_t(J)];
    }
    return M;
}

LinearOp<CQ> hl_tau_hat_e(const Q& k, int m) {
    return CQ(0, -k) * LinearOp<CQ>::identity(1 << m);
}

// -d/dxi_j - (ik/2) xi_j
LinearOp<CQ> hl_tau_hat_f(const Q& k, int m, int j) {
    auto V = fn(m);
    return CQ(-1) * V.d_xi(j) + CQ(0, -k / 2) * V.mult_xi(j);
}

Matrix<CQ> hl_tau_hat_f_display(const Q& k, int j) {
    CQ z, one(1), h(0, -k / 2);
    if (j == 1) {
        std::vector<std::vector<CQ>> r = {{z, -one, z, z}, {h, z, z, z}, {z, z, z, -one}, {z, z, h, z}};
        Matrix<CQ> M(4, 4, z);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) M(a, b) = r[std::size_t(a)][std::size_t(b)];
        return M;
    }
    if (j == 2) {
        std::vector<std::vector<CQ>> r = {{z, z, -one, z}, {z, z, z, one}, {h, z, z, z}, {z, -h, z, z}};
        Matrix<CQ> M(4, 4, z);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) M(a, b) = r[std::size_t(a)][std::size_t(b)];
        return M;
    }
    throw std::out_of_range("displayed matrices exist for j = 1, 2");
}

GradedPlane hl_invariant_subspace(const Q& k, int eps) {
    if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +1 or -1");
    CQ z;
    return {{CQ(1), z, z, CQ(-Q(eps) * k / 2)}, {z, CQ(1), CQ(0, eps), z}};
}

Grassmann<CQ> span_residual(int m, const std::vector<std::vector<CQ>>& vectors, const Grassmann<CQ>& f) {
    auto c = fiber_coordinates(m, f);
    int d = 1 << m, r = int(vectors.size());
    // pivot rows with an invertible r x r minor
    std::vector<int> rows;
    for (int J = 0; J < d && int(rows.size()) < r; ++J) {
        auto trial = rows;
        trial.push_back(J);
        Matrix<CQ> sub(int(trial.size()), r, CQ());
        for (std::size_t a = 0; a < trial.size(); ++a)
            for (int b = 0; b < r; ++b) sub(int(a), b) = vectors[std::size_t(b)][std::size_t(trial[a])];
        if (rank(sub) == int(trial.size())) rows = trial;
    }
    if (int(rows.size()) != r) throw std::invalid_argument("span_residual: vectors are dependent");
    Matrix<CQ> V(r, r, CQ());
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) V(a, b) = vectors[std::size_t(b)][std::size_t(rows[std::size_t(a)])];
    auto Vi = inverse(V);
    int P = c[0].n();
    for (int b = 0; b < r; ++b) {
        G alpha(P);
        for (int a = 0; a < r; ++a) alpha += c[std::size_t(rows[std::size_t(a)])] * Vi(b, a);
        for (int J = 0; J < d; ++J) c[std::size_t(J)] -= alpha * vectors[std::size_t(b)][std::size_t(J)];
    }
    return from_fiber_coordinates(m, c);
}

InvariantSubspaceReport hl_invariant_subspaces(const Q& k) {
    if (k == 0) throw std::invalid_argument("hl_invariant_subspaces needs k != 0");
    InvariantSubspaceReport rep;
    const int m = 2, n = 6;
    auto g = formal_element(n, m, 3, 4, 5);
    const auto& y = g.y;
    const auto &e1 = g.eta[0], &e2 = g.eta[1];
    for (int eps : {1, -1}) {
        auto H = hl_invariant_subspace(k, eps);
        for (const auto& v : {H.even, H.odd}) {
            auto image = hl_rep_hat<CQ>(CQ(k), m, g, from_vector(n, v));
            rep.invariance = std::max(rep.invariance, span_residual(m, {H.even, H.odd}, image).max_abs());
        }
        // reference action on the basis
        auto chi0 = from_vector(n, H.even), chi1 = from_vector(n, H.odd);
        CQ ie(0, eps);
        auto pre = (y * CQ(0, -k) + e1 * e2 * CQ(-Q(eps) * k / 2)).exp_nilpotent();
        auto want0 = pre * (chi0 - (e1 - e2 * ie) * CQ(0, k / 2) * chi1);
        auto want1 = pre * (-(e1 + e2 * ie) * chi0 + (e1 * e2 * CQ(Q(eps) * k)).exp_nilpotent() * chi1);
        auto got0 = hl_rep_hat<CQ>(CQ(k), m, g, chi0);
        auto got1 = hl_rep_hat<CQ>(CQ(k), m, g, chi1);
        rep.displayed_action = std::max({rep.displayed_action, (got0 - want0).max_abs(), (got1 - want1).max_abs()});
    }
    auto V = fn(m);
    auto Hp = hl_invariant_subspace(k, 1), Hm = hl_invariant_subspace(k, -1);
    auto K = V.super_sp_form(), Gm = V.metric_form();
    for (const auto& a : {Hp.even, Hp.odd})
        for (const auto& b : {Hm.even, Hm.odd}) {
            rep.super_sp_orthogonal = std::max(rep.super_sp_orthogonal, Ring<CQ>::abs(form_value(K, a, b)));
            auto gv = form_value(Gm, a, b);
            rep.metric_cross_gram = std::max(rep.metric_cross_gram, Q(abs(gv.re) + abs(gv.im)));
        }

    // m = 1: neither coordinate line is invariant.
    {
        int n1 = 2;
        HlElement<CQ> g1{G(n1), {gen(n1, 2)}};
        auto r_even = span_residual(1, {{CQ(1), CQ()}}, hl_rep_hat<CQ>(CQ(k), 1, g1, cst(n1, CQ(1))));
        auto r_odd = span_residual(1, {{CQ(), CQ(1)}}, hl_rep_hat<CQ>(CQ(k), 1, g1, gen(n1, 1)));
        rep.m1_no_invariant_lines = !r_even.is_zero() && !r_odd.is_zero();
    }

    // m = 2: candidate planes span(a + b xi1 xi2, c xi1 + d xi2).
    std::vector<CQ> ts, ss;
    for (CQ t : {CQ(0), CQ(k / 2), CQ(-k / 2), CQ(k), CQ(-k), CQ(1), CQ(-1), CQ(2), CQ(Q(1, 3)), CQ(0, k / 2), CQ(0, -k / 2)}) {
        bool dup = false;
        for (const auto& u : ts) dup = dup || u == t;
        if (!dup) ts.push_back(t);
    }
    for (CQ s : {CQ(0), CQ(1), CQ(-1), CQ(0, 1), CQ(0, -1), CQ(0, 2), CQ(1, 1), CQ(Q(1, 2))}) ss.push_back(s);
    std::vector<std::pair<std::vector<CQ>, std::vector<CQ>>> family;
    CQ z;
    for (const auto& t : ts)
        for (const auto& s : ss) family.push_back({{CQ(1), z, z, t}, {z, CQ(1), s, z}});
    for (const auto& t : ts) family.push_back({{CQ(1), z, z, t}, {z, z, CQ(1), z}});
    for (const auto& s : ss) family.push_back({{z, z, z, CQ(1)}, {z, CQ(1), s, z}});
    family.push_back({{z, z, z, CQ(1)}, {z, z, CQ(1), z}});
    for (const auto& [ev, od] : family) {
        bool inv = true;
        for (const auto& v : {ev, od})
            inv = inv && span_residual(m, {ev, od}, hl_rep_hat<CQ>(CQ(k), m, g, from_vector(n, v))).is_zero();
        rep.m2_family_invariant += inv;
    }
    rep.m2_family_size = int(family.size());
    return rep;
}

double hl_fourier0_residual(int m) {
    int n = 2 * m;
    auto F = fn(m).fourier_via_inv();
    HlElement<CQ> g{G(n), {}};
    G pairing(n);
    for (int j = 1; j <= m; ++j) {
        g.eta.push_back(gen(n, m + j));
        pairing += gen(n, j) * gen(n, m + j);
    }
    auto kernel = (pairing * I_()).exp_nilpotent();
    double r = 0.0;
    for (Mask I = 0; I < (Mask(1) << m); ++I) {
        auto psi = G::monomial(n, I);
        auto lhs = apply_on_fiber(F, m, hl_rep_hat<CQ>(CQ(0), m, g, psi));
        auto rhs = kernel * apply_on_fiber(F, m, psi);
        r = std::max(r, (lhs - rhs).max_abs());
    }
    return r;
}

double hl_fourier_family_residual(int m, std::uint64_t seed) {
    // kappa_1..kappa_m, then three spare generators for random coefficients
    int n = m + 3;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-3, 3);
    auto rnd = [&] {
        G x(n);
        for (Mask M = 0; M < x.size(); ++M) x[M] = CQ(dist(rng), dist(rng));
        return x;
    };
    std::vector<int> par{0};
    LinearOp<CQ> K = LinearOp<CQ>::identity(1);
    double r = 0.0;
    for (int j = 1; j <= m; ++j) {
        auto t = gen(n, j) * CQ(0, -1);
        for (int trial = 0; trial < 4; ++trial) {
            auto c = rnd(), c2 = rnd();
            auto lhs = extend_form(par, K, {t * c}, {c2}) + extend_form(par, K, {c.conj_C()}, {t * c2});
            r = std::max(r, lhs.max_abs());
        }
        for (int l = 1; l <= m; ++l) {
            auto tl = gen(n, l) * CQ(0, -1);
            r = std::max(r, (t * tl + tl * t).max_abs());  // tau-bar([f_j, f_l]) = -delta tau-bar(e) = 0
        }
        // rho-bar(0, tau e_j) = 1 + tau * tau-bar(f_j), with tau a spare generator
        auto tau = gen(n, m + 1);
        auto lhs = (gen(n, j) * tau * I_()).exp_nilpotent();
        r = std::max(r, (lhs - cst(n, CQ(1)) - tau * t).max_abs());
    }
    return r;
}

IntegratedRep hl_integrated(const Q& k, int m) {
    auto alg = SuperLieAlgebra::heisenberg_like(m);
    std::vector<LinearOp<CQ>> tau{hl_tau_hat_e(k, m)};
    for (int j = 1; j <= m; ++j) tau.push_back(hl_tau_hat_f(k, m, j));
    std::vector<BodySample> body;
    if (k != 0) {
        // y = -pi/(2k): rho_o(y) = exp(i pi/2) = i
        body.push_back({scalar_identity<Q>(1 + m), CQ(0, 1) * LinearOp<CQ>::identity(1 << m)});
    }
    return IntegratedRep(alg, FormedSpace<CQ>::of(fn(m)), tau, body);
}

// ---------------------------------------------------------------------------

namespace {

double hl_tau_display_residual(const Q& k) {
    double r = 0.0;
    for (int j = 1; j <= 2; ++j) {
        auto diff = hl_tau_hat_f(k, 2, j).dense() - hl_tau_hat_f_display(k, j);
        r = std::max(r, max_abs(diff));
    }
    return r;
}

// rho(0, tau e_j) chi = chi + tau * tau(f_j) chi, tau a fresh odd generator.
double hl_tau_derivative_residual(const Q& k, int m) {
    int n = m + 1;
    double r = 0.0;
    for (int j = 1; j <= m; ++j) {
        HlElement<CQ> g{G(n), std::vector<G>(std::size_t(m), G(n))};
        g.eta[std::size_t(j - 1)] = gen(n, n);
        auto T = hl_tau_hat_f(k, m, j);
        for (Mask I = 0; I < (Mask(1) << m); ++I) {
            auto chi = G::monomial(n, I);
            auto lhs = hl_rep_hat<CQ>(CQ(k), m, g, chi);
            auto rhs = chi + gen(n, n) * apply_on_fiber(T, m, chi);
            r = std::max(r, (lhs - rhs).max_abs());
        }
    }
    return r;
}

double hl_homomorphism_residual(const Q& k, int m) {
    // g1 = (th1' th2', eta), g2 = (th3' th4', zeta) after the m xi generators
    int n = m + 4 + 2 * m;
    auto g1 = formal_element(n, m, m + 1, m + 2, m + 5);
    auto g2 = formal_element(n, m, m + 3, m + 4, m + 5 + m);
    auto g12 = hl_multiply(g1, g2);
    double r = 0.0;
    for (Mask I = 0; I < (Mask(1) << m); ++I) {
        auto chi = G::monomial(n, I, CQ(1, Mask(I) % 3));
        auto lhs = hl_rep_hat<CQ>(CQ(k), m, g1, hl_rep_hat<CQ>(CQ(k), m, g2, chi));
        auto rhs = hl_rep_hat<CQ>(CQ(k), m, g12, chi);
        r = std::max(r, (lhs - rhs).max_abs());
        auto back = hl_rep_hat<CQ>(CQ(k), m, hl_inverse(g1), hl_rep_hat<CQ>(CQ(k), m, g1, chi));
        r = std::max(r, (back - chi).max_abs());
    }
    // associativity and inverses of the group law itself
    auto g3 = formal_element(n, m, 0, 0, m + 5);
    auto a = hl_multiply(hl_multiply(g1, g2), g3), b = hl_multiply(g1, hl_multiply(g2, g3));
    r = std::max(r, (a.y - b.y).max_abs());
    auto e = hl_multiply(g1, hl_inverse(g1));
    r = std::max(r, e.y.max_abs());
    for (std::size_t j = 0; j < a.eta.size(); ++j)
        r = std::max({r, (a.eta[j] - b.eta[j]).max_abs(), e.eta[j].max_abs()});
    return r;
}

double hl_identity_residual(int m) {
    int n = m;
    HlElement<CQ> g{G(n), std::vector<G>(std::size_t(m), G(n))};
    double r = 0.0;
    for (Mask I = 0; I < (Mask(1) << m); ++I) {
        auto chi = G::monomial(n, I);
        r = std::max(r, (hl_rep_hat<CQ>(CQ(0), m, g, chi) - chi).max_abs());
    }
    return r;
}

double hl_preservation_residual(const Q& k, int m) {
    auto rep = hl_integrated(k, m);
    int n = m + 2 + m;
    auto g = formal_element(n, m, m + 1, m + 2, m + 3);
    return rep.preservation_residual(hl_rep_hat_matrix(k, m, g));
}

// Integrated rho(exp(y e) exp(sum eta_j f_j)) against the direct formula.
double hl_integration_residual(const Q& k, int m) {
    auto rep = hl_integrated(k, m);
    const auto& alg = rep.algebra();
    int P = 2 + m;
    LieElement<Q> Y(alg, P), X(alg, P);
    Y[0] = Grassmann<Q>::generator(P, 1) * Grassmann<Q>::generator(P, 2);
    for (int j = 1; j <= m; ++j) X[j] = Grassmann<Q>::generator(P, 2 + j);
    auto integrated = rep.rho_exp(Y) * rep.rho_exp(X);
    auto direct = hl_rep_hat_matrix(k, m, formal_element(m + P, m, m + 1, m + 2, m + 3));
    double r = gop_max_abs(integrated - direct);
    // homomorphism through the separation identity, odd X and Z
    int Pz = 2 * m;
    LieElement<Q> A(alg, Pz), B(alg, Pz);
    for (int j = 1; j <= m; ++j) {
        A[j] = Grassmann<Q>::generator(Pz, j);
        B[j] = Grassmann<Q>::generator(Pz, m + j) * Q(j + 1);
    }
    r = std::max(r, rep.homomorphism_residual(A, B));
    return r;
}

}  // namespace

std::vector<RepCheckReport> verify_heisenberg(const HarnessOptions& opt) {
    Q k = opt.k;
    int m = opt.m;
    std::vector<CheckSpec> checks;
    checks.push_back({"tau-hat(f1), tau-hat(f2) match the reference m=2 matrices", true, [k] { return hl_tau_display_residual(k); }});
    checks.push_back({"tau-hat(f_j) is the odd derivative of rho-hat", true, [k, m] { return hl_tau_derivative_residual(k, m); }});
    checks.push_back({"rho-hat is a homomorphism (formal y, eta)", true, [k, m] { return hl_homomorphism_residual(k, m); }});
    checks.push_back({"rho-hat at k=0, y=0, eta=0 is the identity", true, [m] { return hl_identity_residual(m); }});
    checks.push_back({"rho-hat preserves the super scalar product", true, [k, m] { return hl_preservation_residual(k, m); }});
    checks.push_back({"tau-hat(f_j) graded skew", true, [k, m] {
                          auto V = fn(m);
                          double r = 0.0;
                          for (int j = 1; j <= m; ++j) r = std::max(r, check_graded_skew(V, hl_tau_hat_f(k, m, j)));
                          return r;
                      }});
    if (k != 0) {
        checks.push_back({"H_{+1}, H_{-1} invariant with reference action", true, [k] {
                              auto r = hl_invariant_subspaces(k);
                              return std::max(r.invariance, r.displayed_action);
                          }});
        checks.push_back({"<H_1|H_-1> = 0 for the super scalar product", true, [k] { return hl_invariant_subspaces(k).super_sp_orthogonal; }});
        checks.push_back({"metric cross Gram vanishes exactly when k^2 = 4", true, [k] {
                              auto r = hl_invariant_subspaces(k);
                              bool zero = r.metric_cross_gram == 0;
                              bool want = k * k == 4;
                              auto r2 = hl_invariant_subspaces(Q(2));
                              return (zero == want && r2.metric_cross_gram == 0) ? 0.0 : 1.0;
                          }});
        checks.push_back({"m=1: no invariant coordinate line", true, [k] { return hl_invariant_subspaces(k).m1_no_invariant_lines ? 0.0 : 1.0; }});
        checks.push_back({"m=2: only H_{+1}, H_{-1} invariant in the candidate family", true, [k] {
                              return std::abs(hl_invariant_subspaces(k).m2_family_invariant - 2.0);
                          }});
    }
    checks.push_back({"Fourier intertwines rho-hat_0 with exp(i<kappa,eta>), m=1..3", true, [] {
                          double r = 0.0;
                          for (int mm = 1; mm <= 3; ++mm) r = std::max(r, hl_fourier0_residual(mm));
                          return r;
                      }});
    checks.push_back({"tau-bar(f_j) = -i kappa_j: skew, brackets, derivative", true, [m, &opt] {
                          return hl_fourier_family_residual(m, opt.seed);
                      }});
    checks.push_back({"integrated infinitesimal data reproduces rho-hat", true, [k, m] { return hl_integration_residual(k, m); }});

    double L = opt.grid_L;
    int N = opt.grid_N;
    auto grid = std::make_shared<std::optional<GridReport>>();
    auto grid_once = [grid, m, N, L, k, &opt] {
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        if (!*grid) *grid = hl_left_regular_grid(m, GridSpace(N, L), k, opt.seed);
        return **grid;
    };
    checks.push_back({"grid: translation is exactly metric-unitary", true, [grid_once] { return grid_once().translation_unitarity; }});
    checks.push_back({"grid: super scalar product invariant under rho(y, eta)", false, [grid_once] { return grid_once().super_sp_invariance; }});
    checks.push_back({"grid: tau(e) skew (Gaussian packets)", false, [grid_once] { return grid_once().tau_e_skew; }});
    checks.push_back({"grid: tau(e) skew residual drops >= 4x under refinement", true, [grid_once] {
                          auto g = grid_once();
                          return g.tau_e_skew_coarse >= 4.0 * g.tau_e_skew ? 0.0 : g.tau_e_skew_coarse / std::max(g.tau_e_skew, 1e-300);
                      }});
    checks.push_back({"grid: partial Fourier agrees with rho-hat_k", false, [grid_once] { return grid_once().partial_fourier; }});
    checks.push_back({"grid: Hermite functions stable under tau(e)", false, [grid_once] { return grid_once().hermite_stability; }});
    return run_checks("heisenberg-like", checks, opt.tol);
}

}  // namespace superalg
