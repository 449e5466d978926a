#include <mutex>
#include <optional>

#include "superalg/repharness.hpp"

namespace superalg {

namespace {

using G = Grassmann<CQ>;
using GQ = Grassmann<Q>;

struct AbElement {
    GQ x;   // even, nilpotent here
    GQ xi;  // odd
};

// (x, xi)(y, eta) = (x + y, eta + e^{-y} xi)
AbElement ab_multiply(const AbElement& a, const AbElement& b) {
    return {a.x + b.x, b.xi + (-b.x).exp_nilpotent() * a.xi};
}

AbElement ab_inverse(const AbElement& a) { return {-a.x, -(a.x.exp_nilpotent() * a.xi)}; }

double ab_group_law_residual() {
    int n = 9;
    auto g = [n](int a, int b, int c) {
        return AbElement{GQ::generator(n, a) * GQ::generator(n, b), GQ::generator(n, c)};
    };
    auto u = g(1, 2, 7), v = g(3, 4, 8), w = g(5, 6, 9);
    auto l = ab_multiply(ab_multiply(u, v), w), r = ab_multiply(u, ab_multiply(v, w));
    double res = std::max((l.x - r.x).max_abs(), (l.xi - r.xi).max_abs());
    for (const auto& h : {u, v, w}) {
        auto e1 = ab_multiply(h, ab_inverse(h)), e2 = ab_multiply(ab_inverse(h), h);
        res = std::max({res, e1.x.max_abs(), e1.xi.max_abs(), e2.x.max_abs(), e2.xi.max_abs()});
    }
    return res;
}

// Invariant metric in coordinates (x, xi): ((1, i xi), (-i xi, i)).
SuperMatrix<CQ> ab_metric() {
    SuperMatrix<CQ> M(1, 1, 1);
    auto xi = G::generator(1, 1);
    M(0, 0) = G::constant(1, CQ(1));
    M(0, 1) = xi * CQ(0, 1);
    M(1, 0) = xi * CQ(0, -1);
    M(1, 1) = G::constant(1, CQ(0, 1));
    return M;
}

Matrix<CQ> ab_fourier_display() {
    Matrix<CQ> F(2, 2, CQ());
    F(0, 1) = CQ(1);
    F(1, 0) = CQ(0, -1);
    return F;
}

Matrix<CQ> dense_of(const LinearOp<CQ>& A) { return A.dense(); }

// tau(f) = -phi d/dxi with phi a constant: ((0, -phi), (0, 0)).
LinearOp<CQ> ab_tau_f(const Q& phi) {
    LinearOp<CQ> t(2, 2);
    t.set(0, 1, CQ(-phi));
    return t;
}

// F rho(0, eta) F^{-1} against multiplication by exp(-i eta kappa phi), phi
// constant, plus the lifted form of tau-bar(f) = -F tau(f) F^{-1}.
double ab_rho_bar_residual(const Q& phi) {
    std::vector<int> par = {0, 1};
    auto F = LinearOp<CQ>::from_dense(ab_fourier_display());
    auto Finv = CQ(0, 1) * F;  // F F = -i
    if (!(F * Finv == LinearOp<CQ>::identity(2))) return 1.0;

    // algebra on (kappa, eta); the operators act on the kappa-coordinates
    int n = 2;
    auto eta = G::generator(1, 1);
    auto rho = gop_exp_nilpotent(lift_op(ab_tau_f(phi), par, eta));
    auto Fl = lift_op(F, par, G::constant(1, CQ(1)));
    auto Fil = lift_op(Finv, par, G::constant(1, CQ(1)));
    auto conj = Fl * rho * Fil;

    // column J: coordinates of exp(-i eta kappa phi) kappa^J
    auto kappa = G::generator(n, 1), etan = G::generator(n, 2);
    auto mult = (etan * kappa * CQ(0, -1) * CQ(phi)).exp_nilpotent();
    GOp want = gop_zero(2, 1);
    for (Mask J = 0; J < 2; ++J) {
        auto c = fiber_coordinates(1, mult * G::monomial(n, J));
        for (int I = 0; I < 2; ++I) want(I, int(J)) = c[std::size_t(I)];
    }
    double r = gop_max_abs(conj - want);

    auto tbar = CQ(-1) * (F * ab_tau_f(phi) * Finv);
    r = std::max(r, gop_max_abs(Fl * lift_op(ab_tau_f(phi), par, eta) * Fil - lift_op(tbar, par, eta)));
    r = std::max(r, gop_max_abs(gop_exp_nilpotent(lift_op(tbar, par, eta)) - want));
    return r;
}

struct Witness {
    double boundary_psi, boundary_phi_psi, growth;
};

// psi = sech: all derivatives square integrable, while e^{-x} psi tends to 2 as x -> -inf.
Witness ab_witness(const GridSpace& G) {
    auto psi = [](double x) { return 1.0 / std::cosh(x); };
    auto phipsi = [&](double x) { return std::exp(-x) * psi(x); };
    auto norm2 = [&](const GridSpace& g) {
        double s = 0.0;
        for (int j = 0; j < g.N(); ++j) s += phipsi(g.x(j)) * phipsi(g.x(j));
        return s * g.dx();
    };
    GridSpace wide(2 * G.N(), 2 * G.L());
    return {std::abs(psi(-G.L())), std::abs(phipsi(-G.L())), norm2(wide) - norm2(G)};
}

}  // namespace

AxiBetaReport axibeta_checks(const GridSpace& G) {
    AxiBetaReport rep;
    rep.metric_berezinian = berezinian(ab_metric());

    const auto& alg = SuperLieAlgebra::axi_beta();
    auto v = LieElement<Q>::basis(alg, 1, 1, GQ::generator(1, 1));
    rep.delta = delta_function(invariant_vf_blocks(v));

    FnSpace<CQ> V(ProtoSuperHilbert<CQ>::scalars(), 1);
    auto want = ab_fourier_display();
    rep.fourier_formula = dense_of(V.fourier_via_inv()) == want && dense_of(V.fourier_direct()) == want;

    // grid: components (psi_0, psi_1) at indices j and N + j
    int N = G.N();
    std::vector<int> par(std::size_t(2 * N), 0);
    LinearOp<CF64> K(2 * N, 2 * N), tf(2 * N, 2 * N);
    for (int j = 0; j < N; ++j) {
        par[std::size_t(N + j)] = 1;
        K.set(j, N + j, G.dx());
        K.set(N + j, j, G.dx());
        tf.set(j, N + j, -std::exp(-G.x(j)));
    }
    rep.tau_f_skew = check_graded_skew(tf, K, par);

    // <<chi_0, psi_1>> + <<chi_1, psi_0>> with tau(e) = -d/dx on both components
    std::vector<PacketPair> pk = {{1.0, 0.5, 0.0}, {0.7, -0.3, 2.0}, {2.0, 1.0, 60.0}, {1.5, 0.0, 58.0}};
    double te = 0.0;
    for (std::size_t a = 0; a + 1 < pk.size(); a += 2) {
        te = std::max(te, tau_e_skew_residual(G, pk[a], pk[a + 1]));
        te = std::max(te, tau_e_skew_residual(G, pk[a + 1], pk[a]));
    }
    rep.tau_e_skew = te;

    rep.tau_bar_f = dense_of(CQ(-1) * (LinearOp<CQ>::from_dense(want) * ab_tau_f(Q(1)) *
                                       (CQ(0, 1) * LinearOp<CQ>::from_dense(want))));
    rep.rho_bar_residual = ab_rho_bar_residual(Q(3, 2));
    rep.group_law_residual = ab_group_law_residual();

    auto w = ab_witness(G);
    rep.witness_boundary_psi = w.boundary_psi;
    rep.witness_boundary_phi_psi = w.boundary_phi_psi;
    rep.witness_norm_growth = w.growth;
    return rep;
}

std::vector<RepCheckReport> verify_axibeta(const HarnessOptions& opt) {
    auto cache = std::make_shared<std::optional<AxiBetaReport>>();
    int N = opt.grid_N;
    double L = opt.grid_L;
    auto get = [cache, N, L] {
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        if (!*cache) *cache = axibeta_checks(GridSpace(N, L));
        return **cache;
    };
    std::vector<CheckSpec> checks;
    checks.push_back({"Ber of the invariant metric matrix is -i", true, [get] {
                          auto b = get().metric_berezinian;
                          b[0] -= CQ(0, -1);
                          return b.max_abs();
                      }});
    checks.push_back({"Delta is identically 1", true, [get] {
                          auto d = get().delta;
                          d[0] -= 1;
                          return d.max_abs();
                      }});
    checks.push_back({"Fourier maps (psi0, psi1) to (psi1, -i psi0)", true, [get] { return get().fourier_formula ? 0.0 : 1.0; }});
    checks.push_back({"tau(f) graded skew on the grid", true, [get] { return get().tau_f_skew; }});
    checks.push_back({"tau(e) skew for the super scalar product (quadrature)", false, [get] { return get().tau_e_skew; }});
    checks.push_back({"tau-bar(f) = -i kappa phi", true, [get] {
                          Matrix<CQ> want(2, 2, CQ());
                          want(1, 0) = CQ(0, -1);
                          return get().tau_bar_f == want ? 0.0 : 1.0;
                      }});
    checks.push_back({"F rho(0,eta) F^-1 = exp(-i eta kappa phi)", true, [get] { return get().rho_bar_residual; }});
    checks.push_back({"group law associative with inverses (formal parameters)", true, [get] { return get().group_law_residual; }});
    checks.push_back({"Dense asymmetry witness: sech stays in the window, e^-x sech does not", true, [get, L] {
                          auto r = get();
                          bool ok = r.witness_boundary_psi <= 1e-8 && r.witness_boundary_phi_psi >= 1.0 &&
                                    r.witness_norm_growth >= L;
                          return ok ? 0.0 : 1.0;
                      }});
    return run_checks("axi-beta", checks, opt.tol);
}

}  // namespace superalg
