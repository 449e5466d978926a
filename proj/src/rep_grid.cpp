#include <fftw3.h>

#include <mutex>
#include <random>

#include "superalg/repharness.hpp"

namespace superalg {

namespace {

std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

// In-place unnormalized DFT; sign = FFTW_FORWARD or FFTW_BACKWARD.
void dft(std::vector<CF64>& v, int sign) {
    int N = int(v.size());
    auto* buf = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::size_t(N)));
    if (!buf) throw std::bad_alloc();
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(N, buf, buf, sign, FFTW_ESTIMATE);
    }
    for (int j = 0; j < N; ++j) {
        buf[j][0] = v[std::size_t(j)].real();
        buf[j][1] = v[std::size_t(j)].imag();
    }
    fftw_execute(plan);
    for (int j = 0; j < N; ++j) v[std::size_t(j)] = CF64(buf[j][0], buf[j][1]);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
}

}  // namespace

GridSpace::GridSpace(int N, double L) : N_(N), L_(L), dx_(2.0 * L / N) {
    if (N < 2 || (N & (N - 1))) throw std::invalid_argument("grid size must be a power of two");
    if (!(L > 0)) throw std::invalid_argument("grid half-width must be positive");
}

GridSpace::Samples GridSpace::sample(const std::function<CF64(double)>& f) const {
    Samples s(static_cast<std::size_t>(N_));
    for (int j = 0; j < N_; ++j) s[std::size_t(j)] = f(x(j));
    return s;
}

GridSpace::Samples GridSpace::derivative(const Samples& f, int order, double filter) const {
    if (order == 0) return f;
    Samples F = f;
    dft(F, FFTW_FORWARD);
    if (filter > 0) {
        double peak = 0.0;
        for (const auto& v : F) peak = std::max(peak, std::abs(v));
        for (auto& v : F)
            if (std::abs(v) <= filter * peak) v = 0.0;
    }
    double base = M_PI / L_;  // 2 pi / (2L)
    for (int q = 0; q < N_; ++q) {
        int qq = q <= N_ / 2 ? q : q - N_;
        if (q == N_ / 2 && (order & 1)) {
            F[std::size_t(q)] = 0.0;
            continue;
        }
        CF64 ik(0.0, base * qq);
        F[std::size_t(q)] *= std::pow(ik, order) / double(N_);
    }
    dft(F, FFTW_BACKWARD);
    return F;
}

GridSpace::Samples GridSpace::shift(const Samples& f, int s) const {
    Samples out(f.size());
    int N = N_;
    for (int j = 0; j < N; ++j) out[std::size_t(j)] = f[std::size_t(((j - s) % N + N) % N)];
    return out;
}

int GridSpace::aligned_shift(double y) const {
    double q = y / dx_;
    double r = std::round(q);
    if (std::abs(q - r) > 1e-9) throw std::invalid_argument("translation is not grid-aligned");
    return int(r);
}

CF64 GridSpace::pairing(const Samples& f, const Samples& g) const {
    CF64 s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += std::conj(f[j]) * g[j];
    return s * dx_;
}

// ---------------------------------------------------------------------------

namespace {

bool all_zero(const GridSpace::Samples& s) {
    for (const auto& v : s)
        if (v != 0.0) return false;
    return true;
}

}  // namespace

GridSuperFunction grid_mul_const(const Grassmann<CF64>& a, const GridSuperFunction& f) {
    int N = int(f.c[0].size());
    GridSuperFunction out(f.ngen, N);
    for (Mask M : a.support(0.0))
        for (Mask K = 0; K < f.c.size(); ++K) {
            if ((M & K) || all_zero(f.c[K])) continue;
            CF64 s = inversion_parity(M, K) ? -a[M] : a[M];
            auto& dst = out.c[M | K];
            for (int j = 0; j < N; ++j) dst[std::size_t(j)] += s * f.c[K][std::size_t(j)];
        }
    return out;
}

GridSuperFunction grid_mul(const GridSuperFunction& f, const GridSuperFunction& g) {
    int N = int(f.c[0].size());
    GridSuperFunction out(f.ngen, N);
    std::vector<Mask> sf, sg;
    for (Mask M = 0; M < f.c.size(); ++M)
        if (!all_zero(f.c[M])) sf.push_back(M);
    for (Mask M = 0; M < g.c.size(); ++M)
        if (!all_zero(g.c[M])) sg.push_back(M);
    for (Mask M : sf)
        for (Mask K : sg) {
            if (M & K) continue;
            double s = inversion_parity(M, K) ? -1.0 : 1.0;
            auto& dst = out.c[M | K];
            for (int j = 0; j < N; ++j) dst[std::size_t(j)] += s * f.c[M][std::size_t(j)] * g.c[K][std::size_t(j)];
        }
    return out;
}

GridSuperFunction grid_add(GridSuperFunction f, const GridSuperFunction& g) {
    for (std::size_t M = 0; M < f.c.size(); ++M)
        for (std::size_t j = 0; j < f.c[M].size(); ++j) f.c[M][j] += g.c[M][j];
    return f;
}

double grid_max_abs(const GridSuperFunction& f) {
    double r = 0.0;
    for (const auto& s : f.c)
        for (const auto& v : s) r = std::max(r, std::abs(v));
    return r;
}

Grassmann<CF64> grid_super_sp(const GridSpace& G, int m, const GridSuperFunction& chi, const GridSuperFunction& psi) {
    auto cchi = chi;
    for (auto& s : cchi.c)
        for (auto& v : s) v = std::conj(v);
    auto prod = grid_mul(cchi, psi);
    Grassmann<CF64> tot(prod.ngen);
    for (Mask M = 0; M < prod.c.size(); ++M) {
        CF64 s = 0.0;
        for (const auto& v : prod.c[M]) s += v;
        tot[M] = s * G.dx();
    }
    auto integ = berezin_integral(tot, FiberSplit::with_fiber(prod.ngen, IndexSet::full(m)));
    Grassmann<CF64> out(prod.ngen - m);
    for (Mask M = 0; M < integ.size(); ++M) out[M >> m] += integ[M];
    return out;
}

GridSuperFunction hl_grid_rep(const GridSpace& G, int m, double y, const std::vector<Grassmann<CF64>>& eta,
                              const GridSuperFunction& psi) {
    int s = G.aligned_shift(y);
    int n = psi.ngen, N = G.N();
    if (int(eta.size()) != m) throw std::invalid_argument("hl_grid_rep: need m odd parameters");
    using GC = Grassmann<CF64>;
    std::vector<GC> images;
    GC pairing(n);
    for (int j = 1; j <= n; ++j) {
        auto xj = GC::generator(n, j);
        if (j <= m) {
            images.push_back(xj - eta[std::size_t(j - 1)]);
            pairing += eta[std::size_t(j - 1)] * xj;
        } else {
            images.push_back(xj);
        }
    }
    OddSubstitution<CF64> sub(FiberSplit::with_fiber(n, IndexSet::full(m)), images);
    std::vector<GC> mono_image;
    for (Mask M = 0; M < psi.c.size(); ++M) mono_image.push_back(substitute_odd(GC::monomial(n, M), sub));

    GridSuperFunction shifted(n, N);
    for (Mask M = 0; M < psi.c.size(); ++M)
        if (!all_zero(psi.c[M])) shifted.c[M] = G.shift(psi.c[M], s);

    // sum_r (-<eta,xi>/2)^r / r!  (d^r psi)(x - y, xi - eta)
    GridSuperFunction out(n, N);
    auto step = pairing * CF64(-0.5);
    GC coef = GC::constant(n, 1.0);
    for (int r = 0; r <= m; ++r) {
        if (r > 0) coef = coef * step * CF64(1.0 / r);
        if (coef.is_zero(0.0)) break;
        GridSuperFunction term(n, N);
        for (Mask M = 0; M < psi.c.size(); ++M) {
            if (all_zero(shifted.c[M])) continue;
            GridSuperFunction comp(n, N);
            comp.c[0] = G.derivative(shifted.c[M], r);
            term = grid_add(std::move(term), grid_mul_const(mono_image[M], comp));
        }
        out = grid_add(std::move(out), grid_mul_const(coef, term));
    }
    return out;
}

GridSpace::Samples gaussian_packet(const GridSpace& G, const PacketPair& p) {
    return G.sample([p](double x) { return std::exp(CF64(-p.a * (x - p.x0) * (x - p.x0), p.w * x)); });
}

CF64 packet_derivative_pairing(const PacketPair& f, const PacketPair& g) {
    // conj(f') g = (alpha x + beta) exp(-A x^2 + B x + C)
    double A = f.a + g.a;
    CF64 B(2 * f.a * f.x0 + 2 * g.a * g.x0, g.w - f.w);
    double C = -f.a * f.x0 * f.x0 - g.a * g.x0 * g.x0;
    double alpha = -2 * f.a;
    CF64 beta(2 * f.a * f.x0, -f.w);
    return std::exp(C + B * B / (4 * A)) * std::sqrt(M_PI / A) * (alpha * B / (2 * A) + beta);
}

double tau_e_skew_residual(const GridSpace& G, const PacketPair& chi, const PacketPair& psi) {
    auto c = gaussian_packet(G, chi), p = gaussian_packet(G, psi);
    auto dc = G.derivative(c), dp = G.derivative(p);
    CF64 a = -G.pairing(dc, p);  // <tau chi|psi>
    CF64 b = -G.pairing(c, dp);  // <chi|tau psi>
    CF64 exact = -packet_derivative_pairing(chi, psi);
    return std::abs(a + b) + std::abs(a - exact);
}

double hermite_generator_stability(const GridSpace& G, int max_n, int max_order) {
    // orthonormal Hermite functions by the three-term recurrence
    int top = max_n + max_order + 1;
    std::vector<GridSpace::Samples> h;
    h.push_back(G.sample([](double x) { return CF64(std::pow(M_PI, -0.25) * std::exp(-x * x / 2)); }));
    h.push_back(G.sample([](double x) { return CF64(std::sqrt(2.0) * x * std::pow(M_PI, -0.25) * std::exp(-x * x / 2)); }));
    for (int n = 1; n < top; ++n) {
        GridSpace::Samples next(h[0].size());
        for (int j = 0; j < G.N(); ++j)
            next[std::size_t(j)] = std::sqrt(2.0 / (n + 1)) * G.x(j) * h[std::size_t(n)][std::size_t(j)] -
                                   std::sqrt(double(n) / (n + 1)) * h[std::size_t(n - 1)][std::size_t(j)];
        h.push_back(next);
    }
    // -h_n' = -sqrt(n/2) h_{n-1} + sqrt((n+1)/2) h_{n+1}
    auto ladder = [top](const std::vector<double>& c) {
        std::vector<double> out(c.size(), 0.0);
        for (int n = 0; n < top; ++n) {
            if (c[std::size_t(n)] == 0.0) continue;
            if (n > 0) out[std::size_t(n - 1)] -= std::sqrt(n / 2.0) * c[std::size_t(n)];
            out[std::size_t(n + 1)] += std::sqrt((n + 1) / 2.0) * c[std::size_t(n)];
        }
        return out;
    };
    int N = G.N(), edge = std::max(1, N / 100);
    double worst = 0.0;
    for (int n = 0; n <= max_n; ++n) {
        std::vector<double> c(std::size_t(top + 1), 0.0);
        c[std::size_t(n)] = 1.0;
        for (int r = 0; r <= max_order; ++r) {
            if (r > 0) c = ladder(c);
            auto f = G.derivative(h[std::size_t(n)], r, 1e-15);
            if (r & 1)
                for (auto& v : f) v = -v;
            double err = 0.0, ref = 0.0, peak = 0.0, boundary = 0.0;
            for (int j = 0; j < N; ++j) {
                CF64 want = 0.0;
                for (int q = 0; q < top; ++q)
                    if (c[std::size_t(q)] != 0.0) want += c[std::size_t(q)] * h[std::size_t(q)][std::size_t(j)];
                err += std::norm(f[std::size_t(j)] - want);
                ref += std::norm(want);
                double v = std::abs(f[std::size_t(j)]);
                peak = std::max(peak, v);
                if (j < edge || j >= N - edge) boundary = std::max(boundary, v);
            }
            worst = std::max({worst, std::sqrt(err / ref), boundary / peak});
        }
    }
    return worst;
}

namespace {

double translation_unitarity(const GridSpace& G) {
    int N = G.N();
    int s = G.aligned_shift(37 * G.dx());
    LinearOp<CF64> S(N, N), K(N, N);
    for (int j = 0; j < N; ++j) {
        GridSpace::Samples e(std::size_t(N), 0.0);
        e[std::size_t(j)] = 1.0;
        auto col = G.shift(e, s);
        for (int i = 0; i < N; ++i)
            if (col[std::size_t(i)] != 0.0) S.set(i, j, col[std::size_t(i)]);
        K.set(j, j, G.dx());
    }
    return (S.adjoint() * K * S - K).max_abs();
}

std::vector<PacketPair> random_packets(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> a(0.5, 2.0), x0(-5.0, 5.0), w(-20.0, 20.0);
    std::vector<PacketPair> out;
    for (int i = 0; i < count; ++i) out.push_back({a(rng), x0(rng), w(rng)});
    return out;
}

double tau_e_study(const GridSpace& G) {
    // packets from slowly varying to close to the resolution limit of N = 2048, L = 20
    std::vector<std::pair<PacketPair, PacketPair>> pairs = {
        {{1.0, 0.5, 0.0}, {0.7, -0.3, 2.0}},
        {{2.0, 1.0, 60.0}, {1.5, 0.0, 58.0}},
        {{4.0, 1.0, 150.0}, {3.0, 0.5, 148.0}},
    };
    double r = 0.0;
    for (const auto& [a, b] : pairs) r = std::max(r, tau_e_skew_residual(G, a, b));
    return r;
}

}  // namespace

GridReport hl_left_regular_grid(int m, const GridSpace& G, const Q& k, std::uint64_t seed) {
    GridReport rep;
    rep.translation_unitarity = translation_unitarity(G);

    std::mt19937_64 rng(seed);
    int n = 2 * m, N = G.N();
    std::vector<Grassmann<CF64>> eta;
    for (int j = 1; j <= m; ++j) eta.push_back(Grassmann<CF64>::generator(n, m + j));

    // super scalar product invariance with formal eta
    GridSuperFunction chi(n, N), psi(n, N);
    auto pc = random_packets(rng, 1 << m), pp = random_packets(rng, 1 << m);
    for (Mask I = 0; I < (Mask(1) << m); ++I) {
        chi.c[I] = gaussian_packet(G, pc[I]);
        psi.c[I] = gaussian_packet(G, pp[I]);
    }
    double y = 23 * G.dx();
    auto before = grid_super_sp(G, m, chi, psi);
    auto after = grid_super_sp(G, m, hl_grid_rep(G, m, y, eta, chi), hl_grid_rep(G, m, y, eta, psi));
    rep.super_sp_invariance = (after - before).max_abs();

    rep.tau_e_skew = tau_e_study(G);
    rep.tau_e_skew_coarse = tau_e_study(GridSpace(N / 2, G.L()));

    // partial Fourier: psi(x, xi) = c(xi) e^{ikx} at a grid frequency near k
    int q = std::max(1, int(std::lround(k.get_d() * G.L() / M_PI)));
    double kg = M_PI * q / G.L();
    Grassmann<CF64> c(n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Mask I = 0; I < (Mask(1) << m); ++I) c[I] = CF64(u(rng), u(rng));
    GridSuperFunction wave(n, N);
    for (Mask I = 0; I < (Mask(1) << m); ++I)
        wave.c[I] = G.sample([&](double x) { return c[I] * std::exp(CF64(0.0, kg * x)); });
    auto moved = hl_grid_rep(G, m, y, eta, wave);
    HlElement<CF64> g{Grassmann<CF64>::constant(n, y), eta};
    auto want = hl_rep_hat<CF64>(CF64(kg), m, g, c);
    double pf = 0.0;
    for (int j = 0; j < N; ++j) {
        CF64 phase = std::exp(CF64(0.0, -kg * G.x(j)));
        for (Mask M = 0; M < moved.c.size(); ++M) pf = std::max(pf, std::abs(moved.c[M][std::size_t(j)] * phase - want[M]));
    }
    rep.partial_fourier = pf;
    rep.hermite_stability = hermite_generator_stability(G, 10, 6);
    return rep;
}

}  // namespace superalg
