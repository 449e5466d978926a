#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "superalg/berezin.hpp"
#include "superalg/superhilbert.hpp"
#include "superalg/superliealg.hpp"

namespace superalg {

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Reports

struct RepCheckReport {
    std::string example;
    std::string check;
    bool pass = false;
    double residual = 0.0;
    bool exact = false;  // residual computed in exact arithmetic
    double ms = 0.0;
    std::string note;
};

nlohmann::json to_json(const RepCheckReport& r);

struct HarnessOptions {
    int m = 2;
    Q k = 1;
    int grid_N = 4096;
    double grid_L = 20.0;
    double tol = 1e-8;
    std::uint64_t seed = 1;
};

// One named check; returns the residual. Exact checks pass iff the residual is 0.
struct CheckSpec {
    std::string name;
    bool exact;
    std::function<double()> run;
};

// Runs the checks concurrently and collects the reports in input order.
std::vector<RepCheckReport> run_checks(const std::string& example, const std::vector<CheckSpec>& checks, double tol);

std::vector<RepCheckReport> verify_heisenberg(const HarnessOptions& opt);
std::vector<RepCheckReport> verify_axibeta(const HarnessOptions& opt);
std::vector<RepCheckReport> verify_osp12(const HarnessOptions& opt);
// "heisenberg" ("heisenberg-like"), "axibeta" ("axi-beta"), "osp12" or "all".
std::vector<RepCheckReport> verify_example(const std::string& name, const HarnessOptions& opt);

// ---------------------------------------------------------------------------
// Operators with Lambda-valued right coordinates

using GOp = Matrix<Grassmann<CQ>>;

GOp gop_identity(int d, int n);
GOp gop_zero(int d, int n);
// a * A with row i scaled by C^{par(i)}(a).
GOp lift_op(const LinearOp<CQ>& A, const std::vector<int>& row_par, const Grassmann<CQ>& a);
GOp gop_exp_nilpotent(const GOp& M);
double gop_max_abs(const GOp& M);
Grassmann<CQ> to_cq(const Grassmann<Q>& x);

// Elements of the algebra on m + P generators, the first m read as xi, written
// sum_J xi^J c_J with c_J in the algebra of the last P generators.
template <class S>
std::vector<Grassmann<S>> fiber_coordinates(int m, const Grassmann<S>& f) {
    int P = f.n() - m;
    std::vector<Grassmann<S>> c(std::size_t(1) << m, Grassmann<S>(P));
    for (Mask M = 0; M < f.size(); ++M) c[M & ((Mask(1) << m) - 1)][M >> m] = f[M];
    return c;
}

template <class S>
Grassmann<S> from_fiber_coordinates(int m, const std::vector<Grassmann<S>>& c) {
    int P = c.at(0).n();
    Grassmann<S> f(m + P);
    for (Mask J = 0; J < c.size(); ++J)
        for (Mask p = 0; p < c[J].size(); ++p) f[J | (p << m)] = c[J][p];
    return f;
}

// A acting on the xi-part of f, right-linearly in the parameters.
template <class S>
Grassmann<S> apply_on_fiber(const LinearOp<S>& A, int m, const Grassmann<S>& f) {
    auto c = fiber_coordinates(m, f);
    std::vector<Grassmann<S>> out(c.size(), Grassmann<S>(c[0].n()));
    for (int j = 0; j < A.cols(); ++j) {
        if (c[std::size_t(j)].is_zero(0.0)) continue;
        for (const auto& [i, v] : A.column(j)) out[std::size_t(i)] += c[std::size_t(j)] * v;
    }
    return from_fiber_coordinates(m, out);
}

// ---------------------------------------------------------------------------
// Clifford-Heisenberg group

template <class S>
struct HlElement {
    Grassmann<S> y;                 // even
    std::vector<Grassmann<S>> eta;  // odd, one per odd direction
};

template <class S>
HlElement<S> hl_multiply(const HlElement<S>& a, const HlElement<S>& b) {
    if (a.eta.size() != b.eta.size()) throw std::invalid_argument("hl_multiply: odd dimensions differ");
    HlElement<S> r{a.y + b.y, {}};
    for (std::size_t j = 0; j < a.eta.size(); ++j) {
        r.y += a.eta[j] * b.eta[j] * Ring<S>::from_q(Q(1, 2));
        r.eta.push_back(a.eta[j] + b.eta[j]);
    }
    return r;
}

template <class S>
HlElement<S> hl_inverse(const HlElement<S>& a) {
    HlElement<S> r{-a.y, {}};
    for (const auto& e : a.eta) r.eta.push_back(-e);
    return r;
}

// exp of an even element; a nonzero body needs a float ring.
template <class S>
Grassmann<S> exp_even(const Grassmann<S>& x) {
    auto nil = x.nilpotent_part().exp_nilpotent();
    if (Ring<S>::is_zero(x.body(), 0.0)) return nil;
    if constexpr (std::is_same_v<S, CF64> || std::is_same_v<S, F64>) {
        return nil * S(std::exp(x.body()));
    } else {
        throw RingError("exp of a nonzero body needs a float coefficient ring");
    }
}

// (rho_k(y,eta) chi)(xi) = chi(xi - eta) exp(-ik(y + <eta,xi>/2)). Generators
// 1..m of the common algebra are xi; y and eta live in the remaining ones.
template <class S>
Grassmann<S> hl_rep_hat(const std::type_identity_t<S>& k, int m, const HlElement<S>& g, const Grassmann<S>& chi) {
    int n = chi.n();
    if (int(g.eta.size()) != m) throw std::invalid_argument("hl_rep_hat: need m odd parameters");
    std::vector<Grassmann<S>> images;
    Grassmann<S> pairing(n);
    for (int j = 1; j <= n; ++j) {
        auto xj = Grassmann<S>::generator(n, j);
        if (j <= m) {
            const auto& e = g.eta[std::size_t(j - 1)];
            if (e.generators_used() & ((Mask(1) << m) - 1))
                throw std::invalid_argument("hl_rep_hat: parameters must not involve xi");
            images.push_back(xj - e);
            pairing += e * xj;
        } else {
            images.push_back(xj);
        }
    }
    OddSubstitution<S> sub(FiberSplit::with_fiber(n, IndexSet::full(m)), images);
    S mik = Ring<S>::imag_unit() * (-k);
    auto phase = exp_even((g.y + pairing * Ring<S>::from_q(Q(1, 2))) * mik);
    return substitute_odd(chi, sub) * phase;
}

// Matrix of rho_k(g) on FnSpace(C, m), entries over the parameter generators.
GOp hl_rep_hat_matrix(const Q& k, int m, const HlElement<CQ>& g);
LinearOp<CQ> hl_tau_hat_e(const Q& k, int m);
LinearOp<CQ> hl_tau_hat_f(const Q& k, int m, int j);
// The reference m = 2 matrices in the order (1, xi1, xi2, xi1 xi2).
Matrix<CQ> hl_tau_hat_f_display(const Q& k, int j);

// Graded subspace spanned by an even and an odd vector of FnSpace(C, 2).
struct GradedPlane {
    std::vector<CQ> even;
    std::vector<CQ> odd;
};
// H_eps: chi_{eps,0} = exp(-eps k xi1 xi2 / 2), chi_{eps,1} = xi1 + i eps xi2.
GradedPlane hl_invariant_subspace(const Q& k, int eps);
// Residual of f (common algebra) modulo span(vectors) (x) Lambda; zero iff f lies in it.
Grassmann<CQ> span_residual(int m, const std::vector<std::vector<CQ>>& vectors, const Grassmann<CQ>& f);

struct InvariantSubspaceReport {
    double invariance = 0;           // both eps, formal (y, eta)
    double displayed_action = 0;     // reference action on the basis
    double super_sp_orthogonal = 0;  // <H_1|H_-1>
    Q metric_cross_gram = 0;         // max |cross Gram entry| of the metric, exact
    bool m1_no_invariant_lines = false;
    int m2_family_invariant = 0;     // invariant members of the candidate family
    int m2_family_size = 0;
};
InvariantSubspaceReport hl_invariant_subspaces(const Q& k);

// max |F(rho_0(0,eta) psi) - exp(i<kappa,eta>) F(psi)| over a basis, kappa renamed xi.
double hl_fourier0_residual(int m);
// tau-bar(f_j) = -i kappa_j: graded skew, bracket relations and derivative of rho-bar.
double hl_fourier_family_residual(int m, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Integration of an infinitesimal representation (finite dimension)

struct BodySample {
    Matrix<Q> ad;       // Ad(g) on g, columns are images
    LinearOp<CQ> rho;   // rho_o(g)
};

class IntegratedRep {
public:
    // Throws PreconditionError unless tau is an even graded-skew Lie morphism
    // equivariant for the samples.
    IntegratedRep(const SuperLieAlgebra& alg, FormedSpace<CQ> space, std::vector<LinearOp<CQ>> tau,
                  std::vector<BodySample> body = {});

    const SuperLieAlgebra& algebra() const { return *alg_; }
    const FormedSpace<CQ>& space() const { return space_; }
    int dim() const { return int(space_.parity.size()); }
    // tau(X) with Lambda coefficients (row parity rule).
    GOp tau(const LieElement<Q>& X) const;
    // rho(exp X) = exp(tau X) for X with nilpotent coefficients.
    GOp rho_exp(const LieElement<Q>& X) const;
    // rho(g exp X) = rho_o(g) exp(tau X).
    GOp rho(const LinearOp<CQ>& rho_o_g, const LieElement<Q>& X) const;

    // rho(e^X) rho(e^Y) - rho(e^B0) rho(e^{X+Y+B1}) for X, Y in the odd part.
    double homomorphism_residual(const LieElement<Q>& X, const LieElement<Q>& Y) const;
    // max |<U e_a|U e_b> - <e_a|e_b>| for the extended super scalar product.
    double preservation_residual(const GOp& U) const;

private:
    std::shared_ptr<const SuperLieAlgebra> alg_;
    FormedSpace<CQ> space_;
    std::vector<LinearOp<CQ>> tau_;
};

IntegratedRep hl_integrated(const Q& k, int m);

// ---------------------------------------------------------------------------
// Grid harness

// Periodic grid x_j = -L + j dx on [-L, L), N a power of two.
class GridSpace {
public:
    GridSpace(int N, double L);
    int N() const { return N_; }
    double L() const { return L_; }
    double dx() const { return dx_; }
    double x(int j) const { return -L_ + j * dx_; }
    double max_frequency() const { return M_PI / dx_; }

    using Samples = std::vector<CF64>;
    Samples sample(const std::function<CF64(double)>& f) const;
    // Spectral derivative of the given order; the Nyquist mode is dropped for odd orders.
    // Modes below filter * max|mode| are zeroed first (roundoff filter for high orders).
    Samples derivative(const Samples& f, int order = 1, double filter = 0.0) const;
    // f(x - s dx), cyclic.
    Samples shift(const Samples& f, int s) const;
    // Grid index of the shift y; throws unless y is a multiple of dx.
    int aligned_shift(double y) const;
    CF64 pairing(const Samples& f, const Samples& g) const;  // dx sum conj(f) g

private:
    int N_;
    double L_, dx_;
};

// Function of (x, generators): one sample vector per monomial of the common
// algebra (xi first, then formal parameters).
struct GridSuperFunction {
    int ngen = 0;
    std::vector<GridSpace::Samples> c;
    GridSuperFunction() = default;
    GridSuperFunction(int n, int N) : ngen(n), c(std::size_t(1) << n, GridSpace::Samples(std::size_t(N))) {}
};

GridSuperFunction grid_mul_const(const Grassmann<CF64>& a, const GridSuperFunction& f);
GridSuperFunction grid_mul(const GridSuperFunction& f, const GridSuperFunction& g);
GridSuperFunction grid_add(GridSuperFunction f, const GridSuperFunction& g);
// dx sum_x  integral over xi_1..xi_m of conj(chi) psi; result over the parameters.
Grassmann<CF64> grid_super_sp(const GridSpace& G, int m, const GridSuperFunction& chi, const GridSuperFunction& psi);
double grid_max_abs(const GridSuperFunction& f);

// (rho(y,eta) psi)(x, xi) = psi(x - y - <eta,xi>/2, xi - eta): grid shift by y
// plus the Taylor expansion of the nilpotent shift to order m.
GridSuperFunction hl_grid_rep(const GridSpace& G, int m, double y, const std::vector<Grassmann<CF64>>& eta,
                              const GridSuperFunction& psi);

struct PacketPair {
    double a, x0, w;  // exp(-a (x - x0)^2 + i w x)
};
GridSpace::Samples gaussian_packet(const GridSpace& G, const PacketPair& p);
// Closed form of integral conj(chi') psi over the real line.
CF64 packet_derivative_pairing(const PacketPair& chi, const PacketPair& psi);
// |<tau chi|psi> + <chi|tau psi>| + |<tau chi|psi> - exact| with tau(e) = -d/dx.
double tau_e_skew_residual(const GridSpace& G, const PacketPair& chi, const PacketPair& psi);

struct GridReport {
    double translation_unitarity = 0;
    double super_sp_invariance = 0;
    double tau_e_skew = 0;
    double tau_e_skew_coarse = 0;  // at N/2
    double partial_fourier = 0;
    double hermite_stability = 0;
};
GridReport hl_left_regular_grid(int m, const GridSpace& G, const Q& k, std::uint64_t seed);
// Largest relative deviation of the grid iterates tau(e)^r h_n (Hermite functions,
// r <= max_order, n <= max_n) from the exact ladder iterates, or of their mass
// fraction near the window edge.
double hermite_generator_stability(const GridSpace& G, int max_n, int max_order);

// ---------------------------------------------------------------------------
// a xi + beta

struct AxiBetaReport {
    Grassmann<CQ> metric_berezinian;
    Grassmann<Q> delta;
    bool fourier_formula = false;
    double tau_f_skew = 0;               // grid, exact pairing swap
    double tau_e_skew = 0;               // grid, quadrature
    Matrix<CQ> tau_bar_f;                // -F tau(f) F^{-1}, (1, kappa) coordinates, phi = 1
    double rho_bar_residual = 0;         // F rho(0,eta) F^{-1} - exp(-i eta kappa phi), exact
    double group_law_residual = 0;       // associativity with formal parameters, exact
    double witness_boundary_psi = 0;     // |psi| at the window edge
    double witness_boundary_phi_psi = 0; // |e^{-x} psi| at the window edge
    double witness_norm_growth = 0;      // ||e^{-x} psi||^2 on [-2L,2L] minus on [-L,L]
};
AxiBetaReport axibeta_checks(const GridSpace& G);

// ---------------------------------------------------------------------------
// OSp(1,2)

// Entry of an operator matrix on L^2(SL2)^4: L0 + sum_i L_i e_i^R with L linear
// forms in (a, b, c, d).
struct OspEntry {
    std::array<std::array<Q, 4>, 4> L{};  // L[0] multiplication part, L[i] coefficient of e_i
    bool operator==(const OspEntry& o) const { return L == o.L; }
};
using OspOpMatrix = std::array<std::array<OspEntry, 4>, 4>;  // order (1, xi eta, xi, eta)

OspOpMatrix osp_fR_display(int i);
OspOpMatrix osp_fR_corrected(int i);
OspOpMatrix osp_fR_derived(int i);

// Gram matrix of the S-form in the order (1, xi eta, xi, eta).
Matrix<Q> osp_s_form();
// Coefficient form of A^H S + C S A; zero iff f preserves the super scalar product.
Q osp_preservation_symbolic(const OspOpMatrix& f, const Matrix<Q>& S);
// The same residual at a rational SL2 point with random skew k x k stand-ins for e_i^R.
Q osp_preservation_standin(const OspOpMatrix& f, const Matrix<Q>& S, const std::array<Q, 4>& abcd, int k,
                           std::uint64_t seed);
// Ad(g) for g = diag(1, ((a,b),(c,d))) from conjugation in the matrix representation.
Matrix<Q> osp_ad(const std::array<Q, 4>& abcd);
Matrix<Q> osp_ad_display(const std::array<Q, 4>& abcd);

}  // namespace superalg
