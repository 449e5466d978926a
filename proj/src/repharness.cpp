#include "superalg/repharness.hpp"

#include <chrono>
#include <future>

namespace superalg {

nlohmann::json to_json(const RepCheckReport& r) {
    nlohmann::json j = {{"example", r.example}, {"check", r.check}, {"pass", r.pass}, {"ms", r.ms}};
    if (r.exact && r.residual == 0.0) j["residual"] = "exact-zero";
    else j["residual"] = r.residual;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

std::vector<RepCheckReport> run_checks(const std::string& example, const std::vector<CheckSpec>& checks, double tol) {
    std::vector<std::future<RepCheckReport>> jobs;
    for (const auto& c : checks) {
        jobs.push_back(std::async(std::launch::async, [&example, c, tol] {
            RepCheckReport r{example, c.name, false, 0.0, c.exact, 0.0, {}};
            auto t0 = std::chrono::steady_clock::now();
            try {
                r.residual = c.run();
                r.pass = c.exact ? r.residual == 0.0 : r.residual <= tol;
            } catch (const std::exception& e) {
                r.residual = std::numeric_limits<double>::infinity();
                r.note = e.what();
            }
            r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            return r;
        }));
    }
    std::vector<RepCheckReport> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

std::vector<RepCheckReport> verify_example(const std::string& name, const HarnessOptions& opt) {
    if (name == "heisenberg-like" || name == "heisenberg") return verify_heisenberg(opt);
    if (name == "axi-beta" || name == "axibeta") return verify_axibeta(opt);
    if (name == "osp12") return verify_osp12(opt);
    if (name == "all") {
        auto out = verify_heisenberg(opt);
        for (auto& r : verify_axibeta(opt)) out.push_back(r);
        for (auto& r : verify_osp12(opt)) out.push_back(r);
        return out;
    }
    throw std::invalid_argument("unknown example '" + name + "' (heisenberg, axibeta, osp12, all)");
}

// ---------------------------------------------------------------------------

GOp gop_zero(int d, int n) { return GOp(d, d, Grassmann<CQ>(n)); }

GOp gop_identity(int d, int n) {
    auto m = gop_zero(d, n);
    for (int i = 0; i < d; ++i) m(i, i) = Grassmann<CQ>::constant(n, CQ(1));
    return m;
}

GOp lift_op(const LinearOp<CQ>& A, const std::vector<int>& row_par, const Grassmann<CQ>& a) {
    auto out = gop_zero(A.rows(), a.n());
    auto ac = a.conj_C();
    for (int j = 0; j < A.cols(); ++j)
        for (const auto& [i, v] : A.column(j)) out(i, j) = (row_par[std::size_t(i)] ? ac : a) * v;
    return out;
}

GOp gop_exp_nilpotent(const GOp& M) {
    int d = M.rows();
    int n = d ? M(0, 0).n() : 0;
    for (const auto& x : M.data())
        if (!x.body().is_zero()) throw RingError("gop_exp_nilpotent: entries must have zero body");
    auto sum = gop_identity(d, n), term = sum;
    for (int k = 1; k <= n + 1; ++k) {
        term = term * M;
        for (auto& x : term.data()) x *= CQ(Q(1, k));
        if (gop_max_abs(term) == 0.0) break;
        sum += term;
    }
    return sum;
}

double gop_max_abs(const GOp& M) {
    double r = 0.0;
    for (const auto& x : M.data()) r = std::max(r, x.max_abs());
    return r;
}

Grassmann<CQ> to_cq(const Grassmann<Q>& x) {
    Grassmann<CQ> out(x.n());
    for (Mask I = 0; I < x.size(); ++I) out[I] = CQ(x[I]);
    return out;
}

// ---------------------------------------------------------------------------

IntegratedRep::IntegratedRep(const SuperLieAlgebra& alg, FormedSpace<CQ> space, std::vector<LinearOp<CQ>> tau,
                             std::vector<BodySample> body)
    : alg_(std::make_shared<const SuperLieAlgebra>(alg)), space_(std::move(space)), tau_(std::move(tau)) {
    const auto& par = space_.parity;
    int d = int(par.size());
    if (int(tau_.size()) != alg.dim()) throw PreconditionError("tau needs one operator per basis vector");
    for (int i = 0; i < alg.dim(); ++i) {
        const auto& t = tau_[std::size_t(i)];
        if (t.rows() != d || t.cols() != d) throw PreconditionError("tau(" + alg.basis_name(i) + ") has the wrong size");
        if (t.parity_part(par, par, 1 - alg.parity(i)).max_abs() != 0.0)
            throw PreconditionError("tau(" + alg.basis_name(i) + ") has the wrong parity");
        if (check_graded_skew(t, space_.super_sp, par) != 0.0)
            throw PreconditionError("tau(" + alg.basis_name(i) + ") is not graded skew");
    }
    for (int i = 0; i < alg.dim(); ++i)
        for (int j = i; j < alg.dim(); ++j) {
            LinearOp<CQ> lhs(d, d);
            for (int k = 0; k < alg.dim(); ++k)
                if (alg.c(i, j, k) != 0) lhs = lhs + CQ(alg.c(i, j, k)) * tau_[std::size_t(k)];
            const auto &a = tau_[std::size_t(i)], &b = tau_[std::size_t(j)];
            CQ sign(alg.parity(i) && alg.parity(j) ? -1 : 1);
            auto rhs = a * b - sign * (b * a);
            if (!(lhs == rhs))
                throw PreconditionError("tau is not a Lie morphism on [" + alg.basis_name(i) + ", " + alg.basis_name(j) + "]");
        }
    for (const auto& s : body) {
        for (int i = 0; i < alg.dim(); ++i) {
            LinearOp<CQ> t(d, d);
            for (int k = 0; k < alg.dim(); ++k)
                if (s.ad(k, i) != 0) t = t + CQ(s.ad(k, i)) * tau_[std::size_t(k)];
            if (!(t * s.rho == s.rho * tau_[std::size_t(i)]))
                throw PreconditionError("tau is not equivariant at a body sample");
        }
    }
}

GOp IntegratedRep::tau(const LieElement<Q>& X) const {
    int n = X.n();
    auto out = gop_zero(dim(), n);
    for (int i = 0; i < alg_->dim(); ++i) {
        if (X[i].is_zero(0.0)) continue;
        out += lift_op(tau_[std::size_t(i)], space_.parity, to_cq(X[i]));
    }
    return out;
}

GOp IntegratedRep::rho_exp(const LieElement<Q>& X) const { return gop_exp_nilpotent(tau(X)); }

GOp IntegratedRep::rho(const LinearOp<CQ>& rho_o_g, const LieElement<Q>& X) const {
    return lift_op(rho_o_g, space_.parity, Grassmann<CQ>::constant(X.n(), CQ(1))) * rho_exp(X);
}

double IntegratedRep::homomorphism_residual(const LieElement<Q>& X, const LieElement<Q>& Y) const {
    auto sep = separate_even_odd(X, Y);
    auto lhs = rho_exp(X) * rho_exp(Y);
    auto rhs = rho_exp(sep.b0) * rho_exp(X + Y + sep.b1);
    return gop_max_abs(lhs - rhs);
}

double IntegratedRep::preservation_residual(const GOp& U) const {
    int d = dim();
    auto col = [&](int a) {
        std::vector<Grassmann<CQ>> v;
        for (int i = 0; i < d; ++i) v.push_back(U(i, a));
        return v;
    };
    double r = 0.0;
    for (int a = 0; a < d; ++a) {
        auto x = col(a);
        for (int b = 0; b < d; ++b) {
            auto val = extend_form(space_.parity, space_.super_sp, x, col(b));
            val[0] -= space_.super_sp.get(a, b);
            r = std::max(r, val.max_abs());
        }
    }
    return r;
}

}  // namespace superalg
