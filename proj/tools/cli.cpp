#include "cli.hpp"

#include <CLI11.hpp>
#include <iomanip>
#include <random>
#include <sstream>

#include "superalg/expr.hpp"
#include "superalg/repharness.hpp"

namespace superalg {

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    int n = 2;
    int m = 2;
    std::string k = "1";
    std::string coeff = "crational";
    int grid_N = 4096;
    double grid_L = 20.0;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    std::string output = "text";

    // subcommand arguments
    std::string expr;
    std::vector<std::string> entries;
    int p = 1, q = 1;
    bool pi = false;
    std::vector<int> fiber;
    std::string algebra = "osp12";
    int pairs = 1;
    std::string example;
};

void validate(const Flags& f) {
    if (f.m < 1 || f.m > 3) throw UsageError("--m must be 1, 2 or 3");
    try {
        q_from_string(f.k);
    } catch (const std::exception&) {
        throw UsageError("--k must be a rational such as 3/2");
    }
    if (f.grid_N < 16 || (f.grid_N & (f.grid_N - 1)) != 0) throw UsageError("--grid-N must be a power of two >= 16");
    if (!(f.grid_L > 0)) throw UsageError("--grid-L must be positive");
    if (!(f.tol > 0)) throw UsageError("--tol must be positive");
    for (int j : f.fiber)
        if (j < 1 || j > f.n) throw UsageError("--fiber index " + std::to_string(j) + " outside 1..n");
}

template <class S>
void print_element(std::ostream& out, const Flags& f, const Grassmann<S>& g) {
    if (f.output == "json") {
        auto j = to_json(g);
        j["coeff"] = f.coeff;
        out << j.dump() << "\n";
    } else {
        out << g.to_string() << "\n";
    }
}

// Runs fn<S>() for the ring selected by --coeff.
template <class Fn>
void with_ring(const std::string& coeff, Fn&& fn) {
    if (coeff == "rational") fn.template operator()<Q>();
    else if (coeff == "crational") fn.template operator()<CQ>();
    else if (coeff == "f64") fn.template operator()<F64>();
    else fn.template operator()<CF64>();
}

int cmd_eval(const Flags& f, std::ostream& out) {
    auto e = parse_expr(f.expr, f.n);
    with_ring(f.coeff, [&]<class S>() { print_element(out, f, evaluate_expr<S>(e, f.n)); });
    return 0;
}

int cmd_ber(const Flags& f, std::ostream& out) {
    int d = f.p + f.q;
    if (int(f.entries.size()) != d * d)
        throw UsageError("ber needs " + std::to_string(d * d) + " entries for a " + std::to_string(f.p) + "|" +
                         std::to_string(f.q) + " matrix");
    std::vector<Expr> parsed;
    for (const auto& s : f.entries) parsed.push_back(parse_expr(s, f.n));
    with_ring(f.coeff, [&]<class S>() {
        SuperMatrix<S> M(f.p, f.q, f.n);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) M(i, j) = evaluate_expr<S>(parsed[std::size_t(i * d + j)], f.n);
        print_element(out, f, f.pi ? pi_berezinian(M) : berezinian(M));
    });
    return 0;
}

int cmd_integrate(const Flags& f, std::ostream& out) {
    auto e = parse_expr(f.expr, f.n);
    auto fiber = f.fiber.empty() ? IndexSet::full(f.n) : IndexSet::from_list(f.fiber);
    with_ring(f.coeff, [&]<class S>() {
        print_element(out, f, berezin_integral(evaluate_expr<S>(e, f.n), FiberSplit::with_fiber(f.n, fiber)));
    });
    return 0;
}

int cmd_fourier(const Flags& f, std::ostream& out) {
    if (f.coeff == "rational" || f.coeff == "f64") throw UsageError("fourier needs --coeff crational or cf64");
    Expr call;
    call.kind = Expr::Kind::Call;
    call.fn = "fourier";
    call.args = {parse_expr(f.expr, f.n)};
    with_ring(f.coeff, [&]<class S>() { print_element(out, f, evaluate_expr<S>(call, f.n)); });
    return 0;
}

LieElement<Q> random_odd(const SuperLieAlgebra& alg, int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    LieElement<Q> x(alg, n);
    for (int i = alg.even_dim(); i < alg.dim(); ++i)
        for (int j = 1; j <= n; ++j) x[i] += Grassmann<Q>::generator(n, j) * qfrac(num(rng), den(rng));
    return x;
}

json lie_json(const LieElement<Q>& x) {
    json j = json::object();
    for (int i = 0; i < x.algebra().dim(); ++i)
        if (!x[i].is_zero()) j[x.algebra().basis_name(i)] = to_json(x[i]);
    return j;
}

int cmd_bch(const Flags& f, std::ostream& out) {
    if (f.n < 1 || f.n > 8) throw UsageError("bch-separate needs 1 <= --n <= 8");
    if (f.pairs < 1) throw UsageError("--pairs must be positive");
    auto alg = f.algebra == "osp12" ? SuperLieAlgebra::osp12() : SuperLieAlgebra::heisenberg_like(f.m);
    std::mt19937_64 rng(f.seed);
    json all = json::array();
    bool ok = true;
    for (int t = 0; t < f.pairs; ++t) {
        auto x = random_odd(alg, f.n, rng), y = random_odd(alg, f.n, rng);
        auto s = separate_even_odd(x, y);
        auto lhs = exp_nilpotent(to_matrix(x)) * exp_nilpotent(to_matrix(y));
        auto rhs = exp_nilpotent(to_matrix(s.b0)) * exp_nilpotent(to_matrix(x + y + s.b1));
        double res = (lhs - rhs).max_abs();
        ok = ok && res == 0.0;
        if (f.output == "json") {
            all.push_back({{"X", lie_json(x)},
                           {"Y", lie_json(y)},
                           {"B0", lie_json(s.b0)},
                           {"B1", lie_json(s.b1)},
                           {"degree", s.degree},
                           {"residual", res == 0.0 ? json("exact-zero") : json(res)}});
        } else {
            out << "pair " << t + 1 << "\n  X  = " << x.to_string() << "\n  Y  = " << y.to_string()
                << "\n  B0 = " << s.b0.to_string() << "\n  B1 = " << s.b1.to_string()
                << "\n  exp(X)exp(Y) - exp(B0)exp(X+Y+B1): " << (res == 0.0 ? "exact zero" : std::to_string(res))
                << "\n";
        }
    }
    if (f.output == "json") out << all.dump(2) << "\n";
    return ok ? 0 : 1;
}

HarnessOptions harness(const Flags& f) {
    HarnessOptions o;
    o.m = f.m;
    o.k = q_from_string(f.k);
    o.grid_N = f.grid_N;
    o.grid_L = f.grid_L;
    o.tol = f.tol;
    o.seed = f.seed;
    return o;
}

std::string residual_text(const RepCheckReport& r) {
    if (r.exact && r.residual == 0.0) return "exact-zero";
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << r.residual;
    return s.str();
}

int cmd_verify(const Flags& f, std::ostream& out) {
    std::vector<RepCheckReport> reps;
    try {
        reps = verify_example(f.example, harness(f));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    int failed = 0;
    json arr = json::array();
    for (const auto& r : reps) {
        failed += r.pass ? 0 : 1;
        arr.push_back(to_json(r));
    }
    if (f.output == "json") {
        out << arr.dump(2) << "\n";
    } else {
        for (const auto& r : reps) {
            out << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(11) << r.example << std::setw(62) << r.check
                << " " << residual_text(r);
            if (!r.note.empty()) out << "  (" << r.note << ")";
            out << "\n";
        }
        out << reps.size() - std::size_t(failed) << "/" << reps.size() << " checks passed\n";
    }
    return failed ? 1 : 0;
}

int cmd_report(const Flags& f, std::ostream& out) {
    auto reps = verify_example("all", harness(f));
    struct Row {
        int total = 0, passed = 0;
        double worst = 0, ms = 0;
    };
    std::vector<std::pair<std::string, Row>> rows;
    for (const auto& r : reps) {
        if (rows.empty() || rows.back().first != r.example) rows.push_back({r.example, {}});
        auto& row = rows.back().second;
        row.total += 1;
        row.passed += r.pass ? 1 : 0;
        row.worst = std::max(row.worst, r.residual);
        row.ms += r.ms;
    }
    bool ok = true;
    json summary = json::array();
    for (const auto& [name, row] : rows) {
        ok = ok && row.passed == row.total;
        summary.push_back(
            {{"example", name}, {"checks", row.total}, {"passed", row.passed}, {"worst_residual", row.worst}, {"ms", row.ms}});
    }
    if (f.output == "json") {
        json checks = json::array();
        for (const auto& r : reps) checks.push_back(to_json(r));
        out << json{{"summary", summary}, {"checks", checks}}.dump(2) << "\n";
    } else {
        out << std::left << std::setw(18) << "example" << std::setw(10) << "passed" << std::setw(16) << "worst residual"
            << "check ms\n";
        for (const auto& [name, row] : rows) {
            std::ostringstream w;
            w << std::scientific << std::setprecision(2) << row.worst;
            out << std::setw(18) << name << std::setw(10) << (std::to_string(row.passed) + "/" + std::to_string(row.total))
                << std::setw(16) << w.str() << std::fixed << std::setprecision(1) << row.ms << "\n";
        }
    }
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Grassmann algebra toolkit and representation checks", "superalg"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--n", f.n, "number of Grassmann generators")->check(CLI::Range(0, 16));
    app.add_option("--m", f.m, "odd dimension of the Heisenberg-like algebra");
    app.add_option("--k", f.k, "representation parameter, rational");
    app.add_option("--coeff", f.coeff, "coefficient ring")
        ->check(CLI::IsMember({"rational", "f64", "crational", "cf64"}));
    app.add_option("--grid-N", f.grid_N, "grid points (power of two)");
    app.add_option("--grid-L", f.grid_L, "grid half width");
    app.add_option("--tol", f.tol, "tolerance for float checks");
    app.add_option("--seed", f.seed, "random seed");
    app.add_option("--output", f.output, "output format")->check(CLI::IsMember({"text", "json"}));

    auto* eval = app.add_subcommand("eval", "evaluate an expression");
    eval->add_option("expr", f.expr)->required();
    auto* ber = app.add_subcommand("ber", "Berezinian of an even p|q matrix, entries row by row");
    ber->add_option("entries", f.entries)->required();
    ber->add_option("--p", f.p)->check(CLI::Range(0, 8));
    ber->add_option("--q", f.q)->check(CLI::Range(0, 8));
    ber->add_flag("--pi", f.pi, "absolute value variant");
    auto* integ = app.add_subcommand("integrate", "Berezin integral over the fiber generators (default all)");
    integ->add_option("expr", f.expr)->required();
    integ->add_option("--fiber", f.fiber)->delimiter(',');
    auto* four = app.add_subcommand("fourier", "fermionic Fourier transform on Lambda_n");
    four->add_option("expr", f.expr)->required();
    auto* bch = app.add_subcommand("bch-separate", "even/odd separation of exp(X)exp(Y) for random odd X, Y");
    bch->add_option("--algebra", f.algebra)->check(CLI::IsMember({"osp12", "heisenberg"}));
    bch->add_option("--pairs", f.pairs);
    auto* ver = app.add_subcommand("verify", "run the checks of an example: heisenberg, axibeta, osp12, all");
    ver->add_option("example", f.example)->required();
    auto* rep = app.add_subcommand("report", "summary of all examples");

    std::vector<const char*> argv{"superalg"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        validate(f);
        if (eval->parsed()) return cmd_eval(f, out);
        if (ber->parsed()) return cmd_ber(f, out);
        if (integ->parsed()) return cmd_integrate(f, out);
        if (four->parsed()) return cmd_fourier(f, out);
        if (bch->parsed()) return cmd_bch(f, out);
        if (ver->parsed()) return cmd_verify(f, out);
        if (rep->parsed()) return cmd_report(f, out);
    } catch (const ParseError& e) {
        err << "superalg: parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "superalg: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace superalg
