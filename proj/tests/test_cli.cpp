#include <doctest.h>

#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"
#include "superalg/grassmann.hpp"

using namespace superalg;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("eval prints the canonical element") {
    auto r = run({"--n", "2", "eval", "th2*th1"});
    CHECK(r.code == 0);
    CHECK(r.out == "-th1*th2\n");
    r = run({"--n", "2", "--coeff", "rational", "eval", "1/2 + 0.5*th1*th1", "--output", "json"});
    CHECK(r.code == 0);
    auto g = grassmann_from_json<Q>(json::parse(r.out));
    CHECK(g == Grassmann<Q>::constant(2, qfrac(1, 2)));
}

TEST_CASE("eval errors are usage errors") {
    auto r = run({"--n", "2", "eval", "th3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("offset 0") != std::string::npos);
    CHECK(run({"--n", "2", "eval", "th1 th2"}).code == 2);
    CHECK(run({"--coeff", "rational", "eval", "i"}).code == 2);
    CHECK(run({"--coeff", "quaternion", "eval", "1"}).code == 2);
    CHECK(run({"--n", "17", "eval", "1"}).code == 2);
    CHECK(run({"eval"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("flag validation happens before any work") {
    CHECK(run({"--grid-N", "1000", "verify", "osp12"}).code == 2);
    CHECK(run({"--grid-L", "-1", "verify", "osp12"}).code == 2);
    CHECK(run({"--k", "one", "verify", "osp12"}).code == 2);
    CHECK(run({"--m", "9", "verify", "osp12"}).code == 2);
    CHECK(run({"--tol", "0", "verify", "osp12"}).code == 2);
    CHECK(run({"--output", "xml", "verify", "osp12"}).code == 2);
}

TEST_CASE("ber, integrate and fourier") {
    auto r = run({"--n", "2", "--coeff", "rational", "ber", "2", "th1", "th2", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "2/3 - 1/9*th1*th2\n");
    CHECK(run({"--n", "2", "ber", "2", "th1", "th2"}).code == 2);
    CHECK(run({"--n", "2", "ber", "th1", "1", "1", "1"}).code == 2);
    r = run({"--n", "2", "--coeff", "rational", "ber", "--p", "2", "--q", "0", "1", "2", "3", "4"});
    CHECK(r.out == "-2\n");
    r = run({"--n", "2", "--coeff", "rational", "ber", "--pi", "-2", "th1", "th2", "3"});
    CHECK(r.out == "2/3 + 1/9*th1*th2\n");

    r = run({"--n", "3", "integrate", "th1*th2*th3 + th2*th3", "--fiber", "2,3"});
    CHECK(r.code == 0);
    CHECK(r.out == "1 + th1\n");
    CHECK(run({"--n", "2", "integrate", "th1*th2"}).out == "1\n");
    CHECK(run({"--n", "2", "integrate", "th1", "--fiber", "3"}).code == 2);

    r = run({"--n", "1", "fourier", "2 + 3*th1"});
    CHECK(r.code == 0);
    CHECK(r.out == "3 - 2*i*th1\n");
    CHECK(run({"--n", "1", "--coeff", "f64", "fourier", "th1"}).code == 2);
}

TEST_CASE("bch-separate is exact and seeded") {
    auto a = run({"--n", "4", "--seed", "5", "bch-separate", "--pairs", "3", "--output", "json"});
    CHECK(a.code == 0);
    auto j = json::parse(a.out);
    REQUIRE(j.size() == 3);
    for (const auto& p : j) CHECK(p["residual"] == "exact-zero");
    CHECK(run({"--n", "4", "--seed", "5", "bch-separate", "--pairs", "3", "--output", "json"}).out == a.out);
    CHECK(run({"--n", "4", "--seed", "6", "bch-separate", "--pairs", "3", "--output", "json"}).out != a.out);
    auto h = run({"--n", "3", "--m", "3", "bch-separate", "--algebra", "heisenberg", "--pairs", "2"});
    CHECK(h.code == 0);
    CHECK(h.out.find("exact zero") != std::string::npos);
    CHECK(run({"--n", "9", "bch-separate"}).code == 2);
    CHECK(run({"bch-separate", "--algebra", "sl2"}).code == 2);
}

TEST_CASE("verify reports") {
    auto r = run({"verify", "osp12", "--output", "json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j.is_array());
    CHECK(j.size() == 18);
    for (const auto& c : j) {
        CHECK(c["example"] == "osp12");
        CHECK(c["check"].is_string());
        CHECK(c["pass"] == true);
        CHECK((c["residual"] == "exact-zero" || c["residual"].is_number()));
        CHECK(c["ms"].is_number());
    }
    auto h = run({"--m", "2", "--k", "1", "verify", "heisenberg"});
    CHECK(h.code == 0);
    CHECK(h.out.find("FAIL") == std::string::npos);
    CHECK(h.out.find("invariant") != std::string::npos);
    CHECK(run({"verify", "nope"}).code == 2);
}

TEST_CASE("verify exits 1 when a check fails") {
    // a tolerance no quadrature can meet
    auto r = run({"--tol", "1e-30", "verify", "axibeta"});
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("installed binary exit codes") {
    auto status = [](const std::string& args) {
        int s = std::system((std::string(SUPERALG_BIN) + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status("verify osp12") == 0);
    CHECK(status("verify unknown-example") == 2);
    CHECK(status("--tol 1e-30 verify axibeta") == 1);
    CHECK(status("--help") == 0);
}
