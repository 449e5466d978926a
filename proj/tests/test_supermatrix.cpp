#include <doctest.h>

#include "oracles.hpp"
#include "superalg/supermatrix.hpp"

using namespace superalg;
using GQ = Grassmann<Q>;
using SM = SuperMatrix<Q>;

static GQ c(int n, Q v) { return GQ::constant(n, v); }
static GQ g(int n, int j) { return GQ::generator(n, j); }

TEST_CASE("berezinian examples") {
    SM d(1, 1, 1);
    d(0, 0) = c(1, 2);
    d(1, 1) = c(1, 3);
    CHECK(berezinian(d) == c(1, qfrac(2, 3)));
    for (auto [p, q] : {std::pair{1, 1}, {2, 2}, {0, 3}, {3, 0}})
        CHECK(berezinian(SM::identity(p, q, 2)) == c(2, 1));

    // A = 1, B = xi1, C = xi2, D = 1
    SM m(1, 1, 2);
    m(0, 0) = c(2, 1);
    m(0, 1) = g(2, 1);
    m(1, 0) = g(2, 2);
    m(1, 1) = c(2, 1);
    GQ schur = m(0, 0) - m(0, 1) * m(1, 1).inverse() * m(1, 0);
    CHECK(berezinian(m) == schur);
    CHECK(berezinian(m) == c(2, 1) - g(2, 1) * g(2, 2));
}

TEST_CASE("berezinian errors") {
    SM m(1, 1, 1);
    m(0, 0) = c(1, 1);
    CHECK_THROWS_AS(berezinian(m), SingularError);
    SM odd(1, 1, 1);
    odd(0, 0) = g(1, 1);
    odd(1, 1) = c(1, 1);
    CHECK_THROWS_AS(berezinian(odd), ParityError);
}

TEST_CASE("declared parity is validated") {
    SM m(1, 1, 1);
    m(0, 1) = c(1, 1);
    CHECK_THROWS_AS(m.declare(MatrixParity::Even), ParityError);
    m.declare(MatrixParity::Odd);
    CHECK(m.detect_parity() == MatrixParity::Odd);
}

TEST_CASE("block diagonal berezinian is Det(A)/Det(D)") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        auto m = oracle::random_even_supermatrix(rng, 2, 2, 4);
        for (int i = 0; i < 2; ++i)
            for (int j = 2; j < 4; ++j) m(i, j) = GQ(4), m(j, i) = GQ(4);
        auto one = c(4, 1);
        auto dA = oracle::leibniz_det(m.A(), one);
        auto dD = oracle::leibniz_det(m.D(), one);
        REQUIRE(berezinian(m) * dD == dA);
    }
}

TEST_CASE("berezinian is multiplicative") {
    std::mt19937_64 rng(22);
    std::vector<std::pair<int, int>> shapes = {{1, 1}, {2, 2}, {1, 2}};
    for (int t = 0; t < 200; ++t) {
        auto [p, q] = shapes[t % 3];
        int n = 2 + t % 3;
        auto a = oracle::random_even_supermatrix(rng, p, q, n);
        auto b = oracle::random_even_supermatrix(rng, p, q, n);
        REQUIRE(berezinian(a * b) == berezinian(a) * berezinian(b));
    }
}

TEST_CASE("pi_berezinian") {
    SM d(1, 1, 1);
    d(0, 0) = c(1, -2);
    d(1, 1) = c(1, 3);
    CHECK(pi_berezinian(d) == c(1, qfrac(2, 3)));
    CHECK(pi_berezinian(SM::identity(2, 1, 1)) == c(1, 1));
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        auto a = oracle::random_even_supermatrix(rng, 2, 2, 4);
        auto b = oracle::random_even_supermatrix(rng, 2, 2, 4);
        REQUIRE(pi_berezinian(a * b) == pi_berezinian(a) * pi_berezinian(b));
        Q top = determinant(a.body().block(0, 0, 2, 2));  // B, C have zero body
        REQUIRE(pi_berezinian(a) == berezinian(a) * Q(sgn(top)));
    }
    SM z(1, 1, 1);
    z(1, 1) = c(1, 1);
    CHECK_THROWS(pi_berezinian(z));
}

TEST_CASE("inverse") {
    CHECK(inverse(SM::identity(2, 1, 2)) == SM::identity(2, 1, 2));
    SM e(1, 0, 2);
    e(0, 0) = c(2, 1) + g(2, 1) * g(2, 2);
    CHECK(inverse(e)(0, 0) == c(2, 1) - g(2, 1) * g(2, 2));
    std::mt19937_64 rng(24);
    for (int t = 0; t < 30; ++t) {
        auto m = oracle::random_even_supermatrix(rng, 2, 2, 4);
        REQUIRE(m * inverse(m) == SM::identity(2, 2, 4));
        REQUIRE(inverse(m) * m == SM::identity(2, 2, 4));
    }
    SM s(1, 1, 1);
    CHECK_THROWS_AS(inverse(s), SingularError);
}

TEST_CASE("exp_nilpotent") {
    CHECK(exp_nilpotent(SM(1, 2, 2)) == SM::identity(1, 2, 2));

    // OSp(1,2): xi f1 + eta f2 with xi = th1, eta = th2.
    int n = 2;
    GQ xi = g(n, 1), eta = g(n, 2);
    SM v(1, 2, n);
    v(0, 1) = eta;
    v(0, 2) = xi;
    v(1, 0) = xi;
    v(2, 0) = -eta;
    auto e = exp_nilpotent(v);
    GQ half = c(n, 1) + xi * eta * qfrac(1, 2);
    SM want(1, 2, n);
    want(0, 0) = c(n, 1) - xi * eta;
    want(0, 1) = eta;
    want(0, 2) = xi;
    want(1, 0) = xi;
    want(1, 1) = half;
    want(2, 0) = -eta;
    want(2, 2) = half;
    CHECK(e == want);
    CHECK(e * exp_nilpotent(-v) == SM::identity(1, 2, n));

    std::mt19937_64 rng(25);
    for (int t = 0; t < 20; ++t) {
        SM m(2, 2, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                auto x = oracle::random_homogeneous<Q>(rng, 4, ((i >= 2) ^ (j >= 2)));
                x[0] = 0;
                m(i, j) = x;
            }
        m.declare(MatrixParity::Even);
        auto m2 = m * m;
        REQUIRE(exp_nilpotent(m + m2) == exp_nilpotent(m) * exp_nilpotent(m2));
        REQUIRE(exp_nilpotent(m) * exp_nilpotent(-m) == SM::identity(2, 2, 4));
    }
    SM body(1, 0, 1);
    body(0, 0) = c(1, 1);
    CHECK_THROWS_AS(exp_nilpotent(body), RingError);
}

TEST_CASE("exp_numeric") {
    using SF = SuperMatrix<F64>;
    using GF = Grassmann<F64>;
    CHECK(exp_numeric(SF(1, 1, 1), 1e-12) == SF::identity(1, 1, 1));

    // Rotation generator: exp = [[cos, -sin], [sin, cos]].
    double t = 2.5;
    SF r(2, 0, 1);
    r(0, 1) = GF::constant(1, -t);
    r(1, 0) = GF::constant(1, t);
    auto e = exp_numeric(r, 1e-10);
    CHECK(e(0, 0).body() == doctest::Approx(std::cos(t)).epsilon(1e-13));
    CHECK(e(0, 1).body() == doctest::Approx(-std::sin(t)).epsilon(1e-13));
    CHECK(e(1, 0).body() == doctest::Approx(std::sin(t)).epsilon(1e-13));

    // Commuting split m = b + nu with b = 3*Id and nu nilpotent.
    SF b(1, 1, 2), nu(1, 1, 2);
    b(0, 0) = GF::constant(2, 3.0);
    b(1, 1) = GF::constant(2, 3.0);
    nu(0, 1) = GF::generator(2, 1);
    nu(1, 0) = GF::generator(2, 2) * 0.5;
    nu(0, 0) = GF::monomial(2, 0b11, 2.0);
    auto lhs = exp_numeric(b + nu, 1e-9);
    auto rhs = exp_numeric(b, 1e-9) * exp_nilpotent(nu);
    CHECK((lhs - rhs).max_abs() < 1e-10 * rhs.max_abs());
}

TEST_CASE("supertranspose") {
    SM m(1, 1, 2);
    m(0, 0) = c(2, 1);
    m(0, 1) = g(2, 1);
    m(1, 0) = g(2, 2);
    m(1, 1) = c(2, 2);
    auto st = m.supertranspose();
    CHECK(st(0, 1) == g(2, 2));
    CHECK(st(1, 0) == -g(2, 1));
}

TEST_CASE("json round trip") {
    std::mt19937_64 rng(26);
    auto m = oracle::random_even_supermatrix(rng, 1, 2, 3);
    auto j = to_json(m);
    CHECK(j["parity"] == "even");
    auto back = supermatrix_from_json<Q>(j);
    CHECK(back == m);
    j["entries"][0][1] = to_json(c(3, 1));
    CHECK_THROWS_AS(supermatrix_from_json<Q>(j), ParityError);
}
