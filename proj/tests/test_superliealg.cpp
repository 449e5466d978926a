#include <doctest.h>

#include "oracles.hpp"
#include "superalg/superliealg.hpp"

using namespace superalg;
using GQ = Grassmann<Q>;
using LE = LieElement<Q>;
using SM = SuperMatrix<Q>;

static const SuperLieAlgebra& osp() {
    static const SuperLieAlgebra a = SuperLieAlgebra::osp12();
    return a;
}

static GQ g(int n, int j) { return GQ::generator(n, j); }
static GQ c(int n, Q v) { return GQ::constant(n, v); }

// v = xi f1 + eta f2 over Lambda_2 (xi = th1, eta = th2).
static LE v_osp() {
    LE v(osp(), 2);
    v[3] = g(2, 1);
    v[4] = g(2, 2);
    return v;
}

static SM from_rows(int p, int q, const std::vector<std::vector<GQ>>& rows) {
    SM m(p, q, rows[0][0].n());
    for (int i = 0; i < p + q; ++i)
        for (int j = 0; j < p + q; ++j) m(i, j) = rows[std::size_t(i)][std::size_t(j)];
    return m;
}

TEST_CASE("osp12 commutator table") {
    const auto& a = osp();
    auto br = [&](int i, int j) { return bracket(LE::basis(a, 0, i), LE::basis(a, 0, j)); };
    CHECK(br(1, 2) == LE::basis(a, 0, 0));
    CHECK(br(0, 1) == LE::basis(a, 0, 1) * Q(2));
    CHECK(br(0, 2) == LE::basis(a, 0, 2) * Q(-2));
    CHECK(br(0, 3) == LE::basis(a, 0, 3));
    CHECK(br(1, 3).is_zero());
    CHECK(br(2, 3) == -LE::basis(a, 0, 4));
    CHECK(br(0, 4) == -LE::basis(a, 0, 4));
    CHECK(br(1, 4) == -LE::basis(a, 0, 3));
    CHECK(br(2, 4).is_zero());
    CHECK(br(3, 3) == LE::basis(a, 0, 1) * Q(-2));
    CHECK(br(3, 4) == -LE::basis(a, 0, 0));
    CHECK(br(4, 4) == LE::basis(a, 0, 2) * Q(2));
    // implied by antisymmetry
    CHECK(br(3, 0) == -LE::basis(a, 0, 3));
    CHECK(br(4, 3) == -LE::basis(a, 0, 0));
}

TEST_CASE("presets validate and carry faithful matrix representations") {
    for (const char* name : {"osp12", "axi-beta", "heisenberg-like(1)", "heisenberg-like(2)", "heisenberg-like(3)"}) {
        auto a = SuperLieAlgebra::preset(name);
        CHECK(a.jacobi_defect() == 0);
        CHECK(a.antisymmetry_defect() == 0);
        CHECK(a.matrix_rep().has_value());
    }
    CHECK_THROWS(SuperLieAlgebra::preset("sl2"));
}

TEST_CASE("corrupted structure constants are rejected") {
    using B = SuperLieAlgebra::Bracket;
    // [e3, f1] = +f2 instead of -f2 breaks Jacobi.
    std::vector<B> t = {
        {0, 1, {{1, Q(2)}}},  {0, 2, {{2, Q(-2)}}}, {1, 2, {{0, Q(1)}}},  {0, 3, {{3, Q(1)}}},
        {2, 3, {{4, Q(1)}}},  {0, 4, {{4, Q(-1)}}}, {1, 4, {{3, Q(-1)}}}, {3, 3, {{1, Q(-2)}}},
        {3, 4, {{0, Q(-1)}}}, {4, 4, {{2, Q(2)}}},
    };
    CHECK_THROWS_AS(SuperLieAlgebra("bad", 3, 2, {"e1", "e2", "e3", "f1", "f2"}, t), StructureError);
    // [e, f] with an even result breaks the grading.
    CHECK_THROWS_AS(SuperLieAlgebra("bad", 1, 1, {"e", "f"}, {B{0, 1, {{0, Q(1)}}}}), StructureError);
    // Inconsistent explicit entries for [e,f] and [f,e].
    CHECK_THROWS_AS(SuperLieAlgebra("bad", 1, 1, {"e", "f"}, {B{0, 1, {{1, Q(1)}}}, B{1, 0, {{1, Q(1)}}}}), StructureError);
    // [e, e] != 0 breaks antisymmetry.
    CHECK_THROWS_AS(SuperLieAlgebra("bad", 2, 0, {"a", "b"}, {B{0, 0, {{1, Q(1)}}}}), StructureError);
    // A matrix representation with a wrong sign is rejected.
    auto a = SuperLieAlgebra::axi_beta();
    Matrix<Q> e(2, 2, Q(0)), f(2, 2, Q(0));
    e(0, 0) = -1;
    f(0, 1) = 1;
    CHECK_THROWS_AS(a.set_matrix_rep(MatrixRep{1, 1, {e, f}}), StructureError);
}

TEST_CASE("algebra json round trip") {
    auto a = SuperLieAlgebra::osp12();
    auto b = SuperLieAlgebra::from_json(a.to_json());
    CHECK(b.to_json() == a.to_json());
    auto j = a.to_json();
    j["brackets"][0]["result"]["e2"] = "3";
    CHECK_THROWS_AS(SuperLieAlgebra::from_json(j), StructureError);
}

TEST_CASE("graded Jacobi on Grassmann-coefficient elements") {
    std::mt19937_64 rng(41);
    for (const char* name : {"osp12", "heisenberg-like(2)", "axi-beta"}) {
        auto a = SuperLieAlgebra::preset(name);
        for (int t = 0; t < 10; ++t) {
            auto x = oracle::random_even_element(rng, a, 4);
            auto y = oracle::random_even_element(rng, a, 4);
            auto z = oracle::random_even_element(rng, a, 4);
            auto r = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
            REQUIRE(r.is_zero());
            REQUIRE(bracket(x, y) == -bracket(y, x));
        }
        LE zero(a, 2);
        CHECK(bracket(zero, zero).is_zero());
    }
}

TEST_CASE("matrix representation turns brackets into commutators") {
    std::mt19937_64 rng(42);
    for (const char* name : {"osp12", "heisenberg-like(3)", "axi-beta"}) {
        auto a = SuperLieAlgebra::preset(name);
        for (int t = 0; t < 10; ++t) {
            auto x = oracle::random_even_element(rng, a, 4);
            auto y = oracle::random_even_element(rng, a, 4);
            auto mx = to_matrix(x), my = to_matrix(y);
            REQUIRE(to_matrix(bracket(x, y)) == mx * my - my * mx);
        }
    }
}

TEST_CASE("ad matrix of xi f1 + eta f2 and its square") {
    int n = 2;
    GQ xi = g(n, 1), eta = g(n, 2), z(n);
    auto ad = ad_matrix(v_osp());
    auto want = from_rows(3, 2, {{z, z, z, -eta, -xi},
                                 {z, z, z, xi * Q(-2), z},
                                 {z, z, z, z, eta * Q(2)},
                                 {xi, -eta, z, z, z},
                                 {-eta, z, -xi, z, z}});
    CHECK(ad == want);
    GQ xe = xi * eta;
    auto sq = from_rows(3, 2, {{xe * Q(2), z, z, z, z},
                               {z, xe * Q(2), z, z, z},
                               {z, z, xe * Q(2), z, z},
                               {z, z, z, xe * Q(-3), z},
                               {z, z, z, z, xe * Q(-3)}});
    CHECK(ad * ad == sq);
    CHECK((ad * ad * ad).max_abs() == 0.0);
    CHECK(ad_matrix(LE(osp(), 2)) == SM(3, 2, 2));
    // ad(v) acting on coordinates agrees with the bracket
    for (int j = 0; j < 5; ++j) {
        auto b = LE::basis(osp(), n, j);
        CHECK(apply(ad, b) == bracket(v_osp(), b));
    }
}

TEST_CASE("series of ad") {
    int n = 2;
    auto v = v_osp();
    auto f1 = LE::basis(osp(), n, 3);
    CHECK(series_of_ad(SeriesKind::BPlus, LE(osp(), n), f1) == f1);
    GQ xe = g(n, 1) * g(n, 2);
    CHECK(series_of_ad(SeriesKind::BPlus, v, f1) == (c(n, 1) + xe * qfrac(1, 3) * Q(-3)) * f1);
    CHECK(series_of_ad(SeriesKind::BPlus, v, f1) == (c(n, 1) - xe) * f1);
    LE want = LE::basis(osp(), n, 0, -g(n, 2) * qfrac(1, 2)) + LE::basis(osp(), n, 1, -g(n, 1));
    CHECK(series_of_ad(SeriesKind::H, v, f1) == want);
    CHECK(series_of_ad(SeriesKind::H, v, f1) == bracket(v, f1) * qfrac(1, 2));
    // matrix form agrees with repeated brackets
    auto hm = series_matrix(SeriesKind::H, v);
    for (int j = 0; j < 5; ++j) {
        auto b = LE::basis(osp(), n, j);
        CHECK(apply(hm, b) == series_of_ad(SeriesKind::H, v, b));
    }
    // a non-nilpotent ad is rejected
    auto e1 = LE::basis(osp(), n, 0);
    CHECK_THROWS_AS(ad_nilpotency_index(e1), NotNilpotentError);
}

TEST_CASE("invariant vector field blocks for osp12") {
    int n = 2;
    GQ xi = g(n, 1), eta = g(n, 2), z(n), one = c(n, 1);
    auto blk = invariant_vf_blocks(v_osp());
    GQ b = one - xi * eta;
    auto want = from_rows(3, 2, {{one, z, z, eta * qfrac(-1, 2), xi * qfrac(-1, 2)},
                                 {z, one, z, -xi, z},
                                 {z, z, one, z, eta},
                                 {xi, -eta, z, b, z},
                                 {-eta, z, -xi, z, b}});
    CHECK(blk.assembled() == want);
    CHECK(delta_function(blk) == one + xi * eta);

    auto zero = invariant_vf_blocks(LE(osp(), n));
    CHECK(zero.A == gmatrix_zero<Q>(2, 3, n));
    CHECK(zero.B == gmatrix_identity<Q>(2, n));
    CHECK(zero.H == gmatrix_zero<Q>(3, 2, n));
    CHECK_THROWS_AS(invariant_vf_blocks(LE::basis(osp(), n, 0, xi * eta)), MembershipError);
}

TEST_CASE("blocks and Delta for the other presets") {
    auto ab = SuperLieAlgebra::axi_beta();
    LE v(ab, 1);
    v[1] = g(1, 1);
    auto blk = invariant_vf_blocks(v);
    CHECK(delta_function(blk) == c(1, 1));

    auto hl = SuperLieAlgebra::heisenberg_like(1);
    LE w(hl, 1);
    w[1] = g(1, 1);
    auto hb = invariant_vf_blocks(w);
    CHECK(hb.H(0, 0) == g(1, 1) * qfrac(-1, 2));
    CHECK(hb.A(0, 0).is_zero());
    CHECK(hb.B(0, 0) == c(1, 1));
}

TEST_CASE("S matrix") {
    auto s1 = s_matrix(c(1, 1));
    CHECK(s1(0, 1) == 1);
    CHECK(s1(1, 0) == 1);
    CHECK(s1(0, 0) == 0);
    CHECK(s1(1, 1) == 0);

    // osp12: Delta = 1 + xi eta, order of subsets (empty, xi, eta, xi eta)
    auto s = s_matrix(c(2, 1) + g(2, 1) * g(2, 2));
    Matrix<Q> want(4, 4, Q(0));
    want(0, 0) = 1;   // <chi_0, psi_0>
    want(0, 3) = 1;   // <chi_0, psi_xieta>
    want(1, 2) = 1;   // <chi_xi, psi_eta>
    want(2, 1) = -1;  // -<chi_eta, psi_xi>
    want(3, 0) = 1;   // <chi_xieta, psi_0>
    CHECK(s == want);
    CHECK(rank(s) == 4);
    for (int n = 1; n <= 5; ++n) {
        std::mt19937_64 rng(43 + n);
        auto delta = oracle::random_homogeneous<Q>(rng, n, 0);
        delta[0] = 1;
        auto sm = s_matrix(delta);
        REQUIRE(rank(sm) == (1 << n));
        for (Mask I = 0; I < (1u << n); ++I)
            for (Mask J = 0; J < (1u << n); ++J)
                if ((I & J) || (std::popcount(I) + std::popcount(J) - n) % 2) REQUIRE(sm(int(I), int(J)) == 0);
    }
}

TEST_CASE("free algebra BCH components") {
    const int D = kMaxBchDegree;
    auto X = FreeElement::letter(D, 0), Y = FreeElement::letter(D, 1);
    auto br = [](const FreeElement& a, const FreeElement& b) { return commutator(a, b); };
    CHECK(bch_component_free(2) == br(X, Y) * qfrac(1, 2));
    CHECK(bch_component_free(3) == (br(X, br(X, Y)) + br(Y, br(Y, X))) * qfrac(1, 12));
    CHECK(bch_component_free(4) == br(Y, br(X, br(Y, X))) * qfrac(1, 24));
    // Dynkin-Specht-Wever projection reproduces every component.
    for (int k = 2; k <= D; ++k) {
        REQUIRE(bch_component(k).expand(D) == bch_component_free(k));
        REQUIRE(separation_component(k).expand(D) == separation_component_free(k));
    }
    CHECK_THROWS(bch_component(9));
}

TEST_CASE("separation closed forms") {
    const int D = kMaxBchDegree;
    auto X = FreeElement::letter(D, 0), Y = FreeElement::letter(D, 1);
    auto br = [](const FreeElement& a, const FreeElement& b) { return commutator(a, b); };
    CHECK(separation_component_free(2) == br(X, Y) * qfrac(1, 2));
    CHECK(separation_component_free(3) == br(X, br(X, Y)) * qfrac(1, 3) - br(Y, br(Y, X)) * qfrac(1, 6));
    CHECK(separation_component_free(4) == br(Y, br(X, br(Y, X))) * qfrac(1, 8) - br(X, br(X, br(X, Y))) * qfrac(1, 24) +
                                              br(Y, br(Y, br(Y, X))) * qfrac(1, 24));
    // the defining identity holds in the truncated free algebra
    FreeElement B0(D), B1(D), one(D);
    one[Word{}] = 1;
    for (int k = 2; k <= D; ++k) (k % 2 ? B1 : B0) += separation_component_free(k);
    CHECK(X.exp() * Y.exp() == B0.exp() * (X + Y + B1).exp());
}

TEST_CASE("bch_truncated on osp12 matrices") {
    std::mt19937_64 rng(44);
    const auto& a = osp();
    for (int t = 0; t < 10; ++t) {
        auto x = oracle::random_odd_part(rng, a, 4, 0b0011);
        auto y = oracle::random_odd_part(rng, a, 4, 0b1100);
        auto z = x + y + bch_truncated(x, y, 4);
        REQUIRE(exp_nilpotent(to_matrix(x)) * exp_nilpotent(to_matrix(y)) == exp_nilpotent(to_matrix(z)));
    }
    // commuting arguments: no correction
    LE e(a, 2);
    e[0] = g(2, 1) * g(2, 2);
    CHECK(bch_truncated(e, e, 8).is_zero());
    CHECK_THROWS(bch_truncated(e, e, 9));
}

TEST_CASE("separate_even_odd") {
    const auto& a = osp();
    int n = 4;
    LE x(a, n), y(a, n);
    x[3] = g(n, 1);
    x[4] = g(n, 2);
    y[3] = g(n, 3);
    y[4] = g(n, 4);
    auto s = separate_even_odd(x, y);
    CHECK(s.b0.in_even_part());
    CHECK(s.b1.in_odd_part());
    CHECK(exp_nilpotent(to_matrix(x)) * exp_nilpotent(to_matrix(y)) ==
          exp_nilpotent(to_matrix(s.b0)) * exp_nilpotent(to_matrix(x + y + s.b1)));
    CHECK(evaluate(separation_component(2), x, y) == bracket(x, y) * qfrac(1, 2));
    CHECK_THROWS_AS(separate_even_odd(LE::basis(a, n, 0, g(n, 1) * g(n, 2)), y), MembershipError);
}

// X even body element times an even nilpotent, tau a fresh odd generator.
TEST_CASE("six exponential identities") {
    const auto& a = osp();
    int n = 5;
    GQ eps = g(n, 1) * g(n, 2) + g(n, 3) * g(n, 4);
    GQ tau = g(n, 5);
    auto E = [&](const LE& z) { return exp_nilpotent(to_matrix(z)); };
    std::mt19937_64 rng(45);
    for (int t = 0; t < 6; ++t) {
        LE X(a, n), Y(a, n);
        for (int i = 0; i < 3; ++i) X[i] = eps * oracle::random_q(rng, 3);
        for (int i = 3; i < 5; ++i) Y[i] = c(n, oracle::random_q(rng, 3));
        auto f = named_series(SeriesKind::F, 8);
        auto tY = tau * Y;
        auto tFY = tau * apply_series(f, X, Y);
        auto tFmY = tau * apply_series(f.scale_argument(-1), X, Y);
        auto tbY = tau * series_of_ad(SeriesKind::B, X, Y);
        auto thY = tau * series_of_ad(SeriesKind::H, X, Y);
        auto tbpY = tau * series_of_ad(SeriesKind::BPlus, X, Y);
        auto tbmY = tau * series_of_ad(SeriesKind::BMinus, X, Y);
        auto half = tau * bracket(X, Y) * qfrac(1, 2);
        REQUIRE(E(X + tY) == E(X) * E(tFmY));
        REQUIRE(E(X + tY) == E(tFY) * E(X));
        REQUIRE(E(X) * E(tY) == E(X + half + tbY));
        REQUIRE(E(X) * E(tY) == E(thY) * E(X + tbpY));
        REQUIRE(E(tY) * E(X) == E(X - half + tbY));
        REQUIRE(E(tY) * E(X) == E(-thY) * E(X + tbmY));
    }
}
