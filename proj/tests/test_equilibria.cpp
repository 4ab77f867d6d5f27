#include <doctest.h>

#include <cmath>

#include "wflow/equilibria.hpp"
#include "wflow/fields.hpp"

using namespace wflow;

namespace {
const SpaceParams W12 = make_space(1.0 / 8.0, 4);
const SpaceParams W6 = make_space(1.0 / 6.0, 2);
const SpaceParams W24 = make_space(1.0 / 9.0, 8);
}  // namespace

TEST_CASE("singular point locations") {
    const auto pts = singular_points(W12);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].w1 == doctest::Approx(1.0));
    CHECK(pts[0].w2 == doctest::Approx(1.0));
    CHECK(pts[1].w1 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(pts[1].w2 == doctest::Approx(1.0));
    CHECK(pts[2].w1 == doctest::Approx(1.0));
    CHECK(pts[2].w2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(pts[3].w1 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(pts[3].w2 == doctest::Approx(3.0).epsilon(1e-14));
    for (const auto& p : pts) {
        const auto f = field_w(W12, p);
        CHECK(std::fabs(f[0]) <= 1e-13);
        CHECK(std::fabs(f[1]) <= 1e-13);
    }
    CHECK_THROWS_AS(q_ratio(make_space(0.25, 4)), std::invalid_argument);
}

TEST_CASE("special point locations") {
    const auto pts = special_points(W12);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].w1 == doctest::Approx(0.125));
    CHECK(pts[0].w2 == doctest::Approx(1.0));
    CHECK(pts[1].w1 == doctest::Approx(1.0));
    CHECK(pts[1].w2 == doctest::Approx(0.125));
    CHECK(pts[2].w1 == doctest::Approx(8.0));
    CHECK(pts[2].w2 == doctest::Approx(8.0));
}

TEST_CASE("linearization at the equilibria") {
    auto reports = equilibrium_reports(W12);
    REQUIRE(reports.size() == 4);

    const auto& e0 = reports[0];
    CHECK(e0.cls == EquilibriumClass::UnstableNode);
    CHECK(e0.eig.re1 == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(e0.eig.re2 == doctest::Approx(0.5).epsilon(1e-13));

    const auto& e1 = reports[1];
    CHECK(e1.cls == EquilibriumClass::Saddle);
    CHECK(std::min(e1.eig.re1, e1.eig.re2) ==
          doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::max(e1.eig.re1, e1.eig.re2) ==
          doctest::Approx(5.0 / 6.0).epsilon(1e-12));

    const auto& e3 = reports[3];
    CHECK(e3.cls == EquilibriumClass::Saddle);
    CHECK(std::min(e3.eig.re1, e3.eig.re2) ==
          doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(std::max(e3.eig.re1, e3.eig.re2) ==
          doctest::Approx(2.5).epsilon(1e-12));

    // Every equilibrium corresponds to an Einstein metric.
    for (const auto& r : reports) CHECK(r.einstein_defect <= 1e-13);
}

TEST_CASE("trivial equilibrium becomes attracting for large a") {
    const auto s = make_space(0.35, 4);
    const auto reports = equilibrium_reports(s);
    CHECK(reports[0].cls == EquilibriumClass::StableNode);
    CHECK(reports[0].eig.re1 == doctest::Approx(1 - 4 * 0.35).epsilon(1e-12));
}

TEST_CASE("classification rejects non-equilibria and the degenerate case") {
    CHECK_THROWS_AS(classify_equilibrium(W12, PhasePoint{2.0, 3.0}),
                    std::invalid_argument);
    const auto s = make_space(0.25, 4);
    const auto c = classify_equilibrium(s, PhasePoint{1.0, 1.0});
    CHECK(c.cls == EquilibriumClass::Degenerate);
}

TEST_CASE("boundary-arc parametrization stays on the curve") {
    for (const auto& s : {W6, W12, W24}) {
        double prev_w1 = 0.0;
        for (int i = 1; i < 40; ++i) {
            const double t = i / 40.0;
            const auto p = r1_parametrization(s, t);
            CHECK(std::fabs(curve_residual(s, CurveId::R1, p)) <=
                  1e-10 * (1.0 + p.w2 * p.w2));
            CHECK(p.w1 > prev_w1);
            prev_w1 = p.w1;
            CHECK(p.w1 == doctest::Approx(t * p.w2).epsilon(1e-13));
        }
        // The arc terminates at the double point (1/a, 1/a).
        const auto tail = r1_parametrization(s, 1.0 - 1e-10);
        CHECK(tail.w1 == doctest::Approx(1.0 / s.a).epsilon(1e-6));
        CHECK(tail.w2 == doctest::Approx(1.0 / s.a).epsilon(1e-6));
    }
    CHECK_THROWS_AS(r1_parametrization(W12, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(r1_parametrization(W12, 1.0), std::invalid_argument);
}

TEST_CASE("tangency root for a = 1/8") {
    const auto qo = q_point(W12);
    REQUIRE(qo.has_value());
    const auto& q = *qo;
    CHECK(q.t_star == doctest::Approx(0.361437710894464).epsilon(1e-9));
    CHECK(q.point.w1 == doctest::Approx(3.16608752075748).epsilon(1e-9));
    CHECK(q.point.w2 == doctest::Approx(8.75970443959001).epsilon(1e-9));
    CHECK(std::fabs(q.curve_residual) <= 1e-9);
    CHECK(std::fabs(q.tangency_residual) <= 1e-8);
}

TEST_CASE("tangency root for a = 1/9") {
    const auto qo = q_point(W24);
    REQUIRE(qo.has_value());
    const auto& q = *qo;
    CHECK(q.t_star == doctest::Approx(0.389089208607229).epsilon(1e-9));
    CHECK(q.point.w1 == doctest::Approx(3.72935169989682).epsilon(1e-9));
    CHECK(q.point.w2 == doctest::Approx(9.58482429581197).epsilon(1e-9));
    CHECK(std::fabs(q.curve_residual) <= 1e-9);
}

TEST_CASE("tangency root for a = 1/6 matches the closed form") {
    const auto qo = q_point(W6);
    REQUIRE(qo.has_value());
    const auto& q = *qo;
    CHECK(q.t_star == doctest::Approx(1.0 - std::sqrt(10.0) / 4.0).epsilon(1e-11));
    CHECK(q.point.w1 == doctest::Approx(1.79056941504209).epsilon(1e-9));
    CHECK(q.point.w2 == doctest::Approx(8.54970354689117).epsilon(1e-9));
}

TEST_CASE("tangency function changes sign at the root") {
    for (const auto& s : {W6, W12, W24}) {
        const auto q = q_point(s);
        REQUIRE(q.has_value());
        const double lo = r1_tangency_function(s, q->t_star - 0.01);
        const double hi = r1_tangency_function(s, q->t_star + 0.01);
        CHECK(lo * hi < 0.0);
    }
}

TEST_CASE("factored inner product identity on the sectional boundary") {
    // (V, grad l3) = 2 (w1 - 1)(w2 - 1) W holds identically in the plane.
    for (const auto& p : {PhasePoint{1.2, 1.5}, PhasePoint{2.0, 3.0},
                          PhasePoint{0.7, 4.0}, PhasePoint{1.31, 1.33}}) {
        const auto tr = transversality_l3(W12, p);
        CHECK(tr.direct ==
              doctest::Approx(tr.factored).epsilon(1e-12));
        const double expected =
            2.0 * (p.w1 - 1.0) * (p.w2 - 1.0) * tr.w_factor;
        CHECK(tr.factored == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("factored inner product identity on the Ricci boundary") {
    for (const auto& s : {W6, W12, W24}) {
        for (int i = 1; i < 20; ++i) {
            const double t = i / 20.0;
            const auto tr = transversality_r1(s, t);
            const double expected =
                (tr.point.w2 * tr.point.w2) / (2.0 * s.a * s.a) * tr.w_value;
            CHECK(tr.inner == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}
