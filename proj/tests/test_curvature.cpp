#include <doctest.h>

#include <cmath>

#include "wflow/curvature.hpp"

using namespace wflow;

namespace {
const SpaceParams W12 = make_space(1.0 / 8.0, 4);
const SpaceParams W6 = make_space(1.0 / 6.0, 2);
const SpaceParams W24 = make_space(1.0 / 9.0, 8);
}  // namespace

TEST_CASE("principal Ricci values and scalar curvature") {
    // Bi-invariant point: r_i = (1 - a)/2, S = 3 d (1 - a)/2.
    const auto r = principal_ricci(W12, Metric3{1, 1, 1});
    CHECK(r[0] == doctest::Approx(7.0 / 16.0).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(7.0 / 16.0).epsilon(1e-15));
    CHECK(r[2] == doctest::Approx(7.0 / 16.0).epsilon(1e-15));
    CHECK(scalar_curvature(W12, Metric3{1, 1, 1}) ==
          doctest::Approx(21.0 / 4.0).epsilon(1e-15));

    // (3,1,1) is Einstein here: all principal values equal 5/16.
    const auto re = principal_ricci(W12, Metric3{3, 1, 1});
    CHECK(re[0] == doctest::Approx(5.0 / 16.0).epsilon(1e-14));
    CHECK(re[1] == doctest::Approx(5.0 / 16.0).epsilon(1e-14));
    CHECK(re[2] == doctest::Approx(5.0 / 16.0).epsilon(1e-14));

    // Scalar curvature scales like the inverse metric.
    const double s1 = scalar_curvature(W12, Metric3{0.7, 1.3, 2.1});
    const double s2 = scalar_curvature(W12, Metric3{1.4, 2.6, 4.2});
    CHECK(s2 == doctest::Approx(0.5 * s1).epsilon(1e-14));
}

TEST_CASE("Ricci numerators") {
    const auto k = ricci_numerators(W12, Metric3{0.5, 0.05, 1.0});
    CHECK(k[0] == doctest::Approx(-0.0440625).epsilon(1e-13));
    const auto kk = ricci_numerators(W12, Metric3{1, 1, 1});
    CHECK(kk[0] == doctest::Approx(7.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("sectional indicator polynomials") {
    const auto g = sectional_gammas(Metric3{0.5, 0.5, 1.0});
    CHECK(g[2] == doctest::Approx(-1.0).epsilon(1e-15));
    // gamma is independent of a by construction, so only the metric enters.
    const auto g2 = sectional_gammas(Metric3{1, 1, 4.0 / 3.0});
    CHECK(g2[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(g2[0] > 0.0);
    CHECK(g2[1] > 0.0);
}

TEST_CASE("signature classification") {
    CHECK(sectional_signature(W12, Metric3{1, 1, 1}) == SignClass::Positive);
    // The near-ray dead zone still reports the bi-invariant comparison.
    CHECK(sectional_signature(W12, Metric3{1 + 1e-15, 1, 1}) == SignClass::Positive);
    CHECK(sectional_signature(W12, Metric3{3, 1, 1}) == SignClass::Mixed);
    CHECK(sectional_signature(W12, Metric3{1, 1, 4.0 / 3.0}) == SignClass::Boundary);
    CHECK(sectional_signature(W6, Metric3{1.05, 1, 1.1}) == SignClass::Positive);
    CHECK_THROWS_AS(sectional_signature(make_space(0.2, 4), Metric3{1, 1, 1}),
                    std::invalid_argument);

    CHECK(ricci_signature(W12, Metric3{1, 1, 1}) == SignClass::Positive);
    CHECK(ricci_signature(W12, Metric3{0.5, 0.05, 1.0}) == SignClass::Mixed);
    CHECK(scalar_signature(W12, Metric3{1, 1, 1}) == SignClass::Positive);
    CHECK(scalar_signature(W12, Metric3{0.5, 20.0, 1.0}) == SignClass::Mixed);
}

TEST_CASE("full metric classification") {
    const auto sig = classify_metric(W6, Metric3{1, 1, 2});
    CHECK(sig.kahler);
    CHECK(sig.ricci == SignClass::Positive);
    REQUIRE(sig.sectional.has_value());

    const auto sig2 = classify_metric(W12, Metric3{1, 1, 2});
    CHECK_FALSE(sig2.kahler);  // flag is tied to a = 1/6

    const auto sig3 = classify_metric(make_space(0.3, 4), Metric3{1, 2, 3});
    CHECK_FALSE(sig3.sectional.has_value());
}

TEST_CASE("boundary residual values") {
    const auto b = boundary_residuals(W12, PhasePoint{2.0, 20.0});
    CHECK(b.rho[0] == doctest::Approx(-70.5).epsilon(1e-14));
    CHECK(b.scalar_expr == doctest::Approx(-669.5).epsilon(1e-14));

    const auto b1 = boundary_residuals(W12, PhasePoint{1.0, 1.0});
    CHECK(b1.l[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b1.l[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b1.l[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("residuals agree with the metric-side polynomials") {
    // l_i and rho_i are the cleared-denominator pullbacks of gamma_i and
    // k_i through (1/w1, 1/w2, 1).
    for (const auto& p :
         {PhasePoint{1.3, 2.4}, PhasePoint{0.7, 0.9}, PhasePoint{3.0, 0.4}}) {
        const auto b = boundary_residuals(W12, p);
        const Metric3 m = from_scale_invariant(p);
        const auto g = sectional_gammas(m);
        const auto k = ricci_numerators(W12, m);
        const double clear = p.w1 * p.w1 * p.w2 * p.w2;
        for (int i = 0; i < 3; ++i) {
            CHECK(b.l[i] == doctest::Approx(g[i] * clear).epsilon(1e-12));
            CHECK(b.rho[i] == doctest::Approx(k[i] * clear).epsilon(1e-12));
        }
        // scalar_expr < 0 exactly when S > 0.
        const double S = scalar_curvature(W12, m);
        CHECK((b.scalar_expr < 0) == (S > 0));
    }
}

TEST_CASE("region membership") {
    const PhasePoint inside{1.1, 1.3};
    CHECK(region_contains(W12, Region::SectionalPositive, inside));
    CHECK(region_contains(W12, Region::RicciPositive, inside));
    CHECK(region_contains(W12, Region::ScalarPositive, inside));
    CHECK(region_margin(W12, Region::SectionalPositive, inside) ==
          doctest::Approx(0.7693).epsilon(1e-3));

    CHECK_FALSE(region_contains(W12, Region::RicciPositive, PhasePoint{2.0, 20.0}));
    CHECK(region_contains(W12, Region::ScalarPositive, PhasePoint{2.0, 20.0}));
    CHECK_FALSE(region_contains(W12, Region::ScalarPositive, PhasePoint{2.0, 0.05}));

    CHECK_THROWS_AS(region_margin(make_space(0.2, 4), Region::SectionalPositive,
                                  PhasePoint{1.1, 1.2}),
                    std::invalid_argument);
}

TEST_CASE("boundary curve sampling: single-root curves") {
    const auto arc = sample_boundary_curve(W12, CurveId::S3, CurveBranch::Auto, 1.05,
                                           1.30, 40);
    REQUIRE(arc.points.size() == 40);
    CHECK(arc.skipped.empty());
    double prev = 1e300;
    for (const auto& p : arc.points) {
        CHECK(std::fabs(curve_residual(W12, CurveId::S3, p)) <= 1e-9);
        CHECK(p.w2 > p.w1);  // sector branch
        CHECK(p.w2 < prev);  // monotone fall toward the diagonal
        prev = p.w2;
    }
    // Off-range sampling reports the gap instead of inventing points.
    const auto gap = sample_boundary_curve(W12, CurveId::S3, CurveBranch::Auto, 0.5,
                                           0.9, 10);
    CHECK(gap.points.empty());
    CHECK(gap.skipped.size() == 10);
}

TEST_CASE("boundary curve sampling: two-branch curves") {
    const auto upper =
        sample_boundary_curve(W12, CurveId::R1, CurveBranch::Upper, 2.0, 7.9, 30);
    const auto lower =
        sample_boundary_curve(W12, CurveId::R1, CurveBranch::Lower, 2.0, 7.9, 30);
    REQUIRE(upper.points.size() == 30);
    REQUIRE(lower.points.size() == 30);
    for (int i = 0; i < 30; ++i) {
        CHECK(std::fabs(curve_residual(W12, CurveId::R1, upper.points[i])) <= 1e-8);
        CHECK(std::fabs(curve_residual(W12, CurveId::R1, lower.points[i])) <= 1e-8);
        CHECK(upper.points[i].w2 > lower.points[i].w2);
    }
    // The upper branch passes through (1/a, 1/a).
    const auto through =
        sample_boundary_curve(W12, CurveId::R1, CurveBranch::Upper, 7.9999, 8.0001, 3);
    CHECK(through.points[1].w2 == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("nullcline curves") {
    const auto omega =
        sample_boundary_curve(W12, CurveId::OmegaNull, CurveBranch::Auto, 2.0, 2.0001, 2);
    CHECK(omega.points.front().w2 == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    for (const auto& p : omega.points)
        CHECK(std::fabs(curve_residual(W12, CurveId::OmegaNull, p)) <= 1e-12);
}

TEST_CASE("straight guide curves") {
    const auto diag = sample_boundary_curve(W12, CurveId::C1, CurveBranch::Auto, 0.5,
                                            2.5, 5);
    for (const auto& p : diag.points) CHECK(p.w1 == p.w2);
    const auto vert = sample_boundary_curve(W12, CurveId::C2, CurveBranch::Auto, 0.5,
                                            2.5, 5);
    for (const auto& p : vert.points) CHECK(p.w1 == 1.0);
    const auto horiz = sample_boundary_curve(W12, CurveId::C3, CurveBranch::Auto, 0.5,
                                             2.5, 5);
    for (const auto& p : horiz.points) CHECK(p.w2 == 1.0);
}

TEST_CASE("curve naming") {
    CHECK(std::string(curve_name(CurveId::S3)) == "s3");
    CHECK(std::string(curve_name(CurveId::ScalarCurve)) == "s");
    CHECK(std::string(curve_name(CurveId::OmegaNull)) == "omega");
}

TEST_CASE("signatures across the presets") {
    for (const auto& s : {W6, W12, W24}) {
        CHECK(sectional_signature(s, Metric3{1, 1, 1}) == SignClass::Positive);
        CHECK(ricci_signature(s, Metric3{1, 1, 1}) == SignClass::Positive);
        // Far out along one axis everything mixed-signed.
        CHECK(ricci_signature(s, Metric3{1, 25.0, 1}) == SignClass::Mixed);
    }
}
