#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "wflow/curvature.hpp"
#include "wflow/fields.hpp"

using namespace wflow;

namespace {
const SpaceParams W12 = make_space(1.0 / 8.0, 4);
}

TEST_CASE("planar field values") {
    const auto v = field_w(W12, PhasePoint{2.0, 3.0});
    CHECK(v[0] == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-15));

    // Equilibria of the planar system.
    for (const auto& p : {PhasePoint{1, 1}, PhasePoint{1.0 / 3.0, 1.0},
                          PhasePoint{1.0, 1.0 / 3.0}, PhasePoint{3, 3}}) {
        const auto f = field_w(W12, p);
        CHECK(std::fabs(f[0]) <= 1e-14);
        CHECK(std::fabs(f[1]) <= 1e-14);
    }
}

TEST_CASE("full field fixes Einstein metrics and preserves volume") {
    const auto z = field_x(W12, Metric3{1, 1, 1});
    for (double c : z) CHECK(std::fabs(c) <= 1e-15);

    // (3,1,1) normalized to unit volume is a fixed point too.
    const Metric3 e = normalize_volume(Metric3{3, 1, 1});
    const auto fe = field_x(W12, e);
    for (double c : fe) CHECK(std::fabs(c) <= 1e-14);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.3, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        const Metric3 m{U(rng), U(rng), U(rng)};
        const auto f = field_x(W12, m);
        // d/dt (x1 x2 x3) = 0 along the flow.
        const double dvol =
            f[0] * m.x2 * m.x3 + m.x1 * f[1] * m.x3 + m.x1 * m.x2 * f[2];
        CHECK(std::fabs(dvol) <= 1e-12 * (1.0 + std::fabs(dvol)));
        // Scalar curvature is nondecreasing: dS/dt = sum dS/dx_i * f_i >= 0.
        const double h = 1e-6;
        double dS = 0.0;
        const std::array<double, 3> xs{m.x1, m.x2, m.x3};
        for (int i = 0; i < 3; ++i) {
            std::array<double, 3> up = xs, dn = xs;
            up[i] += h;
            dn[i] -= h;
            const double Sp = scalar_curvature(W12, Metric3{up[0], up[1], up[2]});
            const double Sm = scalar_curvature(W12, Metric3{dn[0], dn[1], dn[2]});
            dS += (Sp - Sm) / (2 * h) * f[i];
        }
        CHECK(dS >= -1e-6 * (1.0 + std::fabs(dS)));
    }
}

TEST_CASE("reduced field restricts the full one up to a constant time rescale") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.4, 2.5);
    for (int trial = 0; trial < 40; ++trial) {
        const double x1 = U(rng), x2 = U(rng);
        const Metric3 m{x1, x2, 1.0 / (x1 * x2)};
        const auto full = field_x(W12, m);
        const auto red = field_x_reduced(W12, x1, x2);
        const double scale = 1.0 + std::fabs(full[0]) + std::fabs(full[1]);
        CHECK(std::fabs(red[0] - 3.0 * full[0]) <= 1e-12 * scale);
        CHECK(std::fabs(red[1] - 3.0 * full[1]) <= 1e-12 * scale);
    }
}

TEST_CASE("planar field matches the pushed-forward full field") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(0.5, 4.0);
    for (int trial = 0; trial < 40; ++trial) {
        const Metric3 m{U(rng), U(rng), U(rng)};
        const auto p = to_scale_invariant(m);
        CHECK(consistency_residual(W12, m) <=
              1e-11 * (1.0 + std::fabs(p.w1) + std::fabs(p.w2)));
    }
}

TEST_CASE("planar Jacobian against finite differences") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.5, 4.0);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const PhasePoint p{U(rng), U(rng)};
        const auto J = jacobian_w(W12, p);
        const auto fx_p = field_w(W12, PhasePoint{p.w1 + h, p.w2});
        const auto fx_m = field_w(W12, PhasePoint{p.w1 - h, p.w2});
        const auto fy_p = field_w(W12, PhasePoint{p.w1, p.w2 + h});
        const auto fy_m = field_w(W12, PhasePoint{p.w1, p.w2 - h});
        const double num[2][2] = {
            {(fx_p[0] - fx_m[0]) / (2 * h), (fy_p[0] - fy_m[0]) / (2 * h)},
            {(fx_p[1] - fx_m[1]) / (2 * h), (fy_p[1] - fy_m[1]) / (2 * h)}};
        CHECK(J.a11 == doctest::Approx(num[0][0]).epsilon(1e-5));
        CHECK(J.a12 == doctest::Approx(num[0][1]).epsilon(1e-5));
        CHECK(J.a21 == doctest::Approx(num[1][0]).epsilon(1e-5));
        CHECK(J.a22 == doctest::Approx(num[1][1]).epsilon(1e-5));
    }
}

TEST_CASE("Jacobian at the trivial equilibrium is scalar") {
    for (double a : {0.10, 1.0 / 8.0, 0.35}) {
        const auto s = make_space(a, 4);
        const auto J = jacobian_w(s, PhasePoint{1, 1});
        CHECK(J.a11 == doctest::Approx(1 - 4 * a).epsilon(1e-14));
        CHECK(J.a22 == doctest::Approx(1 - 4 * a).epsilon(1e-14));
        CHECK(std::fabs(J.a12) <= 1e-15);
        CHECK(std::fabs(J.a21) <= 1e-15);
    }
}

TEST_CASE("2x2 eigenvalue helper") {
    const auto sym = eigenvalues(Jacobian2{2, 1, 1, 2});
    CHECK_FALSE(sym.imag);
    CHECK(sym.re1 == doctest::Approx(1.0));
    CHECK(sym.re2 == doctest::Approx(3.0));

    const auto rot = eigenvalues(Jacobian2{0, -1, 1, 0});
    CHECK(rot.imag);
    CHECK(rot.re1 == doctest::Approx(0.0));

    const auto tri = eigenvalues(Jacobian2{-0.5, 0.25, 0.0, 5.0 / 6.0});
    CHECK_FALSE(tri.imag);
    CHECK(tri.re1 == doctest::Approx(-0.5));
    CHECK(tri.re2 == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("invariant-line residual") {
    CHECK(std::fabs(kahler_residual(PhasePoint{2, 2})) <= 1e-15);
    CHECK(std::fabs(kahler_residual(PhasePoint{1.5, 3.0})) <= 1e-15);
    CHECK(kahler_residual(PhasePoint{1.2, 6.0}) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(kahler_residual(PhasePoint{2, 3}) < 0.0);
    CHECK(kahler_residual(PhasePoint{2, 1.5}) > 0.0);
}

TEST_CASE("invariant line is invariant for a = 1/6") {
    const auto W6 = make_space(1.0 / 6.0, 2);
    // Tangency: the field applied to h = 1/w1 + 1/w2 - 1 vanishes on h = 0.
    for (double w1 : {1.3, 1.5, 2.0, 2.5, 3.0}) {
        const double w2 = w1 / (w1 - 1.0);
        const auto f = field_w(W6, PhasePoint{w1, w2});
        const double dh = -f[0] / (w1 * w1) - f[1] / (w2 * w2);
        CHECK(std::fabs(dh) <= 1e-12 * (1.0 + std::fabs(f[0]) + std::fabs(f[1])));
    }
    // Not invariant for other parameter values.
    const double w1 = 1.5, w2 = 3.0;
    const auto f = field_w(W12, PhasePoint{w1, w2});
    const double dh = -f[0] / (w1 * w1) - f[1] / (w2 * w2);
    CHECK(std::fabs(dh) > 1e-3);
}
