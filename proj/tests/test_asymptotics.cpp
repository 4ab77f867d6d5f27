#include <doctest.h>

#include <cmath>
#include <vector>

#include "wflow/asymptotics.hpp"

using namespace wflow;

namespace {

Trajectory<2> power_law_tail(double coeff, double alpha, int n, double u_lo,
                             double u_hi) {
    Trajectory<2> out;
    out.samples.reserve(n);
    const double step = std::log(u_hi / u_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        // Walk toward the corner: u decreases as the fictitious time grows.
        const double u = u_hi * std::exp(-step * i);
        out.samples.push_back(
            Sample<2>{0.1 * i, {1.0 + u, coeff * std::pow(u, -alpha)}});
    }
    return out;
}

}  // namespace

TEST_CASE("predicted exponent per parameter") {
    CHECK(predicted_exponent(make_space(1.0 / 6.0, 2)) == doctest::Approx(1.0));
    CHECK(predicted_exponent(make_space(1.0 / 8.0, 4)) == doctest::Approx(1.5));
    CHECK(predicted_exponent(make_space(1.0 / 9.0, 8)) == doctest::Approx(1.75));
    CHECK(predicted_exponent(make_space(0.1, 4)) == doctest::Approx(2.0));
}

TEST_CASE("tail fit recovers a synthetic power law") {
    const auto tail = power_law_tail(2.7, 1.6, 200, 1e-8, 1e-3);
    const auto fit = fit_tail_exponent(tail, 1e-2);
    CHECK(fit.alpha == doctest::Approx(1.6).epsilon(1e-9));
    CHECK(fit.log_c == doctest::Approx(std::log(2.7)).epsilon(1e-9));
    // Storing w1 = 1 + u rounds u near 1e-8 to ~8 significant digits, so
    // the pointwise residual floor sits well above the fit accuracy.
    CHECK(fit.max_residual <= 1e-7);
    CHECK(fit.n_points == 200);
}

TEST_CASE("tail fit filters by window") {
    auto tail = power_law_tail(2.0, 1.5, 100, 1e-8, 1e-3);
    // Add polluting points beyond the window; they must not affect the fit.
    for (int i = 0; i < 30; ++i)
        tail.samples.push_back(Sample<2>{100.0 + i, {1.5 + 0.1 * i, 40.0}});
    const auto fit = fit_tail_exponent(tail, 1e-2);
    CHECK(fit.n_points == 100);
    CHECK(fit.alpha == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(fit.w1_max <= 1.0 + 1e-2);
}

TEST_CASE("tail fit needs enough samples") {
    const auto tail = power_law_tail(2.0, 1.5, 5, 1e-6, 1e-4);
    CHECK_THROWS_AS(fit_tail_exponent(tail, 1e-2), std::invalid_argument);
}

TEST_CASE("envelope slopes for matched and mismatched exponents") {
    const auto s = make_space(1.0 / 8.0, 4);
    const double a0 = predicted_exponent(s);  // 1.5

    const auto matched = power_law_tail(2.0, a0, 150, 1e-8, 1e-3);
    const auto ok = envelope_check(s, matched, 0.1, 1e-2);
    CHECK(ok.lower_ok);
    CHECK(ok.upper_ok);

    // Too-steep decay violates the upper compensated bound.
    const auto steep = power_law_tail(2.0, 1.3 * a0, 150, 1e-8, 1e-3);
    const auto bad_hi = envelope_check(s, steep, 0.1, 1e-2);
    CHECK_FALSE(bad_hi.upper_ok);
    CHECK(bad_hi.lower_ok);

    // Too-shallow decay violates the lower compensated bound.
    const auto shallow = power_law_tail(2.0, 0.7 * a0, 150, 1e-8, 1e-3);
    const auto bad_lo = envelope_check(s, shallow, 0.1, 1e-2);
    CHECK_FALSE(bad_lo.lower_ok);
    CHECK(bad_lo.upper_ok);
}

TEST_CASE("ordering against a reference curve") {
    const auto tail = power_law_tail(3.0, 1.2, 120, 1e-8, 1e-3);
    // Steeper than the reference exponent 1.0: sits above it deep in the tail.
    CHECK(ordering_vs_curve(tail, 1.0, 4.0, 1e-2) == CurveOrdering::Over);
    // Shallower than exponent 1.5: sits below that reference.
    CHECK(ordering_vs_curve(tail, 1.5, 4.0, 1e-2) == CurveOrdering::Under);
}

TEST_CASE("ordering detects a crossing") {
    auto tail = power_law_tail(3.0, 1.0, 60, 1e-8, 1e-3);
    const auto low = power_law_tail(0.1, 1.0, 60, 1e-8, 1e-3);
    tail.samples.insert(tail.samples.end(), low.samples.begin(),
                        low.samples.end());
    CHECK(ordering_vs_curve(tail, 1.0, 1.0, 1e-2) == CurveOrdering::Mixed);
}

TEST_CASE("ordering needs enough samples") {
    const auto tail = power_law_tail(3.0, 1.0, 4, 1e-6, 1e-4);
    CHECK_THROWS_AS(ordering_vs_curve(tail, 1.0, 1.0, 1e-2), std::invalid_argument);
}
