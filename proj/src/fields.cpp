#include "wflow/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace wflow {

std::array<double, 3> field_x(const SpaceParams& s, const Metric3& m) {
    const auto r = principal_ricci(s, m);
    const double mean = (r[0] + r[1] + r[2]) / 3.0;  // = S/n with S = d * sum
    return {-2.0 * m.x1 * (r[0] - mean), -2.0 * m.x2 * (r[1] - mean),
            -2.0 * m.x3 * (r[2] - mean)};
}

std::array<double, 2> field_x_reduced(const SpaceParams& s, double x1, double x2) {
    if (!(x1 > 0.0) || !(x2 > 0.0))
        throw std::invalid_argument("reduced coordinates must be positive");
    const double a = s.a;
    const double inv = 1.0 / (x1 * x1 * x2 * x2);  // x3^2 on the unit-volume slice
    const double f1 = (x1 / x2 + x1 * x1 * x2 - 2.0) -
                      2.0 * a * x1 * (2.0 * x1 * x1 - x2 * x2 - inv);
    const double f2 = (x2 / x1 + x1 * x2 * x2 - 2.0) -
                      2.0 * a * x2 * (2.0 * x2 * x2 - x1 * x1 - inv);
    return {f1, f2};
}

std::array<double, 2> field_w(const SpaceParams& s, const PhasePoint& p) {
    validate(p);
    const double a = s.a, w1 = p.w1, w2 = p.w2;
    return {(w1 - 1.0) * (w1 - 2.0 * a * w1 * w2 - 2.0 * a * w2),
            (w2 - 1.0) * (w2 - 2.0 * a * w1 * w2 - 2.0 * a * w1)};
}

Jacobian2 jacobian_w(const SpaceParams& s, const PhasePoint& p) {
    validate(p);
    const double a = s.a, w1 = p.w1, w2 = p.w2;
    const double u = w1 - 2.0 * a * w1 * w2 - 2.0 * a * w2;
    const double v = w2 - 2.0 * a * w1 * w2 - 2.0 * a * w1;
    Jacobian2 j;
    j.a11 = u + (w1 - 1.0) * (1.0 - 2.0 * a * w2);
    j.a12 = -2.0 * a * (w1 - 1.0) * (w1 + 1.0);
    j.a21 = -2.0 * a * (w2 - 1.0) * (w2 + 1.0);
    j.a22 = v + (w2 - 1.0) * (1.0 - 2.0 * a * w1);
    return j;
}

EigenPair eigenvalues(const Jacobian2& j) {
    const double tr = j.trace(), det = j.det();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        double l1 = 0.5 * (tr - sq), l2 = 0.5 * (tr + sq);
        return {l1, l2, 0.0};
    }
    return {0.5 * tr, 0.5 * tr, 0.5 * std::sqrt(-disc)};
}

double consistency_residual(const SpaceParams& s, const Metric3& m) {
    const auto p = to_scale_invariant(m);
    const auto r = principal_ricci(s, m);
    // w1 = x3/x1: dw1/dt = w1 * (x3'/x3 - x1'/x1) = -2 w1 (r3 - r1); the
    // scale-invariant field absorbs the conformal factor 1/x3.
    const double d1 = -2.0 * p.w1 * (r[2] - r[0]) * m.x3;
    const double d2 = -2.0 * p.w2 * (r[2] - r[1]) * m.x3;
    const auto f = field_w(s, p);
    return std::hypot(d1 - f[0], d2 - f[1]);
}

double kahler_residual(const PhasePoint& p) {
    validate(p);
    return 1.0 / p.w1 + 1.0 / p.w2 - 1.0;
}

}  // namespace wflow
