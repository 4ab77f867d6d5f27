#pragma once

#include <array>

#include "wflow/curvature.hpp"
#include "wflow/space.hpp"

namespace wflow {

/// Volume-normalized curvature flow on diagonal metrics,
///   dx_i/dt = -2 x_i (r_i - S/n),
/// which preserves x1 x2 x3 and increases S.
std::array<double, 3> field_x(const SpaceParams& s, const Metric3& m);

/// Restriction to the unit-volume slice x3 = 1/(x1 x2), written in (x1, x2).
std::array<double, 2> field_x_reduced(const SpaceParams& s, double x1, double x2);

/// Scale-invariant projection in (w1, w2) = (x3/x1, x3/x2):
///   f = (w1 - 1)(w1 - 2a w1 w2 - 2a w2)
///   g = (w2 - 1)(w2 - 2a w1 w2 - 2a w1)
std::array<double, 2> field_w(const SpaceParams& s, const PhasePoint& p);

struct Jacobian2 {
    double a11, a12, a21, a22;
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

/// Exact Jacobian of field_w (closed form, no differencing).
Jacobian2 jacobian_w(const SpaceParams& s, const PhasePoint& p);

/// Pair of eigenvalues; imag == 0 marks a real pair (values in re1 <= re2),
/// otherwise a conjugate pair re +/- i*imag.
struct EigenPair {
    double re1, re2, imag;
    bool complex_pair() const { return imag != 0.0; }
};

EigenPair eigenvalues(const Jacobian2& j);

/// Defect between the projected 3D flow and field_w at the phase point of
/// m.  The chain rule gives d(w_i)/dt * x3 = field_w_i exactly, so the
/// return value is rounding-level for consistent implementations.
double consistency_residual(const SpaceParams& s, const Metric3& m);

/// Residual of the invariant line 1/w1 + 1/w2 = 1 (vanishes on the
/// canonical-structure separatrix of the a = 1/6 preset).
double kahler_residual(const PhasePoint& p);

}  // namespace wflow
