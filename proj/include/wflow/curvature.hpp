#pragma once

#include <array>
#include <optional>
#include <vector>

#include "wflow/space.hpp"

namespace wflow {

/// Principal Ricci values (r1, r2, r3), one per isotropy summand:
///   r_i = (x_j x_k + a (x_i^2 - x_j^2 - x_k^2)) / (2 x1 x2 x3).
std::array<double, 3> principal_ricci(const SpaceParams& s, const Metric3& m);

/// Scalar curvature S = d (r1 + r2 + r3).
double scalar_curvature(const SpaceParams& s, const Metric3& m);

/// Numerators k_i = x_j x_k + a (x_i^2 - x_j^2 - x_k^2); sign of r_i.
std::array<double, 3> ricci_numerators(const SpaceParams& s, const Metric3& m);

/// Extremal sectional-curvature indicators for the classical presets:
///   gamma_i = (x_j - x_k)^2 + 2 x_i (x_j + x_k) - 3 x_i^2.
/// Independent of a; positivity of all three is equivalent to positive
/// sectional curvature away from the ray x1 = x2 = x3.
std::array<double, 3> sectional_gammas(const Metric3& m);

enum class SignClass { Positive, Boundary, Mixed };

/// Sign classification with relative zero-tolerance 1e-12 on each residual.
SignClass ricci_signature(const SpaceParams& s, const Metric3& m);
SignClass scalar_signature(const SpaceParams& s, const Metric3& m);

/// Only defined on the classical presets; throws std::invalid_argument
/// otherwise.  On the ray x1 = x2 = x3 the bi-invariant comparison applies
/// and the class is Positive.
SignClass sectional_signature(const SpaceParams& s, const Metric3& m);

struct CurvatureSignature {
    std::optional<SignClass> sectional;  // empty when a is not a classical preset
    SignClass ricci;
    SignClass scalar;
    bool kahler;  // a = 1/6 and x_k = x_i + x_j for some labelling
};

CurvatureSignature classify_metric(const SpaceParams& s, const Metric3& m);

/// Residuals of every curvature boundary in phase coordinates.  Each l_i /
/// rho_i is the corresponding gamma_i / k_i evaluated at (1/w1, 1/w2, 1)
/// and cleared of denominators by w1^2 w2^2, hence a polynomial:
///   l1 = w1^2 w2^2 - 2 w1^2 w2 + 2 w1 w2^2 + w1^2 + 2 w1 w2 - 3 w2^2
///   l2 = w1^2 w2^2 + 2 w1^2 w2 - 2 w1 w2^2 - 3 w1^2 + 2 w1 w2 + w2^2
///   l3 = -3 w1^2 w2^2 + 2 w1^2 w2 + 2 w1 w2^2 + w1^2 - 2 w1 w2 + w2^2
///   rho1 = -a w1^2 w2^2 - a w1^2 + a w2^2 + w1^2 w2
///   rho2 = -a w1^2 w2^2 + a w1^2 - a w2^2 + w1 w2^2
///   rho3 =  a w1^2 w2^2 - a w1^2 - a w2^2 + w1 w2
/// scalar_expr = a (w1^2 w2^2 + w1^2 + w2^2) - w1^2 w2 - w1 w2^2 - w1 w2,
/// with S > 0 exactly when scalar_expr < 0.
struct BoundaryResiduals {
    std::array<double, 3> l;
    std::array<double, 3> rho;
    double scalar_expr;
};

BoundaryResiduals boundary_residuals(const SpaceParams& s, const PhasePoint& p);

enum class Region { SectionalPositive, RicciPositive, ScalarPositive };

/// Signed membership margin: min over the defining residuals, oriented so
/// the value is positive strictly inside the region.
double region_margin(const SpaceParams& s, Region reg, const PhasePoint& p);
bool region_contains(const SpaceParams& s, Region reg, const PhasePoint& p);

/// Curve identifiers in the phase plane.  C1/C2/C3 are the coordinate
/// degeneracies w1 = w2, w1 = 1, w2 = 1; S1..S3 the sectional boundaries
/// l_i = 0; R1..R3 the Ricci boundaries rho_i = 0; ScalarCurve the scalar
/// boundary; OmegaNull / LambdaNull the component nullclines
/// w1 - 2a w1 w2 - 2a w2 = 0 and w2 - 2a w1 w2 - 2a w1 = 0.
enum class CurveId {
    C1, C2, C3, S1, S2, S3, R1, R2, R3, ScalarCurve, OmegaNull, LambdaNull
};

const char* curve_name(CurveId id);

/// Residual whose zero set is the curve (same polynomials as above;
/// C1: w2 - w1, C2: w1 - 1, C3: w2 - 1).
double curve_residual(const SpaceParams& s, CurveId id, const PhasePoint& p);

enum class CurveBranch { Auto, Upper, Lower };

/// One sampled branch of a boundary curve over an abscissa range.  The
/// abscissa is w1 except for C2 (vertical line), where it is w2.  Most
/// boundaries are quadratic in w2 for fixed w1; Upper/Lower select the
/// larger/smaller positive root, and Auto keeps the branch continuous
/// starting from the first abscissa with a solution.  Abscissae where the
/// requested branch does not exist are reported, not interpolated.
struct CurveSample {
    CurveId id = CurveId::C1;
    std::vector<PhasePoint> points;
    std::vector<double> skipped;
};

CurveSample sample_boundary_curve(const SpaceParams& s, CurveId id, CurveBranch branch,
                                  double lo, double hi, int count);

}  // namespace wflow
