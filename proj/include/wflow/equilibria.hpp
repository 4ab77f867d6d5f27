#pragma once

#include <array>
#include <optional>
#include <vector>

#include "wflow/fields.hpp"
#include "wflow/space.hpp"

namespace wflow {

/// q = 2a / (1 - 2a), the off-diagonal equilibrium coordinate.
double q_ratio(const SpaceParams& s);

/// The four singular points of the phase-plane flow:
///   E0 = (1,1), E1 = (q,1), E2 = (1,q), E3 = (1/q, 1/q).
/// Throws for the degenerate value a = 1/4, where all four coincide.
std::array<PhasePoint, 4> singular_points(const SpaceParams& s);

/// Distinguished boundary points P1 = (a,1), P2 = (1,a), P3 = (1/a, 1/a).
std::array<PhasePoint, 3> special_points(const SpaceParams& s);

enum class EquilibriumClass { UnstableNode, StableNode, Saddle, Focus, Degenerate };

const char* equilibrium_class_name(EquilibriumClass c);

struct EquilibriumReport {
    PhasePoint location;
    EigenPair eig;
    EquilibriumClass cls;
    Metric3 einstein;       // unit-volume representative, Einstein metric
    double field_norm;      // |field_w| at the location
    double einstein_defect; // max_i |r_i - mean r| at the representative
};

/// Classification by the exact Jacobian; rejects points where the field is
/// not numerically zero (|field| > 1e-10).
EquilibriumReport classify_equilibrium(const SpaceParams& s, const PhasePoint& p);

/// Reports for all four singular points.
std::array<EquilibriumReport, 4> equilibrium_reports(const SpaceParams& s);

/// Rational parametrization of the upper branch of the Ricci boundary
/// rho1 = 0 through the sector w2 > w1 > 1:
///   w2(t) = (t + sqrt(4 a^2 (1 - t^2) + t^2)) / (2 a t),  w1 = t w2,
/// with t = w1/w2 running over (0, 1); w1 increases from 1 to 1/a.
PhasePoint r1_parametrization(const SpaceParams& s, double t);

/// Scalar factor of the inner product (V, grad rho1) along the branch:
/// the product equals (w2^2 / (2 a^2)) * W(t); the tangency point of flow
/// and boundary is the unique root of W on (0, 1).
double r1_tangency_function(const SpaceParams& s, double t);

struct QPointReport {
    double t_star = 0.0;     // root of the tangency function
    PhasePoint point;        // r1_parametrization(t_star)
    double curve_residual = 0.0;  // |rho1| at the point
    double tangency_residual = 0.0;  // |W(t_star)|
};

/// Tangency point of the flow with the Ricci boundary r1 in the sector.
/// Scans (0,1) on a fine grid, brackets sign changes, bisects to 1e-12 in
/// t and polishes.  Empty when no root exists.
std::optional<QPointReport> q_point(const SpaceParams& s);

/// All tangency roots on (0,1), for parameter studies.
std::vector<QPointReport> q_point_all(const SpaceParams& s);

/// Inner product of the flow with the gradient of the sectional boundary
/// polynomial l3, together with its factored form
///   (V, grad l3) = 2 (w1 - 1)(w2 - 1) * W,
///   W = 12 a w1^2 w2^2 - 3 (w1 + w2) w1 w2 (1 - 2a) - (w1 - w2)^2 (1 + 2a).
struct TransversalityL3 {
    double direct = 0.0;    // (V, grad l3) evaluated termwise
    double factored = 0.0;  // the closed-form product
    double w_factor = 0.0;  // W alone
};

TransversalityL3 transversality_l3(const SpaceParams& s, const PhasePoint& p);

/// Inner product (V, grad rho1) along the parametrized r1 branch.
struct TransversalityR1 {
    double t = 0.0;
    PhasePoint point;
    double inner = 0.0;     // (V, grad rho1) at the point
    double w_value = 0.0;   // W(t): inner = (w2^2 / 2a^2) W(t)
};

TransversalityR1 transversality_r1(const SpaceParams& s, double t);

}  // namespace wflow
