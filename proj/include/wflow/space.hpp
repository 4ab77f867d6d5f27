#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wflow {

/// Parameters of a three-summand homogeneous space: the invariant-metric
/// family is diagonal with three positive components, each isotropy summand
/// has dimension d, and the structure constant a lies in (0, 1/2).
struct SpaceParams {
    double a = 0.125;
    int d = 4;

    int n() const { return 3 * d; }

    /// a = 1/4 collapses the off-diagonal singular points into (1,1).
    bool degenerate() const;

    /// True for the three classical presets (1/6,2), (1/8,4), (1/9,8),
    /// where the sectional-curvature machinery is available.
    bool classical_preset() const;
};

/// Validating factory; throws std::invalid_argument outside a in (0,1/2) or d < 1.
SpaceParams make_space(double a, int d);

/// Diagonal invariant metric (x1, x2, x3), all components positive.
struct Metric3 {
    double x1 = 1.0, x2 = 1.0, x3 = 1.0;
};

/// Scale-invariant coordinates w1 = x3/x1, w2 = x3/x2.
struct PhasePoint {
    double w1 = 1.0, w2 = 1.0;
};

/// Throws std::invalid_argument unless all components are positive and finite.
void validate(const Metric3& m);
void validate(const PhasePoint& p);

PhasePoint to_scale_invariant(const Metric3& m);

/// Representative metric (1/w1, 1/w2, 1) of the scale orbit.
Metric3 from_scale_invariant(const PhasePoint& p);

/// Rescale to unit volume x1*x2*x3 = 1.
Metric3 normalize_volume(const Metric3& m);

/// One-parameter submersion family (x^{-1/3}, x^{-1/3}, x^{2/3}), unit volume.
Metric3 submersion_metric(double x);

/// Permutation of the three isotropy summands acting on metrics by
/// component shuffle and on phase points through the x-representation.
struct ModulePermutation {
    std::array<int, 3> idx{0, 1, 2};  // result.x_i = x_{idx[i]}

    Metric3 apply(const Metric3& m) const;
    PhasePoint apply(const PhasePoint& p) const;
    ModulePermutation inverse() const;
    bool identity() const { return idx[0] == 0 && idx[1] == 1 && idx[2] == 2; }
};

/// All six permutations; element 0 is the identity.
const std::array<ModulePermutation, 6>& symmetry_group();

/// Full orbit of p (duplicates within tol removed); size divides 6.
std::vector<PhasePoint> symmetry_orbit(const PhasePoint& p, double tol = 1e-12);

/// Closed sector w2 >= w1 >= 1 (interior: strict).
bool in_omega_closure(const PhasePoint& p, double tol = 0.0);
bool in_omega_interior(const PhasePoint& p, double tol = 0.0);

/// Map p into the closure of { w2 >= w1 >= 1 } by a symmetry; returns the
/// canonical point and the permutation that realizes it.  Ties on the
/// sector walls resolve to the lexicographically smallest (w1, w2).
std::pair<PhasePoint, ModulePermutation> canonicalize_to_omega(const PhasePoint& p);

}  // namespace wflow
