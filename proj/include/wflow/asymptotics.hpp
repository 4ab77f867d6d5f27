#pragma once

#include <vector>

#include "wflow/integrate.hpp"
#include "wflow/space.hpp"

namespace wflow {

/// Blow-up exponent of trajectories entering the corner w1 -> 1+, w2 -> inf:
///   w2 ~ C (w1 - 1)^(-alpha) with alpha = (1 - 2a) / (4a).
double predicted_exponent(const SpaceParams& s);

struct TailFit {
    double alpha = 0.0;       // fitted exponent (positive for blow-up)
    double log_c = 0.0;       // fitted intercept, log w2 = log_c - alpha log(w1-1)
    double max_residual = 0.0;  // worst |log w2 - fit| over the tail
    int n_points = 0;
    double w1_min = 0.0, w1_max = 0.0;  // abscissa range actually used
};

/// Least-squares fit of log w2 against log(w1 - 1) over the tail samples
/// with 0 < w1 - 1 < threshold.  Throws if fewer than 10 tail samples.
TailFit fit_tail_exponent(const Trajectory<2>& traj, double threshold);

struct EnvelopeCheck {
    bool lower_ok = false;  // w2 (w1-1)^((1-eps) alpha0) stays bounded below
    bool upper_ok = false;  // w2 (w1-1)^((1+eps) alpha0) stays bounded above
    double c_lower = 0.0;   // inf of the first compensated quantity
    double c_upper = 0.0;   // sup of the second
    double slope_lower = 0.0;  // fitted log-log slopes of the two quantities
    double slope_upper = 0.0;
};

/// Two-sided power-law envelope test on the tail: with alpha0 the
/// predicted exponent, the compensated quantity w2 (w1-1)^((1-eps) alpha0)
/// must not decay to zero and w2 (w1-1)^((1+eps) alpha0) must not grow, as
/// w1 -> 1+.  Decided by the sign of the compensated log-log slope with a
/// small tolerance; an exponent outside the band trips exactly one side.
EnvelopeCheck envelope_check(const SpaceParams& s, const Trajectory<2>& traj,
                             double epsilon, double threshold);

enum class CurveOrdering { Under, Over, Mixed };

const char* curve_ordering_name(CurveOrdering o);

/// Position of the trajectory tail against the reference curve
///   w2 = coeff * (w1 - 1)^(-alpha):
/// Under if w2 stays below it on the whole tail, Over if above.  Decided
/// over the samples with 0 < w1 - 1 < threshold; a sign change reports
/// Mixed.  Throws if fewer than 10 tail samples.
CurveOrdering ordering_vs_curve(const Trajectory<2>& traj, double alpha, double coeff,
                                double threshold);

}  // namespace wflow
