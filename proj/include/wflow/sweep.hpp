#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wflow/curvature.hpp"
#include "wflow/integrate.hpp"
#include "wflow/space.hpp"

namespace wflow {

/// Grid experiment: launch the phase flow from every admissible node of a
/// rectangular lattice and watch its relation to a curvature region.
struct SweepSpec {
    SpaceParams space;
    Region region = Region::SectionalPositive;
    double w1_lo = 1.0, w1_hi = 1.35;
    double w2_lo = 1.0, w2_hi = 3.0;
    int n1 = 10, n2 = 10;

    /// Nodes closer than this to any of the lines w1 = 1, w2 = 1, w1 = w2
    /// (Euclidean distance) are dropped, as are nodes outside the sector
    /// w2 > w1 > 1 or with region margin below the same value.
    double margin = 1e-2;

    /// When false, nodes need not lie inside the region (the record then
    /// tracks whether the region is ever entered).
    bool require_inside = true;

    /// Additionally require w2 < w1 / (w1 - 1) at the start.
    bool wedge_only = false;

    IntegrationOptions options;  // options.t_max is the horizon
    int jobs = 0;                // worker threads; 0 = hardware concurrency
};

struct StartRecord {
    PhasePoint start;
    std::optional<double> exit_time;
    std::optional<PhasePoint> exit_point;
    std::optional<CurveId> exit_curve;
    bool returned = false;        // membership became positive again after exit
    double return_time = 0.0;
    bool entered = false;         // region margin turned positive at some time
    bool inside_at_end = false;   // margin positive at the final sample
    bool inside_throughout = false;  // margin positive at every sample
    double min_margin = 0.0;      // over all samples
    StopReason stop = StopReason::TimeLimit;
    std::string error;            // nonempty when this start failed
};

struct SweepResult {
    SweepSpec spec;
    std::vector<StartRecord> records;  // grid order: w1 major, w2 minor
    int n_started = 0;
    int n_exited = 0;
    int n_returned = 0;
    int n_errors = 0;
    double max_exit_time = 0.0;
};

/// Admissible lattice nodes for the spec, in deterministic grid order.
std::vector<PhasePoint> sweep_grid(const SweepSpec& spec);

/// Run one start: exit detection plus membership tracking to the horizon.
StartRecord run_start(const SweepSpec& spec, const PhasePoint& start);

/// Full sweep over sweep_grid(spec); thread-parallel, record order is
/// independent of the number of workers.
SweepResult run_sweep(const SweepSpec& spec);

/// Sensible sampling window for a region (the sector part of D sits inside
/// [1, 1.35] x [1, 3]; R extends to the corner P3 at (1/a, 1/a)).
void default_window(Region reg, const SpaceParams& s, double& w1_lo, double& w1_hi,
                    double& w2_lo, double& w2_hi);

}  // namespace wflow
