#include "wflow/sweep.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace wflow {

std::vector<PhasePoint> sweep_grid(const SweepSpec& spec) {
    if (spec.n1 < 1 || spec.n2 < 1) throw std::invalid_argument("empty sweep lattice");
    if (!(spec.w1_hi > spec.w1_lo) || !(spec.w2_hi > spec.w2_lo))
        throw std::invalid_argument("degenerate sweep window");
    const double m = spec.margin;
    std::vector<PhasePoint> nodes;
    for (int i = 0; i < spec.n1; ++i) {
        const double w1 =
            spec.n1 == 1 ? spec.w1_lo
                         : spec.w1_lo + (spec.w1_hi - spec.w1_lo) * i / (spec.n1 - 1);
        for (int j = 0; j < spec.n2; ++j) {
            const double w2 =
                spec.n2 == 1 ? spec.w2_lo
                             : spec.w2_lo + (spec.w2_hi - spec.w2_lo) * j / (spec.n2 - 1);
            const PhasePoint p{w1, w2};
            if (!(w1 - 1.0 >= m)) continue;                    // distance to c2
            if (!(w2 - 1.0 >= m)) continue;                    // distance to c3
            if (!((w2 - w1) / std::sqrt(2.0) >= m)) continue;  // distance to c1
            if (spec.wedge_only && !(w2 * (w1 - 1.0) < w1)) continue;
            const double margin = region_margin(spec.space, spec.region, p);
            if (spec.require_inside && !(margin >= m)) continue;
            nodes.push_back(p);
        }
    }
    return nodes;
}

StartRecord run_start(const SweepSpec& spec, const PhasePoint& start) {
    StartRecord rec;
    rec.start = start;
    try {
        const SpaceParams& s = spec.space;
        const Region region = spec.region;
        EventSpec<2> membership;
        membership.fn = [&s, region](const std::array<double, 2>& y) {
            return region_margin(s, region, PhasePoint{y[0], y[1]});
        };
        auto traj = integrate_w(s, start, spec.options, {membership});
        rec.stop = traj.stop;

        bool inside = region_contains(s, region, start);
        rec.entered = inside;
        bool have_min = false;
        rec.inside_throughout = true;
        for (const auto& smp : traj.samples) {
            const double margin = membership.fn(smp.y);
            if (!have_min || margin < rec.min_margin) {
                rec.min_margin = margin;
                have_min = true;
            }
            rec.inside_throughout = rec.inside_throughout && margin > 0.0;
            rec.inside_at_end = margin > 0.0;
        }
        for (const auto& ev : traj.events) {
            if (ev.direction < 0) {
                if (!rec.exit_time) {
                    rec.exit_time = ev.t;
                    const PhasePoint p{ev.y[0], ev.y[1]};
                    rec.exit_point = p;
                    // Identify which bounding residual vanished.
                    const auto b = boundary_residuals(s, p);
                    if (region == Region::ScalarPositive) {
                        rec.exit_curve = CurveId::ScalarCurve;
                    } else if (region == Region::SectionalPositive) {
                        int best = 0;
                        for (int k = 1; k < 3; ++k)
                            if (std::fabs(b.l[k]) < std::fabs(b.l[best])) best = k;
                        rec.exit_curve = std::array<CurveId, 3>{
                            CurveId::S1, CurveId::S2, CurveId::S3}[best];
                    } else {
                        int best = 0;
                        for (int k = 1; k < 3; ++k)
                            if (std::fabs(b.rho[k]) < std::fabs(b.rho[best])) best = k;
                        rec.exit_curve = std::array<CurveId, 3>{
                            CurveId::R1, CurveId::R2, CurveId::R3}[best];
                    }
                }
            } else if (ev.direction > 0) {
                rec.entered = true;
                if (rec.exit_time && !rec.returned) {
                    rec.returned = true;
                    rec.return_time = ev.t;
                }
            }
        }
    } catch (const std::exception& ex) {
        rec.error = ex.what();
    }
    return rec;
}

SweepResult run_sweep(const SweepSpec& spec) {
    SweepResult result;
    result.spec = spec;
    const auto nodes = sweep_grid(spec);
    result.records.resize(nodes.size());
    result.n_started = static_cast<int>(nodes.size());

    unsigned jobs = spec.jobs > 0 ? static_cast<unsigned>(spec.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, static_cast<unsigned>(std::max<std::size_t>(nodes.size(), 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= nodes.size()) return;
            result.records[i] = run_start(spec, nodes[i]);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& rec : result.records) {
        if (!rec.error.empty()) ++result.n_errors;
        if (rec.exit_time) {
            ++result.n_exited;
            result.max_exit_time = std::max(result.max_exit_time, *rec.exit_time);
        }
        if (rec.returned) ++result.n_returned;
    }
    return result;
}

void default_window(Region reg, const SpaceParams& s, double& w1_lo, double& w1_hi,
                    double& w2_lo, double& w2_hi) {
    switch (reg) {
        case Region::SectionalPositive:
            w1_lo = 1.0; w1_hi = 1.35; w2_lo = 1.0; w2_hi = 3.0;
            return;
        case Region::RicciPositive:
            w1_lo = 1.0; w1_hi = 1.0 / s.a; w2_lo = 1.0; w2_hi = 1.5 / s.a;
            return;
        case Region::ScalarPositive:
            w1_lo = 1.0; w1_hi = 10.0; w2_lo = 1.0; w2_hi = 20.0;
            return;
    }
    throw std::logic_error("unknown region");
}

}  // namespace wflow
