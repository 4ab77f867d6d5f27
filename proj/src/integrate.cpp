#include "wflow/integrate.hpp"

namespace wflow {

template class Dopri5<2>;
template class Dopri5<3>;

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::TimeLimit: return "time-limit";
        case StopReason::TerminalEvent: return "terminal-event";
        case StopReason::EquilibriumProximity: return "equilibrium-proximity";
        case StopReason::StateCap: return "state-cap";
        case StopReason::StateFloor: return "state-floor";
        case StopReason::StepFloor: return "step-floor";
        case StopReason::MaxSteps: return "max-steps";
        case StopReason::NonFinite: return "non-finite";
    }
    return "?";
}

Trajectory<2> integrate_w(const SpaceParams& s, const PhasePoint& start,
                          const IntegrationOptions& opt,
                          const std::vector<EventSpec<2>>& events) {
    validate(start);
    Dopri5<2> solver;
    auto rhs = [&s](const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const auto f = field_w(s, PhasePoint{y[0], y[1]});
        dy[0] = f[0];
        dy[1] = f[1];
    };
    return solver.run(rhs, {start.w1, start.w2}, opt, events);
}

Trajectory<3> integrate_x(const SpaceParams& s, const Metric3& start,
                          const IntegrationOptions& opt,
                          const std::vector<EventSpec<3>>& events) {
    validate(start);
    Dopri5<3> solver;
    auto rhs = [&s](const std::array<double, 3>& y, std::array<double, 3>& dy) {
        const auto f = field_x(s, Metric3{y[0], y[1], y[2]});
        dy[0] = f[0];
        dy[1] = f[1];
        dy[2] = f[2];
    };
    return solver.run(rhs, {start.x1, start.x2, start.x3}, opt, events);
}

Trajectory<2> integrate_x_reduced(const SpaceParams& s, double x1, double x2,
                                  const IntegrationOptions& opt,
                                  const std::vector<EventSpec<2>>& events) {
    Dopri5<2> solver;
    auto rhs = [&s](const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const auto f = field_x_reduced(s, y[0], y[1]);
        dy[0] = f[0];
        dy[1] = f[1];
    };
    return solver.run(rhs, {x1, x2}, opt, events);
}

namespace {

std::vector<CurveId> region_curves(Region reg) {
    switch (reg) {
        case Region::SectionalPositive:
            return {CurveId::S1, CurveId::S2, CurveId::S3};
        case Region::RicciPositive:
            return {CurveId::R1, CurveId::R2, CurveId::R3};
        case Region::ScalarPositive:
            return {CurveId::ScalarCurve};
    }
    throw std::logic_error("unknown region");
}

/// Residual oriented positive-inside for each bounding curve.
double oriented_residual(const SpaceParams& s, Region reg, CurveId id,
                         const PhasePoint& p) {
    const double v = curve_residual(s, id, p);
    return (reg == Region::ScalarPositive) ? -v : v;
}

}  // namespace

ExitOutcome integrate_until_exit(const SpaceParams& s, const PhasePoint& start,
                                 Region region, const IntegrationOptions& opt) {
    if (!(region_margin(s, region, start) > 0.0))
        throw std::invalid_argument("exit search requires a start strictly inside the region");
    const auto curves = region_curves(region);
    std::vector<EventSpec<2>> events;
    events.reserve(curves.size());
    for (CurveId id : curves) {
        EventSpec<2> ev;
        ev.fn = [&s, region, id](const std::array<double, 2>& y) {
            return oriented_residual(s, region, id, PhasePoint{y[0], y[1]});
        };
        ev.terminal = true;
        ev.direction = -1;  // inside (positive) to outside
        events.push_back(std::move(ev));
    }
    ExitOutcome out;
    out.trajectory = integrate_w(s, start, opt, events);
    if (out.trajectory.stop == StopReason::TerminalEvent) {
        const auto& rec = out.trajectory.events.back();
        ExitReport rep;
        rep.t = rec.t;
        rep.point = PhasePoint{rec.y[0], rec.y[1]};
        rep.curve = curves[rec.event_id];
        rep.residual = curve_residual(s, rep.curve, rep.point);
        out.exit = rep;
    }
    return out;
}

NoReturnReport no_return_check(const SpaceParams& s, const PhasePoint& start,
                               Region region, const IntegrationOptions& opt) {
    if (!(region_margin(s, region, start) > 0.0))
        throw std::invalid_argument("no-return check requires a start strictly inside the region");
    EventSpec<2> membership;
    membership.fn = [&s, region](const std::array<double, 2>& y) {
        return region_margin(s, region, PhasePoint{y[0], y[1]});
    };
    membership.terminal = false;
    membership.direction = 0;
    NoReturnReport rep;
    rep.trajectory = integrate_w(s, start, opt, {membership});
    for (const auto& ev : rep.trajectory.events) {
        if (!rep.exited) {
            if (ev.direction < 0) {
                rep.exited = true;
                rep.exit_time = ev.t;
            }
        } else if (!rep.returned && ev.direction > 0) {
            rep.returned = true;
            rep.return_time = ev.t;
        }
    }
    // Samples double-check the event bookkeeping: membership must stay
    // non-positive after the exit crossing.
    if (rep.exited && !rep.returned) {
        for (const auto& smp : rep.trajectory.samples) {
            if (smp.t <= rep.exit_time) continue;
            if (membership.fn(smp.y) > 1e-12) {
                rep.returned = true;
                rep.return_time = smp.t;
                break;
            }
        }
    }
    return rep;
}

}  // namespace wflow
