#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wflow/curvature.hpp"
#include "wflow/fields.hpp"
#include "wflow/space.hpp"

namespace wflow {

struct IntegrationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_max = 100.0;
    double initial_step = 0.0;   // 0: choose automatically
    double step_floor = 1e-14;
    long max_steps = 5'000'000;
    int event_bisections = 40;   // dense-output bisection depth per crossing

    // Termination guards.  state_cap stops once any component exceeds it,
    // state_floor once any component drops below it (0 disables); the
    // equilibrium test stops when |field| < equilibrium_tol * (1 + |y|)
    // after the trajectory has actually moved (so an exact equilibrium
    // start still runs out the clock).
    double state_cap = 1e6;
    double state_floor = 0.0;
    double equilibrium_tol = 1e-13;

    // Emit intermediate dense-output samples so consecutive states differ
    // by at most this much (Euclidean); 0 keeps accepted steps only.
    double max_sample_spacing = 0.0;
};

enum class StopReason {
    TimeLimit,
    TerminalEvent,
    EquilibriumProximity,
    StateCap,
    StateFloor,
    StepFloor,
    MaxSteps,
    NonFinite,
};

const char* stop_reason_name(StopReason r);

template <int N>
struct Sample {
    double t;
    std::array<double, N> y;
};

template <int N>
struct EventRecord {
    int event_id;
    double t;
    std::array<double, N> y;
    int direction;  // +1: residual crossed negative->positive; -1: opposite
};

template <int N>
struct EventSpec {
    std::function<double(const std::array<double, N>&)> fn;
    bool terminal = false;
    int direction = 0;  // 0: either; otherwise only record matching crossings
};

template <int N>
struct Trajectory {
    std::vector<Sample<N>> samples;
    std::vector<EventRecord<N>> events;
    StopReason stop = StopReason::TimeLimit;
    long accepted = 0;
    long rejected = 0;
    std::string diagnostic;

    double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }
    const std::array<double, N>& y_end() const { return samples.back().y; }
};

namespace detail {

template <int N>
double scaled_norm(const std::array<double, N>& v, const std::array<double, N>& sk) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
        const double q = v[i] / sk[i];
        s += q * q;
    }
    return std::sqrt(s / N);
}

template <int N>
double inf_norm(const std::array<double, N>& v) {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s = std::max(s, std::fabs(v[i]));
    return s;
}

template <int N>
bool finite(const std::array<double, N>& v) {
    for (int i = 0; i < N; ++i)
        if (!std::isfinite(v[i])) return false;
    return true;
}

/// Dense-output polynomial of one accepted step (quartic in the step
/// fraction theta, continuous in value and slope at both endpoints).
template <int N>
struct DenseStep {
    double t0 = 0.0, h = 0.0;
    std::array<double, N> c1{}, c2{}, c3{}, c4{}, c5{};

    std::array<double, N> eval(double theta) const {
        std::array<double, N> y;
        const double th1 = 1.0 - theta;
        for (int i = 0; i < N; ++i)
            y[i] = c1[i] +
                   theta * (c2[i] + th1 * (c3[i] + theta * (c4[i] + th1 * c5[i])));
        return y;
    }
};

}  // namespace detail

/// Explicit Runge-Kutta pair of orders 5(4) with the first-same-as-last
/// property, local extrapolation and embedded error control, plus a
/// 4th-order interpolant for event localization and resampling.
template <int N>
class Dopri5 {
  public:
    using State = std::array<double, N>;
    using Rhs = std::function<void(const State&, State&)>;

    Trajectory<N> run(const Rhs& rhs, const State& y0, const IntegrationOptions& opt,
                      const std::vector<EventSpec<N>>& events = {}) const {
        Trajectory<N> traj;
        if (!detail::finite<N>(y0))
            throw std::invalid_argument("integration start state is not finite");
        if (!(opt.t_max > 0.0))
            throw std::invalid_argument("t_max must be positive");

        State y = y0, f{};
        rhs(y, f);
        if (!detail::finite<N>(f))
            throw std::invalid_argument("field is not finite at the start state");

        double t = 0.0;
        traj.samples.push_back({t, y});

        std::vector<double> ev_val(events.size());
        std::vector<int> ev_sign(events.size());
        for (std::size_t e = 0; e < events.size(); ++e) {
            ev_val[e] = events[e].fn(y);
            ev_sign[e] = sign(ev_val[e]);
        }

        double h = opt.initial_step > 0.0 ? opt.initial_step
                                          : initial_step(rhs, y, f, opt);
        bool moved = false;
        bool last_rejected = false;

        while (t < opt.t_max) {
            if (traj.accepted + traj.rejected >= opt.max_steps) {
                traj.stop = StopReason::MaxSteps;
                traj.diagnostic = "step budget exhausted";
                return traj;
            }
            h = std::min(h, opt.t_max - t);
            if (h < opt.step_floor) {
                traj.stop = StopReason::StepFloor;
                traj.diagnostic = "step size underflow at t=" + std::to_string(t);
                return traj;
            }

            State ynew{}, fnew{}, err{};
            detail::DenseStep<N> dense;
            if (!step(rhs, t, y, f, h, ynew, fnew, err, dense)) {
                // Non-finite inside the step: retry smaller.
                h *= 0.25;
                ++traj.rejected;
                last_rejected = true;
                continue;
            }

            std::array<double, N> sk;
            for (int i = 0; i < N; ++i)
                sk[i] = opt.abs_tol +
                        opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            const double errn = detail::scaled_norm<N>(err, sk);
            if (errn > 1.0) {
                ++traj.rejected;
                last_rejected = true;
                h *= std::max(0.2, 0.9 * std::pow(errn, -0.2));
                continue;
            }

            ++traj.accepted;
            const double t1 = t + h;

            // --- events on [t, t1] via the interpolant ---
            bool terminated = false;
            double t_cut = t1;
            State y_cut = ynew;
            std::vector<EventRecord<N>> step_events;
            for (std::size_t e = 0; e < events.size(); ++e) {
                const double v1 = events[e].fn(ynew);
                const int s1 = sign(v1);
                const int s0 = ev_sign[e];
                if (s0 != 0 && s1 != s0) {
                    EventRecord<N> rec =
                        locate(events[e], static_cast<int>(e), dense, ev_val[e], v1,
                               opt.event_bisections);
                    const bool wanted =
                        events[e].direction == 0 || events[e].direction == rec.direction;
                    if (wanted) step_events.push_back(rec);
                }
                ev_val[e] = v1;
                ev_sign[e] = (s1 != 0) ? s1 : s0;
            }
            std::sort(step_events.begin(), step_events.end(),
                      [](const auto& u, const auto& v) { return u.t < v.t; });
            for (const auto& rec : step_events) {
                if (terminated) break;
                traj.events.push_back(rec);
                if (events[rec.event_id].terminal) {
                    terminated = true;
                    t_cut = rec.t;
                    y_cut = rec.y;
                }
            }

            emit(traj, dense, y, t_cut, y_cut, opt.max_sample_spacing);

            if (terminated) {
                traj.stop = StopReason::TerminalEvent;
                return traj;
            }

            t = t1;
            y = ynew;
            f = fnew;

            // --- termination guards at the accepted state ---
            if (!detail::finite<N>(y)) {
                traj.stop = StopReason::NonFinite;
                traj.diagnostic = "state became non-finite at t=" + std::to_string(t);
                return traj;
            }
            if (opt.state_cap > 0.0 && detail::inf_norm<N>(y) > opt.state_cap) {
                traj.stop = StopReason::StateCap;
                return traj;
            }
            if (opt.state_floor > 0.0) {
                double lo = y[0];
                for (int i = 1; i < N; ++i) lo = std::min(lo, y[i]);
                if (lo < opt.state_floor) {
                    traj.stop = StopReason::StateFloor;
                    return traj;
                }
            }
            if (opt.equilibrium_tol > 0.0) {
                const double fn_ = norm2(f), yn_ = norm2(y);
                if (fn_ > 10.0 * opt.equilibrium_tol * (1.0 + yn_)) moved = true;
                if (moved && fn_ < opt.equilibrium_tol * (1.0 + yn_)) {
                    traj.stop = StopReason::EquilibriumProximity;
                    return traj;
                }
            }

            const double grow = last_rejected ? 1.0 : 5.0;
            last_rejected = false;
            h *= std::min(grow, std::max(0.2, 0.9 * std::pow(std::max(errn, 1e-16), -0.2)));
        }
        traj.stop = StopReason::TimeLimit;
        return traj;
    }

  private:
    static int sign(double v) { return (v > 0.0) - (v < 0.0); }

    static double norm2(const std::array<double, N>& v) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) s += v[i] * v[i];
        return std::sqrt(s);
    }

    /// One trial step; returns false if any stage is non-finite.
    bool step(const Rhs& rhs, double t, const State& y, const State& f1, double h,
              State& ynew, State& fnew, State& err, detail::DenseStep<N>& dense) const {
        // Dormand-Prince coefficients.
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                                a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        static constexpr double d1 = -12715105075.0 / 11282082432.0,
                                d3 = 87487479700.0 / 32700410799.0,
                                d4 = -10690763975.0 / 1880347072.0,
                                d5 = 701980252875.0 / 199316789632.0,
                                d6 = -1453857185.0 / 822651844.0,
                                d7 = 69997945.0 / 29380423.0;
        State k2, k3, k4, k5, k6, yt;
        for (int i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * f1[i];
        rhs(yt, k2);
        for (int i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * f1[i] + a32 * k2[i]);
        rhs(yt, k3);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a41 * f1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(yt, k4);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] + h * (a51 * f1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(yt, k5);
        for (int i = 0; i < N; ++i)
            yt[i] = y[i] +
                    h * (a61 * f1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                         a65 * k5[i]);
        rhs(yt, k6);
        for (int i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * f1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        if (!detail::finite<N>(ynew)) return false;
        rhs(ynew, fnew);  // FSAL stage
        if (!detail::finite<N>(fnew)) return false;
        for (int i = 0; i < N; ++i)
            err[i] = h * (e1 * f1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * fnew[i]);

        dense.t0 = t;
        dense.h = h;
        for (int i = 0; i < N; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * f1[i] - ydiff;
            dense.c1[i] = y[i];
            dense.c2[i] = ydiff;
            dense.c3[i] = bspl;
            dense.c4[i] = ydiff - h * fnew[i] - bspl;
            dense.c5[i] = h * (d1 * f1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                               d6 * k6[i] + d7 * fnew[i]);
        }
        return true;
    }

    double initial_step(const Rhs& rhs, const State& y, const State& f,
                        const IntegrationOptions& opt) const {
        std::array<double, N> sk;
        for (int i = 0; i < N; ++i)
            sk[i] = opt.abs_tol + opt.rel_tol * std::fabs(y[i]);
        const double d0 = detail::scaled_norm<N>(y, sk);
        const double d1 = detail::scaled_norm<N>(f, sk);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        State y1, f1;
        for (int i = 0; i < N; ++i) y1[i] = y[i] + h0 * f[i];
        rhs(y1, f1);
        double d2 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double q = (f1[i] - f[i]) / sk[i];
            d2 += q * q;
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                        : std::pow(0.01 / dm, 0.2);
        return std::min({100.0 * h0, h1, opt.t_max});
    }

    EventRecord<N> locate(const EventSpec<N>& ev, int id,
                          const detail::DenseStep<N>& dense, double v0, double v1,
                          int bisections) const {
        double ta = 0.0, tb = 1.0, va = v0;
        for (int it = 0; it < bisections; ++it) {
            const double tm = 0.5 * (ta + tb);
            const double vm = ev.fn(dense.eval(tm));
            if (vm == 0.0) { ta = tb = tm; break; }
            if ((va < 0.0) == (vm < 0.0)) {
                ta = tm;
                va = vm;
            } else {
                tb = tm;
            }
        }
        const double th = 0.5 * (ta + tb);
        EventRecord<N> rec;
        rec.event_id = id;
        rec.t = dense.t0 + th * dense.h;
        rec.y = dense.eval(th);
        rec.direction = (v1 > v0) ? 1 : -1;
        return rec;
    }

    void emit(Trajectory<N>& traj, const detail::DenseStep<N>& dense, const State& y0,
              double t_end, const State& y_end, double spacing) const {
        if (spacing > 0.0) {
            std::array<double, N> d;
            for (int i = 0; i < N; ++i) d[i] = y_end[i] - y0[i];
            const double len = norm2(d);
            const int parts = std::max(1, static_cast<int>(std::ceil(len / spacing)));
            const double th_end = (t_end - dense.t0) / dense.h;
            for (int j = 1; j < parts; ++j) {
                const double th = th_end * j / parts;
                const double tj = dense.t0 + th * dense.h;
                if (tj > traj.samples.back().t)
                    traj.samples.push_back({tj, dense.eval(th)});
            }
        }
        if (t_end > traj.samples.back().t)
            traj.samples.push_back({t_end, y_end});
        else
            traj.samples.back() = {t_end, y_end};
    }
};

extern template class Dopri5<2>;
extern template class Dopri5<3>;

/// Convenience runners for the three flow systems.
Trajectory<2> integrate_w(const SpaceParams& s, const PhasePoint& start,
                          const IntegrationOptions& opt,
                          const std::vector<EventSpec<2>>& events = {});
Trajectory<3> integrate_x(const SpaceParams& s, const Metric3& start,
                          const IntegrationOptions& opt,
                          const std::vector<EventSpec<3>>& events = {});
Trajectory<2> integrate_x_reduced(const SpaceParams& s, double x1, double x2,
                                  const IntegrationOptions& opt,
                                  const std::vector<EventSpec<2>>& events = {});

/// First crossing of a region boundary along the w-flow.
struct ExitReport {
    double t = 0.0;
    PhasePoint point;
    CurveId curve = CurveId::S3;
    double residual = 0.0;  // boundary residual at the recorded point
};

struct ExitOutcome {
    std::optional<ExitReport> exit;  // empty: still inside at termination
    Trajectory<2> trajectory;
};

/// Integrate from a point strictly inside the region until its boundary is
/// crossed (terminal event) or the options terminate the run.  Throws if
/// the start is not strictly inside.
ExitOutcome integrate_until_exit(const SpaceParams& s, const PhasePoint& start,
                                 Region region, const IntegrationOptions& opt);

struct NoReturnReport {
    bool exited = false;
    bool returned = false;
    double exit_time = 0.0;
    double return_time = 0.0;
    Trajectory<2> trajectory;
};

/// Follow the flow across the first region exit and to the horizon,
/// confirming the region-membership margin never becomes positive again.
NoReturnReport no_return_check(const SpaceParams& s, const PhasePoint& start,
                               Region region, const IntegrationOptions& opt);

}  // namespace wflow
