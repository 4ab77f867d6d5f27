#include "wflow/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace wflow {

double predicted_exponent(const SpaceParams& s) {
    return (1.0 - 2.0 * s.a) / (4.0 * s.a);
}

namespace {

struct LogTail {
    std::vector<double> u;  // log(w1 - 1)
    std::vector<double> v;  // log w2
};

LogTail collect_tail(const Trajectory<2>& traj, double threshold) {
    LogTail tail;
    for (const auto& smp : traj.samples) {
        const double w1 = smp.y[0], w2 = smp.y[1];
        if (w1 > 1.0 && w1 - 1.0 < threshold && w2 > 0.0) {
            tail.u.push_back(std::log(w1 - 1.0));
            tail.v.push_back(std::log(w2));
        }
    }
    return tail;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, max_residual = 0.0;
};

LineFit least_squares(const std::vector<double>& u, const std::vector<double>& v) {
    const std::size_t n = u.size();
    double su = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        su += u[i];
        sv += v[i];
    }
    const double mu = su / n, mv = sv / n;
    double suu = 0.0, suv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
    }
    if (suu == 0.0) throw std::invalid_argument("tail abscissae are all identical");
    LineFit fit;
    fit.slope = suv / suu;
    fit.intercept = mv - fit.slope * mu;
    for (std::size_t i = 0; i < n; ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::fabs(v[i] - fit.slope * u[i] - fit.intercept));
    return fit;
}

}  // namespace

TailFit fit_tail_exponent(const Trajectory<2>& traj, double threshold) {
    const LogTail tail = collect_tail(traj, threshold);
    if (tail.u.size() < 10)
        throw std::invalid_argument("tail fit needs at least 10 samples under the threshold");
    const LineFit fit = least_squares(tail.u, tail.v);
    TailFit out;
    out.alpha = -fit.slope;
    out.log_c = fit.intercept;
    out.max_residual = fit.max_residual;
    out.n_points = static_cast<int>(tail.u.size());
    double lo = tail.u.front(), hi = tail.u.front();
    for (double u : tail.u) {
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    out.w1_min = 1.0 + std::exp(lo);
    out.w1_max = 1.0 + std::exp(hi);
    return out;
}

EnvelopeCheck envelope_check(const SpaceParams& s, const Trajectory<2>& traj,
                             double epsilon, double threshold) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("envelope width must lie in (0, 1)");
    const LogTail tail = collect_tail(traj, threshold);
    if (tail.u.size() < 10)
        throw std::invalid_argument("envelope check needs at least 10 tail samples");
    const double alpha0 = predicted_exponent(s);
    const double beta_lo = (1.0 - epsilon) * alpha0;
    const double beta_hi = (1.0 + epsilon) * alpha0;

    std::vector<double> lo_q(tail.u.size()), hi_q(tail.u.size());
    for (std::size_t i = 0; i < tail.u.size(); ++i) {
        lo_q[i] = tail.v[i] + beta_lo * tail.u[i];  // log of w2 (w1-1)^beta_lo
        hi_q[i] = tail.v[i] + beta_hi * tail.u[i];
    }
    const LineFit f_lo = least_squares(tail.u, lo_q);
    const LineFit f_hi = least_squares(tail.u, hi_q);

    EnvelopeCheck out;
    out.slope_lower = f_lo.slope;
    out.slope_upper = f_hi.slope;
    // As w1 -> 1+ the abscissa log(w1-1) -> -inf, so "bounded below" means
    // the compensated quantity must not vanish there: slope <= 0 (+slack);
    // "bounded above" means it must not blow up there: slope >= 0 (-slack).
    const double slack = 0.01;
    out.lower_ok = f_lo.slope <= slack;
    out.upper_ok = f_hi.slope >= -slack;
    double cl = lo_q[0], cu = hi_q[0];
    for (std::size_t i = 0; i < tail.u.size(); ++i) {
        cl = std::min(cl, lo_q[i]);
        cu = std::max(cu, hi_q[i]);
    }
    out.c_lower = std::exp(cl);
    out.c_upper = std::exp(cu);
    return out;
}

const char* curve_ordering_name(CurveOrdering o) {
    switch (o) {
        case CurveOrdering::Under: return "under";
        case CurveOrdering::Over: return "over";
        case CurveOrdering::Mixed: return "mixed";
    }
    return "?";
}

CurveOrdering ordering_vs_curve(const Trajectory<2>& traj, double alpha, double coeff,
                                double threshold) {
    if (!(coeff > 0.0)) throw std::invalid_argument("reference coefficient must be positive");
    int above = 0, below = 0, total = 0;
    for (const auto& smp : traj.samples) {
        const double w1 = smp.y[0], w2 = smp.y[1];
        if (!(w1 > 1.0) || !(w1 - 1.0 < threshold) || !(w2 > 0.0)) continue;
        ++total;
        const double ref = std::log(coeff) - alpha * std::log(w1 - 1.0);
        const double diff = std::log(w2) - ref;
        if (diff > 0.0)
            ++above;
        else if (diff < 0.0)
            ++below;
    }
    if (total < 10)
        throw std::invalid_argument("ordering test needs at least 10 tail samples");
    if (above > 0 && below == 0) return CurveOrdering::Over;
    if (below > 0 && above == 0) return CurveOrdering::Under;
    return CurveOrdering::Mixed;
}

}  // namespace wflow
