#include "wflow/equilibria.hpp"

#include <cmath>
#include <stdexcept>

#include "wflow/curvature.hpp"

namespace wflow {

double q_ratio(const SpaceParams& s) {
    if (s.degenerate())
        throw std::invalid_argument("a = 1/4 is degenerate: the singular points coincide");
    return 2.0 * s.a / (1.0 - 2.0 * s.a);
}

std::array<PhasePoint, 4> singular_points(const SpaceParams& s) {
    const double q = q_ratio(s);
    return {PhasePoint{1.0, 1.0}, PhasePoint{q, 1.0}, PhasePoint{1.0, q},
            PhasePoint{1.0 / q, 1.0 / q}};
}

std::array<PhasePoint, 3> special_points(const SpaceParams& s) {
    return {PhasePoint{s.a, 1.0}, PhasePoint{1.0, s.a},
            PhasePoint{1.0 / s.a, 1.0 / s.a}};
}

const char* equilibrium_class_name(EquilibriumClass c) {
    switch (c) {
        case EquilibriumClass::UnstableNode: return "unstable-node";
        case EquilibriumClass::StableNode: return "stable-node";
        case EquilibriumClass::Saddle: return "saddle";
        case EquilibriumClass::Focus: return "focus";
        case EquilibriumClass::Degenerate: return "degenerate";
    }
    return "?";
}

EquilibriumReport classify_equilibrium(const SpaceParams& s, const PhasePoint& p) {
    const auto f = field_w(s, p);
    const double fnorm = std::hypot(f[0], f[1]);
    if (fnorm > 1e-10 * (1.0 + std::fabs(p.w1) + std::fabs(p.w2)))
        throw std::invalid_argument("point is not an equilibrium of the phase flow");

    EquilibriumReport rep;
    rep.location = p;
    rep.field_norm = fnorm;
    rep.eig = eigenvalues(jacobian_w(s, p));

    const double zero_tol = 1e-10;
    if (rep.eig.complex_pair()) {
        rep.cls = (std::fabs(rep.eig.re1) <= zero_tol) ? EquilibriumClass::Degenerate
                                                       : EquilibriumClass::Focus;
    } else if (std::fabs(rep.eig.re1) <= zero_tol || std::fabs(rep.eig.re2) <= zero_tol) {
        rep.cls = EquilibriumClass::Degenerate;
    } else if (rep.eig.re1 > 0.0) {
        rep.cls = EquilibriumClass::UnstableNode;
    } else if (rep.eig.re2 < 0.0) {
        rep.cls = EquilibriumClass::StableNode;
    } else {
        rep.cls = EquilibriumClass::Saddle;
    }

    rep.einstein = normalize_volume(from_scale_invariant(p));
    const auto r = principal_ricci(s, rep.einstein);
    const double mean = (r[0] + r[1] + r[2]) / 3.0;
    rep.einstein_defect = std::max({std::fabs(r[0] - mean), std::fabs(r[1] - mean),
                                    std::fabs(r[2] - mean)});
    return rep;
}

std::array<EquilibriumReport, 4> equilibrium_reports(const SpaceParams& s) {
    const auto pts = singular_points(s);
    return {classify_equilibrium(s, pts[0]), classify_equilibrium(s, pts[1]),
            classify_equilibrium(s, pts[2]), classify_equilibrium(s, pts[3])};
}

PhasePoint r1_parametrization(const SpaceParams& s, double t) {
    if (!(t > 0.0) || !(t < 1.0))
        throw std::invalid_argument("branch parameter must lie in (0, 1)");
    const double a = s.a;
    const double w2 = (t + std::sqrt(4.0 * a * a * (1.0 - t * t) + t * t)) / (2.0 * a * t);
    return PhasePoint{t * w2, w2};
}

double r1_tangency_function(const SpaceParams& s, double t) {
    const double a = s.a;
    const double root = std::sqrt(4.0 * a * a * (1.0 - t * t) + t * t);
    const double t2 = t * t, t3 = t2 * t;
    return ((2.0 - 8.0 * a * a) * t2 + (2.0 * a * a + a - 1.0) * t + 4.0 * a * a) * root +
           2.0 * (4.0 * a * a - 1.0) * (2.0 * a * a - 1.0) * t3 -
           (a - 1.0) * (4.0 * a * a - 1.0) * t2 -
           8.0 * a * a * (2.0 * a * a - 1.0) * t + 2.0 * a * a * (2.0 * a - 1.0);
}

namespace {

QPointReport make_q_report(const SpaceParams& s, double t) {
    QPointReport rep;
    rep.t_star = t;
    rep.point = r1_parametrization(s, t);
    rep.curve_residual = std::fabs(curve_residual(s, CurveId::R1, rep.point));
    rep.tangency_residual = std::fabs(r1_tangency_function(s, t));
    return rep;
}

double refine_root(const SpaceParams& s, double lo, double hi) {
    double flo = r1_tangency_function(s, lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = r1_tangency_function(s, mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // Newton polish with a centered difference; fall back on the bisection
    // midpoint if the correction leaves the bracket.
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double dt = 1e-7;
        const double f0 = r1_tangency_function(s, t);
        const double der =
            (r1_tangency_function(s, t + dt) - r1_tangency_function(s, t - dt)) /
            (2.0 * dt);
        if (der == 0.0) break;
        const double tn = t - f0 / der;
        if (!(tn > 0.0) || !(tn < 1.0)) break;
        t = tn;
    }
    return t;
}

}  // namespace

std::vector<QPointReport> q_point_all(const SpaceParams& s) {
    std::vector<QPointReport> out;
    const int n = 10000;
    const double lo = 1e-9, hi = 1.0 - 1e-9;
    double prev_t = lo, prev_v = r1_tangency_function(s, prev_t);
    for (int i = 1; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const double v = r1_tangency_function(s, t);
        if (v == 0.0) {
            out.push_back(make_q_report(s, t));
        } else if (prev_v != 0.0 && (prev_v < 0.0) != (v < 0.0)) {
            out.push_back(make_q_report(s, refine_root(s, prev_t, t)));
        }
        prev_t = t;
        prev_v = v;
    }
    return out;
}

std::optional<QPointReport> q_point(const SpaceParams& s) {
    auto roots = q_point_all(s);
    if (roots.empty()) return std::nullopt;
    // With several roots, the relevant tangency is the one inside the
    // sector with the largest w1 (nearest the boundary vertex P3).
    QPointReport best = roots.front();
    for (const auto& r : roots)
        if (r.point.w1 > best.point.w1) best = r;
    return best;
}

TransversalityL3 transversality_l3(const SpaceParams& s, const PhasePoint& p) {
    validate(p);
    const double a = s.a, w1 = p.w1, w2 = p.w2;
    const auto f = field_w(s, p);
    // grad l3 components.
    const double dl_dw1 = -6.0 * w1 * w2 * w2 + 4.0 * w1 * w2 + 2.0 * w2 * w2 +
                          2.0 * w1 - 2.0 * w2;
    const double dl_dw2 = -6.0 * w1 * w1 * w2 + 2.0 * w1 * w1 + 4.0 * w1 * w2 -
                          2.0 * w1 + 2.0 * w2;
    TransversalityL3 out;
    out.direct = f[0] * dl_dw1 + f[1] * dl_dw2;
    out.w_factor = 12.0 * a * w1 * w1 * w2 * w2 -
                   3.0 * (w1 + w2) * w1 * w2 * (1.0 - 2.0 * a) -
                   (w1 - w2) * (w1 - w2) * (1.0 + 2.0 * a);
    out.factored = 2.0 * (w1 - 1.0) * (w2 - 1.0) * out.w_factor;
    return out;
}

TransversalityR1 transversality_r1(const SpaceParams& s, double t) {
    TransversalityR1 out;
    out.t = t;
    out.point = r1_parametrization(s, t);
    const double a = s.a, w1 = out.point.w1, w2 = out.point.w2;
    const auto f = field_w(s, out.point);
    const double dr_dw1 = -2.0 * a * w1 * w2 * w2 - 2.0 * a * w1 + 2.0 * w1 * w2;
    const double dr_dw2 = -2.0 * a * w1 * w1 * w2 + 2.0 * a * w2 + w1 * w1;
    out.inner = f[0] * dr_dw1 + f[1] * dr_dw2;
    out.w_value = r1_tangency_function(s, t);
    return out;
}

}  // namespace wflow
