#include "wflow/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wflow {

namespace {

constexpr double kSignTol = 1e-12;

/// Sign with a relative dead zone: |v| <= kSignTol * (1 + scale) is zero.
int tol_sign(double v, double scale) {
    const double tol = kSignTol * (1.0 + scale);
    if (v > tol) return 1;
    if (v < -tol) return -1;
    return 0;
}

SignClass join_signs(int s1, int s2, int s3) {
    if (s1 > 0 && s2 > 0 && s3 > 0) return SignClass::Positive;
    if (s1 >= 0 && s2 >= 0 && s3 >= 0) return SignClass::Boundary;
    return SignClass::Mixed;
}

}  // namespace

std::array<double, 3> ricci_numerators(const SpaceParams& s, const Metric3& m) {
    validate(m);
    const double x1 = m.x1, x2 = m.x2, x3 = m.x3, a = s.a;
    return {x2 * x3 + a * (x1 * x1 - x2 * x2 - x3 * x3),
            x1 * x3 + a * (x2 * x2 - x1 * x1 - x3 * x3),
            x1 * x2 + a * (x3 * x3 - x1 * x1 - x2 * x2)};
}

std::array<double, 3> principal_ricci(const SpaceParams& s, const Metric3& m) {
    const auto k = ricci_numerators(s, m);
    const double den = 2.0 * m.x1 * m.x2 * m.x3;
    return {k[0] / den, k[1] / den, k[2] / den};
}

double scalar_curvature(const SpaceParams& s, const Metric3& m) {
    const auto r = principal_ricci(s, m);
    return s.d * (r[0] + r[1] + r[2]);
}

std::array<double, 3> sectional_gammas(const Metric3& m) {
    validate(m);
    const double x[3] = {m.x1, m.x2, m.x3};
    std::array<double, 3> g;
    for (int i = 0; i < 3; ++i) {
        const double xi = x[i], xj = x[(i + 1) % 3], xk = x[(i + 2) % 3];
        g[i] = (xj - xk) * (xj - xk) + 2.0 * xi * (xj + xk) - 3.0 * xi * xi;
    }
    return g;
}

SignClass ricci_signature(const SpaceParams& s, const Metric3& m) {
    const auto k = ricci_numerators(s, m);
    const double scale = m.x1 * m.x2 + m.x1 * m.x3 + m.x2 * m.x3 +
                         s.a * (m.x1 * m.x1 + m.x2 * m.x2 + m.x3 * m.x3);
    return join_signs(tol_sign(k[0], scale), tol_sign(k[1], scale), tol_sign(k[2], scale));
}

SignClass scalar_signature(const SpaceParams& s, const Metric3& m) {
    const double x1 = m.x1, x2 = m.x2, x3 = m.x3;
    const double num = x1 * x2 + x1 * x3 + x2 * x3 - s.a * (x1 * x1 + x2 * x2 + x3 * x3);
    const double scale = x1 * x2 + x1 * x3 + x2 * x3 + s.a * (x1 * x1 + x2 * x2 + x3 * x3);
    const int sg = tol_sign(num, scale);
    if (sg > 0) return SignClass::Positive;
    if (sg == 0) return SignClass::Boundary;
    return SignClass::Mixed;
}

SignClass sectional_signature(const SpaceParams& s, const Metric3& m) {
    if (!s.classical_preset())
        throw std::invalid_argument(
            "sectional signature is only available on the classical presets");
    validate(m);
    const double scale =
        (m.x1 + m.x2 + m.x3) * (m.x1 + m.x2 + m.x3);
    // On the bi-invariant ray the gammas vanish identically but the
    // curvature is that of the normal metric: strictly positive.
    if (std::fabs(m.x1 - m.x2) <= kSignTol * scale &&
        std::fabs(m.x2 - m.x3) <= kSignTol * scale)
        return SignClass::Positive;
    const auto g = sectional_gammas(m);
    return join_signs(tol_sign(g[0], scale), tol_sign(g[1], scale), tol_sign(g[2], scale));
}

CurvatureSignature classify_metric(const SpaceParams& s, const Metric3& m) {
    CurvatureSignature out{};
    if (s.classical_preset()) out.sectional = sectional_signature(s, m);
    out.ricci = ricci_signature(s, m);
    out.scalar = scalar_signature(s, m);
    out.kahler = false;
    if (std::fabs(s.a - 1.0 / 6.0) <= 1e-14) {
        const double scale = m.x1 + m.x2 + m.x3;
        const double tol = 1e-12 * (1.0 + scale);
        out.kahler = std::fabs(m.x3 - m.x1 - m.x2) <= tol ||
                     std::fabs(m.x2 - m.x1 - m.x3) <= tol ||
                     std::fabs(m.x1 - m.x2 - m.x3) <= tol;
    }
    return out;
}

BoundaryResiduals boundary_residuals(const SpaceParams& s, const PhasePoint& p) {
    validate(p);
    const double w1 = p.w1, w2 = p.w2, a = s.a;
    const double q1 = w1 * w1, q2 = w2 * w2, ww = w1 * w2, qq = q1 * q2;
    BoundaryResiduals out;
    out.l[0] = qq - 2.0 * q1 * w2 + 2.0 * w1 * q2 + q1 + 2.0 * ww - 3.0 * q2;
    out.l[1] = qq + 2.0 * q1 * w2 - 2.0 * w1 * q2 - 3.0 * q1 + 2.0 * ww + q2;
    out.l[2] = -3.0 * qq + 2.0 * q1 * w2 + 2.0 * w1 * q2 + q1 - 2.0 * ww + q2;
    out.rho[0] = -a * qq - a * q1 + a * q2 + q1 * w2;
    out.rho[1] = -a * qq + a * q1 - a * q2 + w1 * q2;
    out.rho[2] = a * qq - a * q1 - a * q2 + ww;
    out.scalar_expr = a * (qq + q1 + q2) - q1 * w2 - w1 * q2 - ww;
    return out;
}

double region_margin(const SpaceParams& s, Region reg, const PhasePoint& p) {
    const auto b = boundary_residuals(s, p);
    switch (reg) {
        case Region::SectionalPositive:
            if (!s.classical_preset())
                throw std::invalid_argument(
                    "sectional region is only available on the classical presets");
            return std::min({b.l[0], b.l[1], b.l[2]});
        case Region::RicciPositive:
            return std::min({b.rho[0], b.rho[1], b.rho[2]});
        case Region::ScalarPositive:
            return -b.scalar_expr;
    }
    throw std::logic_error("unknown region");
}

bool region_contains(const SpaceParams& s, Region reg, const PhasePoint& p) {
    return region_margin(s, reg, p) > 0.0;
}

const char* curve_name(CurveId id) {
    switch (id) {
        case CurveId::C1: return "c1";
        case CurveId::C2: return "c2";
        case CurveId::C3: return "c3";
        case CurveId::S1: return "s1";
        case CurveId::S2: return "s2";
        case CurveId::S3: return "s3";
        case CurveId::R1: return "r1";
        case CurveId::R2: return "r2";
        case CurveId::R3: return "r3";
        case CurveId::ScalarCurve: return "s";
        case CurveId::OmegaNull: return "omega";
        case CurveId::LambdaNull: return "lambda";
    }
    return "?";
}

double curve_residual(const SpaceParams& s, CurveId id, const PhasePoint& p) {
    const double w1 = p.w1, w2 = p.w2, a = s.a;
    switch (id) {
        case CurveId::C1: return w2 - w1;
        case CurveId::C2: return w1 - 1.0;
        case CurveId::C3: return w2 - 1.0;
        case CurveId::OmegaNull: return w1 - 2.0 * a * w1 * w2 - 2.0 * a * w2;
        case CurveId::LambdaNull: return w2 - 2.0 * a * w1 * w2 - 2.0 * a * w1;
        default: break;
    }
    const auto b = boundary_residuals(s, p);
    switch (id) {
        case CurveId::S1: return b.l[0];
        case CurveId::S2: return b.l[1];
        case CurveId::S3: return b.l[2];
        case CurveId::R1: return b.rho[0];
        case CurveId::R2: return b.rho[1];
        case CurveId::R3: return b.rho[2];
        case CurveId::ScalarCurve: return b.scalar_expr;
        default: break;
    }
    throw std::logic_error("unknown curve");
}

namespace {

/// Quadratic A w2^2 + B w2 + C = 0 in w2 at fixed w1 for the polynomial
/// boundaries; positive real roots sorted ascending.
struct Quad {
    double A, B, C;
};

Quad curve_quadratic(const SpaceParams& s, CurveId id, double w1) {
    const double a = s.a, q1 = w1 * w1;
    switch (id) {
        case CurveId::S1:
            return {q1 + 2.0 * w1 - 3.0, -2.0 * q1 + 2.0 * w1, q1};
        case CurveId::S2:
            return {q1 - 2.0 * w1 + 1.0, 2.0 * q1 + 2.0 * w1, -3.0 * q1};
        case CurveId::S3:
            return {-3.0 * q1 + 2.0 * w1 + 1.0, 2.0 * q1 - 2.0 * w1, q1};
        case CurveId::R1:
            return {-a * q1 + a, q1, -a * q1};
        case CurveId::R2:
            return {-a * q1 - a + w1, 0.0, a * q1};
        case CurveId::R3:
            return {a * q1 - a, w1, -a * q1};
        case CurveId::ScalarCurve:
            return {a * q1 + a - w1, -q1 - w1, a * q1};
        case CurveId::OmegaNull:
            return {0.0, -2.0 * a * w1 - 2.0 * a, w1};
        case CurveId::LambdaNull:
            return {0.0, 1.0 - 2.0 * a * w1, -2.0 * a * w1};
        default:
            throw std::logic_error("curve has no quadratic slice");
    }
}

std::vector<double> positive_roots(const Quad& q) {
    std::vector<double> out;
    const double eps = 1e-300;
    if (std::fabs(q.A) < 1e-13 * (std::fabs(q.B) + std::fabs(q.C) + 1.0)) {
        if (std::fabs(q.B) > eps) {
            const double r = -q.C / q.B;
            if (r > 0.0 && std::isfinite(r)) out.push_back(r);
        }
        return out;
    }
    const double disc = q.B * q.B - 4.0 * q.A * q.C;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    // Stable quadratic formula: avoid cancellation in the smaller root.
    const double t = -0.5 * (q.B + std::copysign(sq, q.B));
    double r1 = t / q.A;
    double r2 = (std::fabs(t) > eps) ? q.C / t : -q.B / q.A - r1;
    if (r1 > r2) std::swap(r1, r2);
    if (r1 > 0.0 && std::isfinite(r1)) out.push_back(r1);
    if (r2 > 0.0 && std::isfinite(r2) && r2 != r1) out.push_back(r2);
    return out;
}

}  // namespace

CurveSample sample_boundary_curve(const SpaceParams& s, CurveId id, CurveBranch branch,
                                  double lo, double hi, int count) {
    if (count < 2) throw std::invalid_argument("need at least two curve samples");
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bad abscissa range");
    CurveSample out;
    out.id = id;
    out.points.reserve(count);
    const double step = (hi - lo) / (count - 1);
    bool have_prev = false;
    double prev = 0.0;
    for (int i = 0; i < count; ++i) {
        const double u = (i == count - 1) ? hi : lo + i * step;
        // Straight-line curves are explicit in either coordinate.
        if (id == CurveId::C1) { out.points.push_back({u, u}); continue; }
        if (id == CurveId::C2) { out.points.push_back({1.0, u}); continue; }
        if (id == CurveId::C3) { out.points.push_back({u, 1.0}); continue; }
        const auto roots = positive_roots(curve_quadratic(s, id, u));
        if (roots.empty()) {
            out.skipped.push_back(u);
            have_prev = false;
            continue;
        }
        double w2;
        if (roots.size() == 1) {
            w2 = roots.front();
        } else if (branch == CurveBranch::Upper) {
            w2 = roots.back();
        } else if (branch == CurveBranch::Lower) {
            w2 = roots.front();
        } else {  // Auto: continuity with the previous accepted sample
            if (!have_prev)
                w2 = roots.back();
            else
                w2 = (std::fabs(roots.front() - prev) < std::fabs(roots.back() - prev))
                         ? roots.front()
                         : roots.back();
        }
        out.points.push_back({u, w2});
        prev = w2;
        have_prev = true;
    }
    return out;
}

}  // namespace wflow
