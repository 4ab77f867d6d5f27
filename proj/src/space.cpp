#include "wflow/space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wflow {

namespace {
bool close(double u, double v, double tol) { return std::fabs(u - v) <= tol; }
}  // namespace

bool SpaceParams::degenerate() const { return close(a, 0.25, 1e-14); }

bool SpaceParams::classical_preset() const {
    const double tol = 1e-14;
    return (close(a, 1.0 / 6.0, tol) && d == 2) ||
           (close(a, 1.0 / 8.0, tol) && d == 4) ||
           (close(a, 1.0 / 9.0, tol) && d == 8);
}

SpaceParams make_space(double a, int d) {
    if (!(a > 0.0) || !(a < 0.5) || !std::isfinite(a))
        throw std::invalid_argument("space parameter a must lie in (0, 1/2), got " +
                                    std::to_string(a));
    if (d < 1)
        throw std::invalid_argument("summand dimension d must be positive, got " +
                                    std::to_string(d));
    return SpaceParams{a, d};
}

void validate(const Metric3& m) {
    if (!(m.x1 > 0.0) || !(m.x2 > 0.0) || !(m.x3 > 0.0) || !std::isfinite(m.x1) ||
        !std::isfinite(m.x2) || !std::isfinite(m.x3))
        throw std::invalid_argument("metric components must be positive and finite");
}

void validate(const PhasePoint& p) {
    if (!(p.w1 > 0.0) || !(p.w2 > 0.0) || !std::isfinite(p.w1) || !std::isfinite(p.w2))
        throw std::invalid_argument("phase coordinates must be positive and finite");
}

PhasePoint to_scale_invariant(const Metric3& m) {
    validate(m);
    return PhasePoint{m.x3 / m.x1, m.x3 / m.x2};
}

Metric3 from_scale_invariant(const PhasePoint& p) {
    validate(p);
    return Metric3{1.0 / p.w1, 1.0 / p.w2, 1.0};
}

Metric3 normalize_volume(const Metric3& m) {
    validate(m);
    const double s = std::cbrt(m.x1 * m.x2 * m.x3);
    return Metric3{m.x1 / s, m.x2 / s, m.x3 / s};
}

Metric3 submersion_metric(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("submersion parameter must be positive");
    const double c = std::pow(x, -1.0 / 3.0);
    return Metric3{c, c, c * x};
}

Metric3 ModulePermutation::apply(const Metric3& m) const {
    const double x[3] = {m.x1, m.x2, m.x3};
    return Metric3{x[idx[0]], x[idx[1]], x[idx[2]]};
}

PhasePoint ModulePermutation::apply(const PhasePoint& p) const {
    return to_scale_invariant(apply(from_scale_invariant(p)));
}

ModulePermutation ModulePermutation::inverse() const {
    ModulePermutation r;
    for (int i = 0; i < 3; ++i) r.idx[idx[i]] = i;
    return r;
}

const std::array<ModulePermutation, 6>& symmetry_group() {
    static const std::array<ModulePermutation, 6> g = {{
        {{0, 1, 2}},
        {{1, 0, 2}},
        {{0, 2, 1}},
        {{2, 1, 0}},
        {{1, 2, 0}},
        {{2, 0, 1}},
    }};
    return g;
}

std::vector<PhasePoint> symmetry_orbit(const PhasePoint& p, double tol) {
    std::vector<PhasePoint> orbit;
    for (const auto& s : symmetry_group()) {
        const PhasePoint q = s.apply(p);
        bool dup = false;
        for (const auto& o : orbit)
            dup = dup || (close(o.w1, q.w1, tol * (1.0 + std::fabs(o.w1))) &&
                          close(o.w2, q.w2, tol * (1.0 + std::fabs(o.w2))));
        if (!dup) orbit.push_back(q);
    }
    return orbit;
}

bool in_omega_closure(const PhasePoint& p, double tol) {
    return p.w1 >= 1.0 - tol && p.w2 >= p.w1 - tol;
}

bool in_omega_interior(const PhasePoint& p, double tol) {
    return p.w1 > 1.0 + tol && p.w2 > p.w1 + tol;
}

std::pair<PhasePoint, ModulePermutation> canonicalize_to_omega(const PhasePoint& p) {
    validate(p);
    PhasePoint best = p;
    ModulePermutation best_perm{};
    bool have = false;
    for (const auto& s : symmetry_group()) {
        const PhasePoint q = s.apply(p);
        if (!in_omega_closure(q, 1e-12)) continue;
        const bool better = !have || q.w1 < best.w1 - 1e-15 ||
                            (close(q.w1, best.w1, 1e-15) && q.w2 < best.w2 - 1e-15);
        if (better) {
            best = q;
            best_perm = s;
            have = true;
        }
    }
    if (!have)
        throw std::logic_error("symmetry orbit missed the canonical sector");
    return {best, best_perm};
}

}  // namespace wflow
