#include "wflow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "wflow/asymptotics.hpp"
#include "wflow/curvature.hpp"
#include "wflow/equilibria.hpp"
#include "wflow/fields.hpp"
#include "wflow/integrate.hpp"
#include "wflow/space.hpp"
#include "wflow/sweep.hpp"

namespace wflow {

namespace {

std::array<SpaceParams, 3> presets() {
    return {make_space(1.0 / 6.0, 2), make_space(1.0 / 8.0, 4), make_space(1.0 / 9.0, 8)};
}

struct Checker {
    int total = 0;
    int failed = 0;
    std::ostringstream log;

    void expect(bool cond, const std::string& what) {
        ++total;
        if (!cond) {
            ++failed;
            log << "      FAIL " << what << "\n";
        }
    }

    void expect_near(double value, double reference, double tol, const std::string& what) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: got %.12g, reference %.12g (tol %.3g)",
                      what.c_str(), value, reference, tol);
        expect(std::fabs(value - reference) <= tol, buf);
    }
};

CriterionResult finish(int id, const std::string& name, Checker& c,
                       std::chrono::steady_clock::time_point t0) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.checks = c.total;
    r.failures = c.failed;
    r.pass = (c.failed == 0) && (c.total > 0);
    r.detail = c.log.str();
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------- 1
CriterionResult criterion_tangency_references() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    struct Ref {
        double a;
        int d;
        double t, w1, w2;
        const char* tag;
    };
    const Ref refs[3] = {
        {1.0 / 9.0, 8, 0.389089209, 3.364907691, 8.648165018, "a=1/9"},
        {1.0 / 8.0, 4, 0.361437711, 3.166087521, 8.759704438, "a=1/8"},
        {1.0 / 6.0, 2, 0.2094305850, 2.125323812, 10.14810617, "a=1/6"},
    };
    for (const auto& ref : refs) {
        const auto s = make_space(ref.a, ref.d);
        const auto q = q_point(s);
        c.expect(q.has_value(), std::string(ref.tag) + ": tangency point not found");
        if (!q) continue;
        c.expect_near(q->t_star, ref.t, 1e-6, std::string(ref.tag) + " t*");
        c.expect_near(q->point.w1, ref.w1, 1e-6, std::string(ref.tag) + " w1*");
        c.expect_near(q->point.w2, ref.w2, 1e-6, std::string(ref.tag) + " w2*");
        c.expect(q->curve_residual <= 1e-9,
                 std::string(ref.tag) + ": point is off the Ricci boundary, |rho1|=" +
                     std::to_string(q->curve_residual));
    }
    const auto q6 = q_point(make_space(1.0 / 6.0, 2));
    if (q6)
        c.expect_near(q6->t_star, 1.0 - std::sqrt(10.0) / 4.0, 1e-12,
                      "a=1/6 closed-form t*");
    return finish(1, "tangency point reference values", c, t0);
}

// ---------------------------------------------------------------- 2
CriterionResult criterion_equilibrium_structure() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    for (const auto& s : presets()) {
        char tag[32];
        std::snprintf(tag, sizeof tag, "a=%.6g", s.a);
        const auto pts = singular_points(s);
        for (int i = 0; i < 4; ++i) {
            const auto f = field_w(s, pts[i]);
            c.expect(std::hypot(f[0], f[1]) <= 1e-12,
                     std::string(tag) + ": |field| at E" + std::to_string(i) +
                         " exceeds 1e-12");
        }
        const auto reports = equilibrium_reports(s);
        const double lam = 1.0 - 4.0 * s.a;
        c.expect_near(reports[0].eig.re1, lam, 1e-12, std::string(tag) + " E0 eigenvalue 1");
        c.expect_near(reports[0].eig.re2, lam, 1e-12, std::string(tag) + " E0 eigenvalue 2");
        c.expect(reports[0].cls == EquilibriumClass::UnstableNode,
                 std::string(tag) + ": E0 is not an unstable node");
        for (int i = 1; i < 4; ++i)
            c.expect(reports[i].cls == EquilibriumClass::Saddle,
                     std::string(tag) + ": E" + std::to_string(i) + " is not a saddle");
        for (int i = 0; i < 4; ++i)
            c.expect(reports[i].einstein_defect <= 1e-10,
                     std::string(tag) + ": E" + std::to_string(i) +
                         " representative is not Einstein to 1e-10");
    }
    return finish(2, "equilibrium structure", c, t0);
}

// ---------------------------------------------------------------- 3 & 4
void check_escape_sweep(Checker& c, const SpaceParams& s, Region region,
                        const char* region_tag) {
    SweepSpec spec;
    spec.space = s;
    spec.region = region;
    default_window(region, s, spec.w1_lo, spec.w1_hi, spec.w2_lo, spec.w2_hi);
    spec.n1 = 10;
    spec.n2 = 10;
    spec.margin = 1e-2;
    spec.options.t_max = 100.0;
    spec.options.rel_tol = 1e-10;
    spec.options.abs_tol = 1e-12;
    const auto result = run_sweep(spec);
    char tag[48];
    std::snprintf(tag, sizeof tag, "a=%.6g %s", s.a, region_tag);
    c.expect(result.n_started >= 20,
             std::string(tag) + ": admissible lattice unexpectedly small (" +
                 std::to_string(result.n_started) + ")");
    c.expect(result.n_errors == 0,
             std::string(tag) + ": " + std::to_string(result.n_errors) + " runs failed");
    c.expect(result.n_exited == result.n_started,
             std::string(tag) + ": only " + std::to_string(result.n_exited) + "/" +
                 std::to_string(result.n_started) + " starts left the region");
    c.expect(result.n_returned == 0,
             std::string(tag) + ": " + std::to_string(result.n_returned) +
                 " trajectories re-entered");
    double worst_residual = 0.0;
    for (const auto& rec : result.records)
        if (rec.exit_point && rec.exit_curve)
            worst_residual =
                std::max(worst_residual, std::fabs(curve_residual(
                                             s, *rec.exit_curve, *rec.exit_point)));
    c.expect(worst_residual <= 1e-9,
             std::string(tag) + ": exit localization residual " +
                 std::to_string(worst_residual));
}

CriterionResult criterion_sectional_sweep() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    for (const auto& s : presets())
        check_escape_sweep(c, s, Region::SectionalPositive, "sectional");
    return finish(3, "sectional region escape sweep", c, t0);
}

CriterionResult criterion_ricci_sweep() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    for (const auto& s : {make_space(1.0 / 8.0, 4), make_space(1.0 / 9.0, 8)})
        check_escape_sweep(c, s, Region::RicciPositive, "ricci");
    return finish(4, "Ricci region escape sweep", c, t0);
}

// ---------------------------------------------------------------- 5
CriterionResult criterion_dichotomy() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;

    {  // small a: Ricci positivity is lost and never recovered
        const auto s = make_space(0.10, 2);
        SweepSpec spec;
        spec.space = s;
        spec.region = Region::RicciPositive;
        default_window(Region::RicciPositive, s, spec.w1_lo, spec.w1_hi, spec.w2_lo,
                       spec.w2_hi);
        spec.n1 = 10;
        spec.n2 = 10;
        spec.margin = 1e-2;
        spec.options.t_max = 100.0;
        spec.options.rel_tol = 1e-10;
        spec.options.abs_tol = 1e-12;
        const auto result = run_sweep(spec);
        c.expect(result.n_started >= 4, "a=0.10: admissible lattice unexpectedly small (" +
                                            std::to_string(result.n_started) + ")");
        c.expect(result.n_errors == 0,
                 "a=0.10: " + std::to_string(result.n_errors) + " runs failed");
        c.expect(result.n_exited == result.n_started,
                 "a=0.10: only " + std::to_string(result.n_exited) + "/" +
                     std::to_string(result.n_started) + " starts left the Ricci region");
        c.expect(result.n_returned == 0, "a=0.10: " + std::to_string(result.n_returned) +
                                             " trajectories re-entered");
    }

    for (double a : {0.2, 0.3}) {  // large a: positivity is reached and kept
        const auto s = make_space(a, 2);
        EventSpec<2> membership;
        membership.fn = [&s](const std::array<double, 2>& y) {
            return region_margin(s, Region::RicciPositive, PhasePoint{y[0], y[1]});
        };
        IntegrationOptions opt;
        opt.t_max = 100.0;
        opt.rel_tol = 1e-10;
        opt.abs_tol = 1e-12;
        const PhasePoint starts[] = {
            {6.0, 12.0}, {2.0, 8.0}, {1.5, 1.8}, {3.0, 3.5}, {1.2, 20.0}};
        for (const auto& start : starts) {
            char tag[64];
            std::snprintf(tag, sizeof tag, "a=%.6g start=(%g,%g)", a, start.w1, start.w2);
            const auto traj = integrate_w(s, start, opt, {membership});
            bool inside = region_contains(s, Region::RicciPositive, start);
            bool lost_after = false;
            for (const auto& ev : traj.events) {
                if (ev.direction > 0)
                    inside = true;
                else if (inside)
                    lost_after = true;
            }
            c.expect(inside, std::string(tag) + ": Ricci region never entered");
            c.expect(!lost_after, std::string(tag) + ": Ricci positivity lost after entry");
            const auto& yend = traj.samples.back().y;
            c.expect(
                region_contains(s, Region::RicciPositive, PhasePoint{yend[0], yend[1]}),
                std::string(tag) + ": final state outside the Ricci region");
        }
    }

    for (double a : {0.10, 0.2, 0.3}) {  // tail against the reference curve
        const auto s = make_space(a, 2);
        char tag[48];
        std::snprintf(tag, sizeof tag, "a=%.6g ordering", a);
        IntegrationOptions opt;
        opt.t_max = 200.0;
        opt.rel_tol = 1e-10;
        opt.abs_tol = 1e-12;
        opt.state_cap = 1e8;
        const auto traj = integrate_w(s, PhasePoint{1.2, 2.0}, opt);
        const auto ord =
            ordering_vs_curve(traj, 1.0, 1.0 / (2.0 * a), 3e-3);
        const auto want = (a < 1.0 / 6.0) ? CurveOrdering::Over : CurveOrdering::Under;
        c.expect(ord == want, std::string(tag) + ": got " + curve_ordering_name(ord) +
                                  ", expected " + curve_ordering_name(want));
    }
    return finish(5, "parameter dichotomy", c, t0);
}

// ---------------------------------------------------------------- 6
CriterionResult criterion_wedge() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    const auto s = make_space(1.0 / 6.0, 2);
    IntegrationOptions opt;
    opt.t_max = 50.0;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-12;

    int n_checked = 0;
    double worst_margin = 1e300;
    for (int i = 0; i < 10; ++i) {
        const double w1 = 1.05 + 0.8 * i / 9.0;
        const double lo = w1 + 0.02, hi = w1 / (w1 - 1.0) - 0.02;
        for (double frac : {0.15, 0.3, 0.5, 0.7, 0.85}) {
            const PhasePoint start{w1, lo + frac * (hi - lo)};
            ++n_checked;
            if (!region_contains(s, Region::RicciPositive, start)) {
                c.expect(false, "wedge start outside the Ricci region");
                continue;
            }
            const auto traj = integrate_w(s, start, opt);
            for (const auto& smp : traj.samples)
                worst_margin = std::min(
                    worst_margin,
                    region_margin(s, Region::RicciPositive, PhasePoint{smp.y[0], smp.y[1]}));
        }
    }
    c.expect(n_checked == 50, "expected 50 wedge starts");
    c.expect(worst_margin > 0.0,
             "Ricci positivity violated inside the wedge, min margin " +
                 std::to_string(worst_margin));

    double worst_residual = 0.0;
    for (double w1 : {1.2, 1.4, 1.6, 1.8}) {
        const PhasePoint start{w1, w1 / (w1 - 1.0)};
        const auto traj = integrate_w(s, start, opt);
        for (const auto& smp : traj.samples)
            worst_residual = std::max(
                worst_residual, std::fabs(kahler_residual(PhasePoint{smp.y[0], smp.y[1]})));
    }
    c.expect(worst_residual <= 1e-7,
             "canonical line not preserved, max residual " +
                 std::to_string(worst_residual));
    return finish(6, "invariant wedge and canonical line", c, t0);
}

// ---------------------------------------------------------------- 7
CriterionResult criterion_conservation() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const auto s = make_space(1.0 / 8.0, 4);
    for (int run = 0; run < 20; ++run) {
        const Metric3 raw{std::exp(uni(rng)), std::exp(uni(rng)), std::exp(uni(rng))};
        const Metric3 start = normalize_volume(raw);
        IntegrationOptions opt;
        opt.t_max = 20.0;
        opt.rel_tol = 1e-10;
        opt.abs_tol = 1e-12;
        opt.state_cap = 1e8;
        // Stop once a factor collapses past 1e-2: beyond that the orbit
        // degenerates and per-step error at the pinned tolerance swamps
        // the conservation budget.
        opt.state_floor = 1e-2;
        const auto traj = integrate_x(s, start, opt);
        double worst_vol = 0.0, worst_drop = 0.0;
        double prev_s = -1e300;
        for (const auto& smp : traj.samples) {
            const Metric3 m{smp.y[0], smp.y[1], smp.y[2]};
            worst_vol = std::max(worst_vol, std::fabs(m.x1 * m.x2 * m.x3 - 1.0));
            const double sc = scalar_curvature(s, m);
            worst_drop = std::max(worst_drop, prev_s - sc);
            prev_s = sc;
        }
        char tag[96];
        std::snprintf(tag, sizeof tag, "run %d (%s): volume drift %.3e", run,
                      stop_reason_name(traj.stop), worst_vol);
        c.expect(worst_vol <= 1e-8, tag);
        std::snprintf(tag, sizeof tag, "run %d (%s): scalar curvature dropped by %.3e",
                      run, stop_reason_name(traj.stop), worst_drop);
        c.expect(worst_drop <= 1e-9, tag);
    }
    return finish(7, "volume and scalar-curvature monotonicity", c, t0);
}

// ---------------------------------------------------------------- 8
CriterionResult criterion_tail() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    for (double a : {1.0 / 9.0, 1.0 / 8.0}) {
        const auto s = make_space(a, a == 1.0 / 8.0 ? 4 : 8);
        char tag[32];
        std::snprintf(tag, sizeof tag, "a=%.6g", a);
        IntegrationOptions opt;
        opt.t_max = 200.0;
        opt.rel_tol = 1e-10;
        opt.abs_tol = 1e-12;
        opt.state_cap = 1e9;
        const auto traj = integrate_w(s, PhasePoint{1.2, 2.0}, opt);
        const auto fit = fit_tail_exponent(traj, 1e-4);
        const double alpha0 = predicted_exponent(s);
        c.expect(std::fabs(fit.alpha - alpha0) <= 0.10 * alpha0,
                 std::string(tag) + ": fitted exponent " + std::to_string(fit.alpha) +
                     " vs predicted " + std::to_string(alpha0));
        const auto env = envelope_check(s, traj, 0.1, 1e-4);
        c.expect(env.lower_ok && env.upper_ok,
                 std::string(tag) + ": envelope violated (lower " +
                     std::to_string(env.lower_ok) + ", upper " +
                     std::to_string(env.upper_ok) + ")");
    }

    {  // synthetic power-law recovery
        const double alpha = 1.6, coeff = 2.7;
        Trajectory<2> synth;
        for (int i = 0; i < 200; ++i) {
            const double u = std::pow(10.0, -8.0 + 5.0 * i / 199.0);  // w1 - 1
            synth.samples.push_back(
                {static_cast<double>(i), {1.0 + u, coeff * std::pow(u, -alpha)}});
        }
        const auto fit = fit_tail_exponent(synth, 2e-3);
        c.expect(std::fabs(fit.alpha - alpha) <= 1e-9,
                 "synthetic exponent recovery error " +
                     std::to_string(std::fabs(fit.alpha - alpha)));

        const auto s = make_space(1.0 / 8.0, 4);
        const double alpha0 = predicted_exponent(s);
        for (double factor : {1.3, 0.7}) {
            Trajectory<2> probe;
            for (int i = 0; i < 200; ++i) {
                const double u = std::pow(10.0, -8.0 + 5.0 * i / 199.0);
                probe.samples.push_back(
                    {static_cast<double>(i),
                     {1.0 + u, coeff * std::pow(u, -alpha0 * factor)}});
            }
            const auto env = envelope_check(s, probe, 0.1, 2e-3);
            if (factor > 1.1)
                c.expect(env.lower_ok && !env.upper_ok,
                         "steep synthetic tail: expected an upper-side violation");
            else
                c.expect(!env.lower_ok && env.upper_ok,
                         "shallow synthetic tail: expected a lower-side violation");
        }
    }
    return finish(8, "tail exponent fits", c, t0);
}

// ---------------------------------------------------------------- 9
CriterionResult criterion_transversality() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    for (const auto& s : presets()) {
        char tag[32];
        std::snprintf(tag, sizeof tag, "a=%.6g", s.a);
        const auto arc =
            sample_boundary_curve(s, CurveId::S3, CurveBranch::Auto, 1.0005, 1.3329, 100);
        c.expect(arc.points.size() == 100,
                 std::string(tag) + ": sectional arc sampling incomplete");
        double worst_rel = 0.0;
        bool all_negative = true;
        for (const auto& p : arc.points) {
            if (!(p.w2 > p.w1)) continue;  // stay inside the sector
            const auto tr = transversality_l3(s, p);
            worst_rel = std::max(worst_rel, std::fabs(tr.direct - tr.factored) /
                                                (1.0 + std::fabs(tr.direct)));
            all_negative = all_negative && tr.direct < 0.0;
        }
        c.expect(worst_rel <= 1e-9, std::string(tag) +
                                        ": factored identity deviates by " +
                                        std::to_string(worst_rel));
        c.expect(all_negative,
                 std::string(tag) + ": flow not outward across the sectional arc");

        const auto q = q_point(s);
        c.expect(q.has_value(), std::string(tag) + ": no tangency point");
        if (q) {
            const auto lo = transversality_r1(s, q->t_star - 0.01);
            const auto hi = transversality_r1(s, q->t_star + 0.01);
            c.expect(lo.inner * hi.inner < 0.0,
                     std::string(tag) + ": no sign flip across the tangency parameter");
            for (const auto& probe : {lo, hi}) {
                const double predicted =
                    probe.point.w2 * probe.point.w2 / (2.0 * s.a * s.a) * probe.w_value;
                c.expect(std::fabs(probe.inner - predicted) <=
                             1e-9 * (1.0 + std::fabs(probe.inner)),
                         std::string(tag) + ": factored Ricci-boundary identity deviates");
            }
        }
    }
    return finish(9, "boundary transversality", c, t0);
}

// ---------------------------------------------------------------- 10
CriterionResult criterion_certificates() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;

    {  // sign certificate of the cubic-factor product on [1/9, 1/2)
        bool all_negative = true;
        double worst = -1e300;
        for (int i = 0; i < 1000; ++i) {
            const double a = 1.0 / 9.0 + (0.5 - 1e-9 - 1.0 / 9.0) * i / 999.0;
            const double v =
                (18.0 * a - 1.0) * (2.0 * a - 1.0) * (1.0 + 6.0 * a) * (1.0 + 6.0 * a);
            all_negative = all_negative && v < 0.0;
            worst = std::max(worst, v);
        }
        c.expect(all_negative,
                 "product certificate violated, max value " + std::to_string(worst));
    }

    for (const auto& s : presets()) {  // Ricci boundary stays clear of the arc
        char tag[32];
        std::snprintf(tag, sizeof tag, "a=%.6g", s.a);
        const auto arc = sample_boundary_curve(s, CurveId::S3, CurveBranch::Auto,
                                               1.0 + 1e-4, 4.0 / 3.0 - 1e-4, 2000);
        double min_abs = 1e300;
        for (const auto& p : arc.points)
            min_abs = std::min(min_abs, std::fabs(curve_residual(s, CurveId::R1, p)));
        c.expect(min_abs > 0.01, std::string(tag) + ": |rho1| on the arc reaches " +
                                     std::to_string(min_abs));
    }

    {  // tangency abscissa bound
        double max_w1 = 0.0;
        for (const auto& s : presets())
            if (const auto q = q_point(s)) max_w1 = std::max(max_w1, q->point.w1);
        c.expect(max_w1 > 0.0 && max_w1 < 6.0,
                 "tangency abscissa bound violated: " + std::to_string(max_w1));
    }

    {  // submersion family: critical points of the scalar curvature
        const auto s = make_space(1.0 / 6.0, 2);
        auto S = [&s](double x) { return scalar_curvature(s, submersion_metric(x)); };
        auto dS = [&](double x) { return (S(x + 1e-6) - S(x - 1e-6)) / 2e-6; };
        std::vector<double> roots;
        double prev_x = 0.2, prev_d = dS(prev_x);
        for (int i = 1; i <= 600; ++i) {
            const double x = 0.2 + (3.5 - 0.2) * i / 600.0;
            const double d = dS(x);
            if ((prev_d < 0.0) != (d < 0.0)) {
                double lo = prev_x, hi = x, dlo = prev_d;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double dm = dS(mid);
                    if ((dlo < 0.0) == (dm < 0.0)) {
                        lo = mid;
                        dlo = dm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev_x = x;
            prev_d = d;
        }
        c.expect(roots.size() == 2, "expected exactly two critical points, found " +
                                        std::to_string(roots.size()));
        if (roots.size() == 2) {
            c.expect_near(roots[0], 1.0, 1e-6, "first critical point");
            c.expect_near(roots[1], 2.0, 1e-6, "second critical point");
            auto d2S = [&](double x) {
                return (S(x + 1e-4) - 2.0 * S(x) + S(x - 1e-4)) / 1e-8;
            };
            c.expect(d2S(roots[0]) > 0.0, "x=1 is not a local minimum");
            c.expect(d2S(roots[1]) < 0.0, "x=2 is not a local maximum");
        }
    }
    return finish(10, "sign certificates", c, t0);
}

// ---------------------------------------------------------------- 11
double point_segment_distance(const std::array<double, 2>& p,
                              const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
    const double vx = b[0] - a[0], vy = b[1] - a[1];
    const double wx = p[0] - a[0], wy = p[1] - a[1];
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = p[0] - (a[0] + t * vx), dy = p[1] - (a[1] + t * vy);
    return std::hypot(dx, dy);
}

/// One-sided polyline deviation with a sliding search window; both curves
/// trace the same flow, so matching segments advance nearly monotonically.
double polyline_deviation(const std::vector<std::array<double, 2>>& probe,
                          const std::vector<std::array<double, 2>>& reference) {
    if (reference.size() < 2 || probe.empty()) return 1e300;
    double worst = 0.0;
    std::size_t cursor = 0;
    for (const auto& p : probe) {
        const std::size_t lo = cursor > 30 ? cursor - 30 : 0;
        const std::size_t hi = std::min(cursor + 600, reference.size() - 1);
        double best = 1e300;
        std::size_t best_j = cursor;
        for (std::size_t j = lo; j < hi; ++j) {
            const double d = point_segment_distance(p, reference[j], reference[j + 1]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j + 1 >= hi && hi < reference.size() - 1) {
            // Window may have clipped the true match; rescan globally.
            for (std::size_t j = 0; j + 1 < reference.size(); ++j) {
                const double d =
                    point_segment_distance(p, reference[j], reference[j + 1]);
                if (d < best) {
                    best = d;
                    best_j = j;
                }
            }
        }
        cursor = best_j;
        worst = std::max(worst, best);
    }
    return worst;
}

CriterionResult criterion_representation_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double w_end = 20.0;
    for (const auto& s : presets()) {
        for (int run = 0; run < 10; ++run) {
            const double w1 = 1.05 + 0.40 * uni(rng);
            const double w2 = w1 + 0.2 + (2.8 - w1 - 0.2) * uni(rng);
            char tag[64];
            std::snprintf(tag, sizeof tag, "a=%.6g run %d", s.a, run);

            // Full flow, stopped when the phase projection reaches w2 = w_end.
            IntegrationOptions opt_x;
            opt_x.t_max = 300.0;
            opt_x.rel_tol = 1e-10;
            opt_x.abs_tol = 1e-12;
            opt_x.state_cap = 1e8;
            opt_x.state_floor = 1e-6;
            opt_x.max_sample_spacing = 2e-4;
            EventSpec<3> reach;
            reach.fn = [w_end](const std::array<double, 3>& y) {
                return y[2] / y[1] - w_end;
            };
            reach.terminal = true;
            reach.direction = 1;
            const Metric3 m0 = normalize_volume(from_scale_invariant(PhasePoint{w1, w2}));
            const auto traj_x = integrate_x(s, m0, opt_x, {reach});
            if (traj_x.stop != StopReason::TerminalEvent) {
                c.expect(false, std::string(tag) + ": full flow never reached the cut (" +
                                    stop_reason_name(traj_x.stop) + ")");
                continue;
            }

            // Phase flow over the same arc.
            IntegrationOptions opt_w;
            opt_w.t_max = 500.0;
            opt_w.rel_tol = 1e-10;
            opt_w.abs_tol = 1e-12;
            opt_w.state_cap = 1e3;
            opt_w.max_sample_spacing = 5e-3;
            EventSpec<2> reach_w;
            reach_w.fn = [w_end](const std::array<double, 2>& y) { return y[1] - w_end; };
            reach_w.terminal = true;
            reach_w.direction = 1;
            const auto traj_w = integrate_w(s, PhasePoint{w1, w2}, opt_w, {reach_w});
            if (traj_w.stop != StopReason::TerminalEvent) {
                c.expect(false, std::string(tag) + ": phase flow never reached the cut (" +
                                    stop_reason_name(traj_w.stop) + ")");
                continue;
            }

            std::vector<std::array<double, 2>> curve_x, curve_w;
            curve_x.reserve(traj_x.samples.size());
            for (const auto& smp : traj_x.samples)
                curve_x.push_back({smp.y[2] / smp.y[0], smp.y[2] / smp.y[1]});
            curve_w.reserve(traj_w.samples.size());
            for (const auto& smp : traj_w.samples)
                curve_w.push_back({smp.y[0], smp.y[1]});

            const double dev = std::max(polyline_deviation(curve_w, curve_x),
                                        polyline_deviation(curve_x, curve_w));
            c.expect(dev <= 1e-5,
                     std::string(tag) + ": curves deviate by " + std::to_string(dev));
        }
    }
    return finish(11, "flow representation consistency", c, t0);
}

}  // namespace

std::vector<CriterionResult> run_verification(VerifyLevel level) {
    std::vector<CriterionResult> out;
    out.push_back(criterion_tangency_references());
    out.push_back(criterion_equilibrium_structure());
    if (level == VerifyLevel::Full) {
        out.push_back(criterion_sectional_sweep());
        out.push_back(criterion_ricci_sweep());
        out.push_back(criterion_dichotomy());
        out.push_back(criterion_wedge());
        out.push_back(criterion_conservation());
        out.push_back(criterion_tail());
    }
    out.push_back(criterion_transversality());
    out.push_back(criterion_certificates());
    if (level == VerifyLevel::Full)
        out.push_back(criterion_representation_consistency());
    return out;
}

std::string format_criterion_line(const CriterionResult& r, bool with_seconds) {
    char buf[160];
    if (with_seconds)
        std::snprintf(buf, sizeof buf, "[%2d] %s  %-42s (%d checks, %.2f s)", r.id,
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.checks, r.seconds);
    else
        std::snprintf(buf, sizeof buf, "[%2d] %s  %-42s (%d checks)", r.id,
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.checks);
    return buf;
}

}  // namespace wflow
