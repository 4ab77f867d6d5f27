#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wflow/asymptotics.hpp"
#include "wflow/curvature.hpp"
#include "wflow/equilibria.hpp"
#include "wflow/fields.hpp"
#include "wflow/integrate.hpp"
#include "wflow/io.hpp"
#include "wflow/portrait.hpp"
#include "wflow/space.hpp"
#include "wflow/sweep.hpp"
#include "wflow/verify.hpp"

namespace {

using wflow::json;

constexpr int kExitBadInput = 2;
constexpr int kExitIntegrator = 3;
constexpr int kExitVerification = 4;

struct CommonOpts {
    std::string a_text = "1/8";
    int d = 4;
    double rtol = 1e-10;
    double atol = 1e-12;
    double tmax = 100.0;
    std::string out;
    std::string format = "json";
    int jobs = 0;
};

std::vector<double> parse_tuple(const std::string& text, std::size_t n,
                                const char* what) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(wflow::parse_number(item));
    if (vals.size() != n)
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(n) +
                                    " comma-separated values, got '" + text + "'");
    return vals;
}

void emit(const CommonOpts& common, const std::string& content) {
    if (common.out.empty())
        std::cout << content;
    else
        wflow::write_text_file(common.out, content);
}

void emit_json(const CommonOpts& common, const json& doc) {
    emit(common, doc.dump(2) + "\n");
}

/// Apply a JSON config file (flat object of option defaults) before the
/// command line is parsed, so flags still win.
void apply_config(const std::string& path, CommonOpts& common) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    json cfg = json::parse(in);
    if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");
    if (cfg.contains("a"))
        common.a_text = cfg["a"].is_string() ? cfg["a"].get<std::string>()
                                             : wflow::format_double(cfg["a"].get<double>());
    if (cfg.contains("d")) common.d = cfg["d"].get<int>();
    if (cfg.contains("rtol")) common.rtol = cfg["rtol"].get<double>();
    if (cfg.contains("atol")) common.atol = cfg["atol"].get<double>();
    if (cfg.contains("tmax")) common.tmax = cfg["tmax"].get<double>();
    if (cfg.contains("format")) common.format = cfg["format"].get<std::string>();
    if (cfg.contains("jobs")) common.jobs = cfg["jobs"].get<int>();
    if (cfg.contains("out")) common.out = cfg["out"].get<std::string>();
}

const char* sign_name(wflow::SignClass s) {
    switch (s) {
        case wflow::SignClass::Positive: return "positive";
        case wflow::SignClass::Boundary: return "boundary";
        case wflow::SignClass::Mixed: return "mixed";
    }
    return "?";
}

json region_flags(const wflow::SpaceParams& s, const wflow::PhasePoint& p) {
    json out = json::object();
    if (s.classical_preset())
        out["sectional"] =
            wflow::region_contains(s, wflow::Region::SectionalPositive, p);
    out["ricci"] = wflow::region_contains(s, wflow::Region::RicciPositive, p);
    out["scalar"] = wflow::region_contains(s, wflow::Region::ScalarPositive, p);
    return out;
}

int cmd_classify(const CommonOpts& common, const std::string& w_text,
                 const std::string& x_text) {
    const auto space = wflow::make_space(wflow::parse_number(common.a_text), common.d);
    wflow::Metric3 m;
    if (!x_text.empty() && !w_text.empty())
        throw std::invalid_argument("give either --w or --x, not both");
    if (!x_text.empty()) {
        const auto v = parse_tuple(x_text, 3, "--x");
        m = wflow::Metric3{v[0], v[1], v[2]};
    } else if (!w_text.empty()) {
        const auto v = parse_tuple(w_text, 2, "--w");
        m = wflow::from_scale_invariant(wflow::PhasePoint{v[0], v[1]});
    } else {
        throw std::invalid_argument("classify needs --w w1,w2 or --x x1,x2,x3");
    }
    wflow::validate(m);
    const auto p = wflow::to_scale_invariant(m);
    const auto sig = wflow::classify_metric(space, m);
    const auto b = wflow::boundary_residuals(space, p);
    const auto ricci = wflow::principal_ricci(space, m);

    json payload = json::object();
    payload["metric"] = wflow::to_json(m);
    payload["phase_point"] = wflow::to_json(p);
    json sigs = json::object();
    if (sig.sectional)
        sigs["sectional"] = sign_name(*sig.sectional);
    else
        sigs["sectional"] = nullptr;
    sigs["ricci"] = sign_name(sig.ricci);
    sigs["scalar"] = sign_name(sig.scalar);
    sigs["kahler"] = sig.kahler;
    payload["signature"] = sigs;
    payload["principal_ricci"] = json::array({ricci[0], ricci[1], ricci[2]});
    payload["scalar_curvature"] = wflow::scalar_curvature(space, m);
    json res = json::object();
    res["l"] = json::array({b.l[0], b.l[1], b.l[2]});
    res["rho"] = json::array({b.rho[0], b.rho[1], b.rho[2]});
    res["scalar_expr"] = b.scalar_expr;
    payload["boundary_residuals"] = res;
    payload["regions"] = region_flags(space, p);
    const auto canon = wflow::canonicalize_to_omega(p);
    payload["canonical_point"] = wflow::to_json(canon.first);
    emit_json(common, wflow::report_envelope(space, "classify", payload));
    return 0;
}

int cmd_integrate(const CommonOpts& common, const std::string& system,
                  const std::string& start_text, const std::string& events_name,
                  double cap, double floor, double spacing) {
    const auto space = wflow::make_space(wflow::parse_number(common.a_text), common.d);
    wflow::IntegrationOptions opt;
    opt.rel_tol = common.rtol;
    opt.abs_tol = common.atol;
    opt.t_max = common.tmax;
    opt.state_cap = cap;
    opt.state_floor = floor;
    opt.max_sample_spacing = spacing;

    std::optional<wflow::Region> region;
    if (events_name == "sectional") region = wflow::Region::SectionalPositive;
    else if (events_name == "ricci") region = wflow::Region::RicciPositive;
    else if (events_name == "scalar") region = wflow::Region::ScalarPositive;
    else if (events_name != "none")
        throw std::invalid_argument("unknown event set: " + events_name);

    auto failed = [](wflow::StopReason r) {
        return r == wflow::StopReason::StepFloor || r == wflow::StopReason::MaxSteps ||
               r == wflow::StopReason::NonFinite;
    };

    if (system == "w") {
        const auto v = parse_tuple(start_text, 2, "--start");
        std::vector<wflow::EventSpec<2>> events;
        if (region) {
            wflow::EventSpec<2> ev;
            const auto reg = *region;
            ev.fn = [space, reg](const std::array<double, 2>& y) {
                return wflow::region_margin(space, reg, wflow::PhasePoint{y[0], y[1]});
            };
            events.push_back(std::move(ev));
        }
        const auto traj =
            wflow::integrate_w(space, wflow::PhasePoint{v[0], v[1]}, opt, events);
        if (common.format == "csv") {
            emit(common, wflow::trajectory_csv(traj));
            std::cerr << "stop: " << wflow::stop_reason_name(traj.stop)
                      << ", t_end: " << traj.t_end()
                      << ", events: " << traj.events.size() << "\n";
        } else {
            json payload = wflow::to_json(traj);
            json rows = json::array();
            for (const auto& smp : traj.samples)
                rows.push_back(json::array({smp.t, smp.y[0], smp.y[1]}));
            payload["samples"] = rows;
            emit_json(common, wflow::report_envelope(space, "trajectory-w", payload));
        }
        return failed(traj.stop) ? kExitIntegrator : 0;
    }
    if (system == "x3") {
        const auto v = parse_tuple(start_text, 3, "--start");
        const auto traj =
            wflow::integrate_x(space, wflow::Metric3{v[0], v[1], v[2]}, opt);
        if (common.format == "csv") {
            emit(common, wflow::trajectory_csv(traj));
            std::cerr << "stop: " << wflow::stop_reason_name(traj.stop)
                      << ", t_end: " << traj.t_end() << "\n";
        } else {
            json payload = wflow::to_json(traj);
            json rows = json::array();
            for (const auto& smp : traj.samples)
                rows.push_back(json::array({smp.t, smp.y[0], smp.y[1], smp.y[2]}));
            payload["samples"] = rows;
            emit_json(common, wflow::report_envelope(space, "trajectory-x", payload));
        }
        return failed(traj.stop) ? kExitIntegrator : 0;
    }
    if (system == "x2") {
        const auto v = parse_tuple(start_text, 2, "--start");
        const auto traj = wflow::integrate_x_reduced(space, v[0], v[1], opt);
        if (common.format == "csv") {
            emit(common, wflow::trajectory_csv(traj, "x1,x2"));
            std::cerr << "stop: " << wflow::stop_reason_name(traj.stop)
                      << ", t_end: " << traj.t_end() << "\n";
        } else {
            json payload = wflow::to_json(traj);
            json rows = json::array();
            for (const auto& smp : traj.samples)
                rows.push_back(json::array({smp.t, smp.y[0], smp.y[1]}));
            payload["samples"] = rows;
            emit_json(common, wflow::report_envelope(space, "trajectory-x2", payload));
        }
        return failed(traj.stop) ? kExitIntegrator : 0;
    }
    throw std::invalid_argument("unknown system: " + system + " (use w, x2 or x3)");
}

int cmd_sweep(const CommonOpts& common, const std::string& region_name,
              const std::string& window_text, const std::string& grid_text,
              double margin, bool wedge, bool outside_ok) {
    const auto space = wflow::make_space(wflow::parse_number(common.a_text), common.d);
    wflow::SweepSpec spec;
    spec.space = space;
    if (region_name == "sectional") spec.region = wflow::Region::SectionalPositive;
    else if (region_name == "ricci") spec.region = wflow::Region::RicciPositive;
    else if (region_name == "scalar") spec.region = wflow::Region::ScalarPositive;
    else throw std::invalid_argument("unknown region: " + region_name);

    wflow::default_window(spec.region, space, spec.w1_lo, spec.w1_hi, spec.w2_lo,
                          spec.w2_hi);
    if (!window_text.empty()) {
        const auto v = parse_tuple(window_text, 4, "--window");
        spec.w1_lo = v[0];
        spec.w1_hi = v[1];
        spec.w2_lo = v[2];
        spec.w2_hi = v[3];
    }
    if (!grid_text.empty()) {
        const auto v = parse_tuple(grid_text, 2, "--grid");
        spec.n1 = static_cast<int>(v[0]);
        spec.n2 = static_cast<int>(v[1]);
    }
    spec.margin = margin;
    spec.wedge_only = wedge;
    spec.require_inside = !outside_ok;
    spec.options.rel_tol = common.rtol;
    spec.options.abs_tol = common.atol;
    spec.options.t_max = common.tmax;
    spec.jobs = common.jobs;

    const auto result = wflow::run_sweep(spec);

    if (common.format == "csv") {
        std::ostringstream out;
        out << "w1,w2,exited,exit_time,exit_curve,returned,entered,inside_at_end,stop\n";
        for (const auto& rec : result.records) {
            out << wflow::format_double(rec.start.w1) << ','
                << wflow::format_double(rec.start.w2) << ',' << (rec.exit_time ? 1 : 0)
                << ',' << (rec.exit_time ? wflow::format_double(*rec.exit_time) : "")
                << ',' << (rec.exit_curve ? wflow::curve_name(*rec.exit_curve) : "")
                << ',' << (rec.returned ? 1 : 0) << ',' << (rec.entered ? 1 : 0) << ','
                << (rec.inside_at_end ? 1 : 0) << ','
                << wflow::stop_reason_name(rec.stop) << "\n";
        }
        emit(common, out.str());
    } else {
        json payload = json::object();
        payload["region"] = region_name;
        payload["window"] = json::array({spec.w1_lo, spec.w1_hi, spec.w2_lo, spec.w2_hi});
        payload["grid"] = json::array({spec.n1, spec.n2});
        payload["margin"] = spec.margin;
        payload["horizon"] = spec.options.t_max;
        payload["n_started"] = result.n_started;
        payload["n_exited"] = result.n_exited;
        payload["n_returned"] = result.n_returned;
        payload["n_errors"] = result.n_errors;
        payload["max_exit_time"] = result.max_exit_time;
        json rows = json::array();
        for (const auto& rec : result.records) {
            json row = json::object();
            row["start"] = wflow::to_json(rec.start);
            if (rec.exit_time) {
                row["exit_time"] = *rec.exit_time;
                row["exit_point"] = wflow::to_json(*rec.exit_point);
                row["exit_curve"] = wflow::curve_name(*rec.exit_curve);
            }
            row["returned"] = rec.returned;
            row["entered"] = rec.entered;
            row["inside_at_end"] = rec.inside_at_end;
            row["min_margin"] = rec.min_margin;
            row["stop"] = wflow::stop_reason_name(rec.stop);
            if (!rec.error.empty()) row["error"] = rec.error;
            rows.push_back(row);
        }
        payload["records"] = rows;
        emit_json(common, wflow::report_envelope(space, "sweep", payload));
    }
    std::cerr << "sweep: " << result.n_started << " starts, " << result.n_exited
              << " exits, " << result.n_returned << " returns, " << result.n_errors
              << " errors\n";
    return result.n_errors == 0 ? 0 : kExitIntegrator;
}

int cmd_equilibria(const CommonOpts& common) {
    const auto space = wflow::make_space(wflow::parse_number(common.a_text), common.d);
    json payload = json::object();
    payload["degenerate"] = space.degenerate();
    if (space.degenerate()) {
        payload["note"] = "a = 1/4: the four singular points coincide at (1, 1)";
        emit_json(common, wflow::report_envelope(space, "equilibria", payload));
        return 0;
    }
    payload["q"] = wflow::q_ratio(space);
    const auto reports = wflow::equilibrium_reports(space);
    const char* names[4] = {"E0", "E1", "E2", "E3"};
    json eqs = json::array();
    for (int i = 0; i < 4; ++i) {
        json e = json::object();
        e["name"] = names[i];
        e["location"] = wflow::to_json(reports[i].location);
        e["class"] = wflow::equilibrium_class_name(reports[i].cls);
        e["eigenvalues"] = json::array({reports[i].eig.re1, reports[i].eig.re2});
        if (reports[i].eig.complex_pair()) e["imag"] = reports[i].eig.imag;
        e["einstein_metric"] = wflow::to_json(reports[i].einstein);
        e["einstein_defect"] = reports[i].einstein_defect;
        eqs.push_back(e);
    }
    payload["equilibria"] = eqs;
    json specials = json::array();
    const auto pts = wflow::special_points(space);
    const char* snames[3] = {"P1", "P2", "P3"};
    for (int i = 0; i < 3; ++i)
        specials.push_back(json{{"name", snames[i]}, {"location", wflow::to_json(pts[i])}});
    payload["special_points"] = specials;
    if (const auto q = wflow::q_point(space)) {
        json e = json::object();
        e["t_star"] = q->t_star;
        e["location"] = wflow::to_json(q->point);
        e["curve_residual"] = q->curve_residual;
        payload["q_point"] = e;
    }
    emit_json(common, wflow::report_envelope(space, "equilibria", payload));
    return 0;
}

int cmd_portrait(const CommonOpts& common, const std::string& window_text, int samples,
                 int traj, bool simplex) {
    const auto space = wflow::make_space(wflow::parse_number(common.a_text), common.d);
    wflow::PortraitSpec spec;
    spec.space = space;
    if (!window_text.empty()) {
        const auto v = parse_tuple(window_text, 4, "--window");
        spec.w1_lo = v[0];
        spec.w1_hi = v[1];
        spec.w2_lo = v[2];
        spec.w2_hi = v[3];
    }
    spec.curve_samples = samples;
    spec.traj_per_axis = traj;
    spec.horizon = common.tmax;
    spec.simplex = simplex;
    const json bundle = wflow::build_portrait(spec);
    if (common.format == "svg")
        emit(common, wflow::render_svg(bundle));
    else
        emit_json(common, bundle);
    return 0;
}

int cmd_verify(const CommonOpts& common, const std::string& level_name) {
    wflow::VerifyLevel level;
    if (level_name == "fast") level = wflow::VerifyLevel::Fast;
    else if (level_name == "full") level = wflow::VerifyLevel::Full;
    else throw std::invalid_argument("unknown level: " + level_name);

    const auto results = wflow::run_verification(level);
    bool all_pass = true;
    double total_seconds = 0.0;
    json rows = json::array();
    for (const auto& r : results) {
        // Timing is run-dependent; keep stdout and the report file
        // byte-identical across invocations and put it on stderr.
        std::cout << wflow::format_criterion_line(r, false) << "\n";
        if (!r.detail.empty()) std::cout << r.detail;
        all_pass = all_pass && r.pass;
        total_seconds += r.seconds;
        json row = json::object();
        row["id"] = r.id;
        row["name"] = r.name;
        row["pass"] = r.pass;
        row["checks"] = r.checks;
        row["failures"] = r.failures;
        if (!r.detail.empty()) row["detail"] = r.detail;
        rows.push_back(row);
    }
    std::cerr << "verify: " << results.size() << " criteria in " << std::fixed
              << std::setprecision(2) << total_seconds << " s\n";
    std::cout << (all_pass ? "VERIFICATION PASSED" : "VERIFICATION FAILED") << "\n";
    if (!common.out.empty()) {
        json payload = json::object();
        payload["level"] = level_name;
        payload["pass"] = all_pass;
        payload["criteria"] = rows;
        json root = json::object();
        root["schema_version"] = 1;
        root["kind"] = "verification";
        root["payload"] = payload;
        wflow::write_text_file(common.out, root.dump(2) + "\n");
    }
    return all_pass ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature flow laboratory for three-summand homogeneous spaces"};
    app.require_subcommand(1);

    CommonOpts common;
    // Config values act as defaults, so apply them before CLI11 parses.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config(argv[i + 1], common);
            } catch (const std::exception& ex) {
                std::cerr << "error: " << ex.what() << "\n";
                return kExitBadInput;
            }
        }
    }
    std::string config_path;
    app.add_option("--config", config_path, "JSON file with option defaults");

    auto add_common = [&common](CLI::App* cmd) {
        cmd->add_option("--a", common.a_text, "structure constant, ratio or decimal");
        cmd->add_option("--d", common.d, "isotropy summand dimension");
        cmd->add_option("--rtol", common.rtol, "relative tolerance");
        cmd->add_option("--atol", common.atol, "absolute tolerance");
        cmd->add_option("--tmax", common.tmax, "time horizon");
        cmd->add_option("--out", common.out, "output file (default stdout)");
        cmd->add_option("--format", common.format, "output format: json, csv or svg");
        cmd->add_option("--jobs", common.jobs, "worker threads (0 = all cores)");
    };

    auto* classify = app.add_subcommand("classify", "curvature signature of one metric");
    std::string w_text, x_text;
    classify->add_option("--w", w_text, "phase point w1,w2");
    classify->add_option("--x", x_text, "metric x1,x2,x3");
    add_common(classify);

    auto* integrate = app.add_subcommand("integrate", "follow one trajectory");
    std::string system = "w", start_text, events_name = "none";
    double cap = 1e6, floor = 0.0, spacing = 0.0;
    integrate->add_option("--system", system, "w, x2 (unit volume) or x3 (full)");
    integrate->add_option("--start", start_text, "start state, comma separated")
        ->required();
    integrate->add_option("--events", events_name,
                          "boundary crossings to record: none, sectional, ricci, scalar");
    integrate->add_option("--cap", cap, "stop when any component exceeds this");
    integrate->add_option("--floor", floor, "stop when any component drops below this");
    integrate->add_option("--spacing", spacing, "dense resampling spacing (0 = off)");
    add_common(integrate);

    auto* sweep = app.add_subcommand("sweep", "lattice of region-escape experiments");
    std::string region_name = "sectional", window_text, grid_text;
    double margin = 1e-2;
    bool wedge = false, outside_ok = false;
    sweep->add_option("--region", region_name, "sectional, ricci or scalar");
    sweep->add_option("--window", window_text, "w1_lo,w1_hi,w2_lo,w2_hi");
    sweep->add_option("--grid", grid_text, "n1,n2 lattice counts");
    sweep->add_option("--margin", margin, "clearance from sector walls and boundary");
    sweep->add_flag("--wedge", wedge, "restrict starts to w2 < w1/(w1-1)");
    sweep->add_flag("--outside-ok", outside_ok, "allow starts outside the region");
    add_common(sweep);

    auto* equilibria = app.add_subcommand("equilibria", "singular point report");
    add_common(equilibria);

    auto* portrait = app.add_subcommand("portrait", "phase portrait bundle");
    std::string p_window;
    int p_samples = 600, p_traj = 4;
    bool simplex = false;
    portrait->add_option("--window", p_window, "w1_lo,w1_hi,w2_lo,w2_hi");
    portrait->add_option("--samples", p_samples, "points per curve");
    portrait->add_option("--traj", p_traj, "trajectory lattice per axis (0 = none)");
    portrait->add_flag("--simplex", simplex, "also emit unit-volume simplex coordinates");
    add_common(portrait);

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    std::string level_name = "full";
    verify->add_option("--level", level_name, "fast or full");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (common.format != "json" && common.format != "csv" && common.format != "svg")
            throw std::invalid_argument("unknown format: " + common.format +
                                        " (use json, csv or svg)");
        if (classify->parsed()) return cmd_classify(common, w_text, x_text);
        if (integrate->parsed())
            return cmd_integrate(common, system, start_text, events_name, cap, floor,
                                 spacing);
        if (sweep->parsed())
            return cmd_sweep(common, region_name, window_text, grid_text, margin, wedge,
                             outside_ok);
        if (equilibria->parsed()) return cmd_equilibria(common);
        if (portrait->parsed())
            return cmd_portrait(common, p_window, p_samples, p_traj, simplex);
        if (verify->parsed()) return cmd_verify(common, level_name);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitIntegrator;
    }
    return 0;
}
