#include "wflow/portrait.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "wflow/curvature.hpp"
#include "wflow/equilibria.hpp"
#include "wflow/integrate.hpp"

namespace wflow {

namespace {

json points_json(const std::vector<PhasePoint>& pts, bool simplex) {
    json arr = json::array();
    for (const auto& p : pts) {
        json row = json::array({p.w1, p.w2});
        arr.push_back(row);
    }
    if (!simplex) return arr;
    return arr;
}

/// Unit-volume representative mapped onto the plane x1+x2+x3 = 1 and then
/// into the equilateral triangle with vertices (0,0), (1,0), (1/2,
/// sqrt(3)/2) for x1, x2, x3 weight respectively.
std::array<double, 2> simplex_embed(const PhasePoint& p) {
    const Metric3 m = normalize_volume(from_scale_invariant(p));
    const double s = m.x1 + m.x2 + m.x3;
    const double b2 = m.x2 / s, b3 = m.x3 / s;
    return {b2 + 0.5 * b3, std::sqrt(3.0) / 2.0 * b3};
}

json simplex_json(const std::vector<PhasePoint>& pts) {
    json arr = json::array();
    for (const auto& p : pts) {
        const auto e = simplex_embed(p);
        arr.push_back(json::array({e[0], e[1]}));
    }
    return arr;
}

json curve_entry(const SpaceParams& s, CurveId id, const PortraitSpec& spec) {
    json entry = json::object();
    entry["id"] = curve_name(id);
    json segments = json::array();

    auto add_segment = [&](CurveBranch branch, const char* label) {
        const double lo = std::max(spec.w1_lo, 1e-4);
        const double hi = (id == CurveId::C2) ? spec.w2_hi : spec.w1_hi;
        const auto sample = sample_boundary_curve(s, id, branch, lo, hi, spec.curve_samples);
        // Split at skipped abscissae so plots do not bridge gaps.
        json seg = json::array();
        std::vector<PhasePoint> seg_pts;
        auto flush = [&]() {
            if (seg_pts.size() >= 2) {
                json piece = json::object();
                piece["branch"] = label;
                piece["points"] = points_json(seg_pts, false);
                if (spec.simplex) piece["simplex"] = simplex_json(seg_pts);
                segments.push_back(piece);
            }
            seg_pts.clear();
        };
        double prev_u = -1.0;
        std::size_t k = 0;
        for (const auto& p : sample.points) {
            const double u = (id == CurveId::C2) ? p.w2 : p.w1;
            while (k < sample.skipped.size() && sample.skipped[k] < u) {
                if (sample.skipped[k] > prev_u) flush();
                ++k;
            }
            if (p.w2 >= spec.w2_lo * 0.5 && p.w2 <= spec.w2_hi * 2.0) {
                seg_pts.push_back(p);
            } else {
                flush();
            }
            prev_u = u;
        }
        flush();
    };

    const bool two_branches = (id == CurveId::R1 || id == CurveId::R2 || id == CurveId::R3);
    if (two_branches) {
        add_segment(CurveBranch::Upper, "upper");
        add_segment(CurveBranch::Lower, "lower");
    } else {
        add_segment(CurveBranch::Auto, "main");
    }
    entry["segments"] = segments;
    return entry;
}

}  // namespace

json build_portrait(const PortraitSpec& spec) {
    const SpaceParams& s = spec.space;
    json payload = json::object();
    payload["window"] = {{"w1", {spec.w1_lo, spec.w1_hi}}, {"w2", {spec.w2_lo, spec.w2_hi}}};

    json curves = json::array();
    for (CurveId id :
         {CurveId::C1, CurveId::C2, CurveId::C3, CurveId::S1, CurveId::S2, CurveId::S3,
          CurveId::R1, CurveId::R2, CurveId::R3, CurveId::ScalarCurve, CurveId::OmegaNull,
          CurveId::LambdaNull})
        curves.push_back(curve_entry(s, id, spec));
    payload["curves"] = curves;

    json eqs = json::array();
    if (s.degenerate()) {
        // All four coincide at (1,1); emit the merged point once.
        const auto rep = classify_equilibrium(s, PhasePoint{1.0, 1.0});
        json e = json::object();
        e["name"] = "E0";
        e["location"] = to_json(rep.location);
        e["class"] = equilibrium_class_name(rep.cls);
        e["eigenvalues"] = json::array({rep.eig.re1, rep.eig.re2});
        if (spec.simplex) {
            const auto emb = simplex_embed(rep.location);
            e["simplex"] = json::array({emb[0], emb[1]});
        }
        eqs.push_back(e);
    } else {
        const auto reports = equilibrium_reports(s);
        const char* names[4] = {"E0", "E1", "E2", "E3"};
        for (int i = 0; i < 4; ++i) {
            json e = json::object();
            e["name"] = names[i];
            e["location"] = to_json(reports[i].location);
            e["class"] = equilibrium_class_name(reports[i].cls);
            e["eigenvalues"] = json::array({reports[i].eig.re1, reports[i].eig.re2});
            if (reports[i].eig.complex_pair()) e["imag"] = reports[i].eig.imag;
            if (spec.simplex) {
                const auto emb = simplex_embed(reports[i].location);
                e["simplex"] = json::array({emb[0], emb[1]});
            }
            eqs.push_back(e);
        }
    }
    payload["equilibria"] = eqs;

    json specials = json::array();
    {
        const auto pts = special_points(s);
        const char* names[3] = {"P1", "P2", "P3"};
        for (int i = 0; i < 3; ++i) {
            json e = json::object();
            e["name"] = names[i];
            e["location"] = to_json(pts[i]);
            specials.push_back(e);
        }
    }
    payload["special_points"] = specials;

    if (const auto q = q_point(s)) {
        json e = json::object();
        e["t_star"] = q->t_star;
        e["location"] = to_json(q->point);
        payload["q_point"] = e;
    }

    if (std::fabs(s.a - 1.0 / 6.0) <= 1e-14) {
        // Invariant line 1/w1 + 1/w2 = 1 of the canonical-structure locus.
        std::vector<PhasePoint> pts;
        const int n = spec.curve_samples;
        for (int i = 0; i < n; ++i) {
            const double w1 = 1.0 + 1e-3 + (spec.w1_hi - 1.0 - 1e-3) * i / (n - 1);
            const double w2 = w1 / (w1 - 1.0);
            if (w2 <= spec.w2_hi * 2.0) pts.push_back({w1, w2});
        }
        json e = json::object();
        e["id"] = "kahler";
        e["points"] = points_json(pts, false);
        if (spec.simplex) e["simplex"] = simplex_json(pts);
        payload["kahler_line"] = e;
    }

    json trajs = json::array();
    if (spec.traj_per_axis > 0) {
        IntegrationOptions opt;
        opt.t_max = spec.horizon;
        opt.rel_tol = 1e-8;
        opt.abs_tol = 1e-10;
        opt.state_cap = std::max(spec.w1_hi, spec.w2_hi) * 10.0;
        opt.max_sample_spacing = (spec.w1_hi - spec.w1_lo) / 200.0;
        for (int i = 0; i < spec.traj_per_axis; ++i) {
            for (int j = 0; j < spec.traj_per_axis; ++j) {
                const double w1 = spec.w1_lo + (spec.w1_hi - spec.w1_lo) * (i + 0.7) /
                                                   (spec.traj_per_axis + 0.4);
                const double w2 = spec.w2_lo + (spec.w2_hi - spec.w2_lo) * (j + 0.7) /
                                                   (spec.traj_per_axis + 0.4);
                const auto traj = integrate_w(s, PhasePoint{w1, w2}, opt);
                std::vector<PhasePoint> pts;
                pts.reserve(traj.samples.size());
                for (const auto& smp : traj.samples)
                    pts.push_back({smp.y[0], smp.y[1]});
                json e = json::object();
                e["start"] = to_json(PhasePoint{w1, w2});
                e["stop"] = stop_reason_name(traj.stop);
                e["points"] = points_json(pts, false);
                if (spec.simplex) e["simplex"] = simplex_json(pts);
                trajs.push_back(e);
            }
        }
    }
    payload["trajectories"] = trajs;

    return report_envelope(s, "portrait", payload);
}

namespace {

struct Mapper {
    double w1_lo, w1_hi, w2_lo, w2_hi;
    double px(double w1) const { return (w1 - w1_lo) / (w1_hi - w1_lo) * 940.0 + 40.0; }
    double py(double w2) const { return 980.0 - (w2 - w2_lo) / (w2_hi - w2_lo) * 940.0; }
    bool inside(double w1, double w2) const {
        return w1 >= w1_lo && w1 <= w1_hi && w2 >= w2_lo && w2 <= w2_hi;
    }
};

void polyline(std::ostringstream& out, const Mapper& map, const json& pts,
              const std::string& style) {
    bool open = false;
    std::ostringstream path;
    int emitted = 0;
    for (const auto& p : pts) {
        const double w1 = p[0].get<double>(), w2 = p[1].get<double>();
        if (!map.inside(w1, w2)) {
            if (open && emitted >= 2) {
                out << "<polyline points=\"" << path.str() << "\" " << style << "/>\n";
            }
            path.str("");
            open = false;
            emitted = 0;
            continue;
        }
        path << map.px(w1) << ',' << map.py(w2) << ' ';
        open = true;
        ++emitted;
    }
    if (open && emitted >= 2)
        out << "<polyline points=\"" << path.str() << "\" " << style << "/>\n";
}

}  // namespace

std::string render_svg(const json& bundle) {
    const json& payload = bundle.at("payload");
    const auto& win = payload.at("window");
    Mapper map{win.at("w1")[0].get<double>(), win.at("w1")[1].get<double>(),
               win.at("w2")[0].get<double>(), win.at("w2")[1].get<double>()};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
    out << "<rect x=\"40\" y=\"40\" width=\"940\" height=\"940\" fill=\"white\" "
           "stroke=\"#444\"/>\n";

    static const std::map<std::string, std::string> styles = {
        {"c1", "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\""},
        {"c2", "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\""},
        {"c3", "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\""},
        {"s1", "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\""},
        {"s2", "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\""},
        {"s3", "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\""},
        {"r1", "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\""},
        {"r2", "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\""},
        {"r3", "fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\""},
        {"s", "fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"2\""},
        {"omega", "fill=\"none\" stroke=\"#9467bd\" stroke-width=\"1\" "
                  "stroke-dasharray=\"6 3\""},
        {"lambda", "fill=\"none\" stroke=\"#9467bd\" stroke-width=\"1\" "
                   "stroke-dasharray=\"6 3\""},
    };

    for (const auto& curve : payload.at("curves")) {
        const std::string id = curve.at("id").get<std::string>();
        const auto it = styles.find(id);
        const std::string style =
            it != styles.end() ? it->second : "fill=\"none\" stroke=\"black\"";
        for (const auto& seg : curve.at("segments"))
            polyline(out, map, seg.at("points"), style);
    }

    if (payload.contains("kahler_line"))
        polyline(out, map, payload.at("kahler_line").at("points"),
                 "fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" "
                 "stroke-dasharray=\"2 2\"");

    for (const auto& traj : payload.at("trajectories"))
        polyline(out, map, traj.at("points"),
                 "fill=\"none\" stroke=\"#555555\" stroke-width=\"0.8\"");

    for (const auto& eq : payload.at("equilibria")) {
        const double w1 = eq.at("location").at("w1").get<double>();
        const double w2 = eq.at("location").at("w2").get<double>();
        if (!map.inside(w1, w2)) continue;
        out << "<circle cx=\"" << map.px(w1) << "\" cy=\"" << map.py(w2)
            << "\" r=\"6\" fill=\"black\"/>\n";
        out << "<text x=\"" << map.px(w1) + 8 << "\" y=\"" << map.py(w2) - 8
            << "\" font-size=\"18\">" << eq.at("name").get<std::string>() << "</text>\n";
    }
    for (const auto& sp : payload.at("special_points")) {
        const double w1 = sp.at("location").at("w1").get<double>();
        const double w2 = sp.at("location").at("w2").get<double>();
        if (!map.inside(w1, w2)) continue;
        out << "<rect x=\"" << map.px(w1) - 4 << "\" y=\"" << map.py(w2) - 4
            << "\" width=\"8\" height=\"8\" fill=\"#8c564b\"/>\n";
        out << "<text x=\"" << map.px(w1) + 8 << "\" y=\"" << map.py(w2) + 16
            << "\" font-size=\"18\">" << sp.at("name").get<std::string>() << "</text>\n";
    }
    if (payload.contains("q_point")) {
        const double w1 = payload.at("q_point").at("location").at("w1").get<double>();
        const double w2 = payload.at("q_point").at("location").at("w2").get<double>();
        if (map.inside(w1, w2)) {
            out << "<circle cx=\"" << map.px(w1) << "\" cy=\"" << map.py(w2)
                << "\" r=\"5\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << map.px(w1) + 8 << "\" y=\"" << map.py(w2) - 8
                << "\" font-size=\"18\">Q</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace wflow
