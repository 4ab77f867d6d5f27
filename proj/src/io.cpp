#include "wflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wflow {

double parse_number(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        if (slash == 0 || slash + 1 >= text.size() ||
            text.find('/', slash + 1) != std::string::npos)
            throw std::invalid_argument("malformed ratio: '" + text + "'");
        std::size_t used = 0;
        const double num = std::stod(text.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument("malformed ratio: '" + text + "'");
        const std::string den_text = text.substr(slash + 1);
        const double den = std::stod(den_text, &used);
        if (used != den_text.size() || den == 0.0)
            throw std::invalid_argument("malformed ratio: '" + text + "'");
        return num / den;
    }
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed number: '" + text + "'");
    }
    if (used != text.size()) throw std::invalid_argument("malformed number: '" + text + "'");
    return v;
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

namespace {

template <int N>
std::string csv_impl(const Trajectory<N>& traj, const std::string& labels) {
    std::ostringstream out;
    out << "t," << labels << "\n";
    for (const auto& smp : traj.samples) {
        out << format_double(smp.t);
        for (int i = 0; i < N; ++i) out << ',' << format_double(smp.y[i]);
        out << "\n";
    }
    return out.str();
}

template <int N>
json traj_json(const Trajectory<N>& traj) {
    json t = json::object();
    t["stop"] = stop_reason_name(traj.stop);
    t["accepted_steps"] = traj.accepted;
    t["rejected_steps"] = traj.rejected;
    t["t_end"] = traj.samples.empty() ? 0.0 : traj.samples.back().t;
    if (!traj.diagnostic.empty()) t["diagnostic"] = traj.diagnostic;
    json events = json::array();
    for (const auto& ev : traj.events) {
        json e = json::object();
        e["event_id"] = ev.event_id;
        e["t"] = ev.t;
        e["direction"] = ev.direction;
        json y = json::array();
        for (int i = 0; i < N; ++i) y.push_back(ev.y[i]);
        e["state"] = y;
        events.push_back(e);
    }
    t["events"] = events;
    t["n_samples"] = traj.samples.size();
    return t;
}

}  // namespace

std::string trajectory_csv(const Trajectory<2>& traj, const std::string& labels) {
    return csv_impl<2>(traj, labels);
}

std::string trajectory_csv(const Trajectory<3>& traj, const std::string& labels) {
    return csv_impl<3>(traj, labels);
}

json report_envelope(const SpaceParams& s, const std::string& kind, json payload) {
    json root = json::object();
    root["schema_version"] = 1;
    root["kind"] = kind;
    root["space"] = {{"a", s.a}, {"d", s.d}};
    root["payload"] = std::move(payload);
    return root;
}

json to_json(const PhasePoint& p) { return json{{"w1", p.w1}, {"w2", p.w2}}; }

json to_json(const Metric3& m) {
    return json{{"x1", m.x1}, {"x2", m.x2}, {"x3", m.x3}};
}

json to_json(const Trajectory<2>& traj) { return traj_json<2>(traj); }
json to_json(const Trajectory<3>& traj) { return traj_json<3>(traj); }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wflow
