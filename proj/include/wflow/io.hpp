#pragma once

#include <string>

#include <json.hpp>

#include "wflow/integrate.hpp"
#include "wflow/space.hpp"

namespace wflow {

using json = nlohmann::ordered_json;

/// Parse "p/q" as an exact ratio or fall back to strtod; throws
/// std::invalid_argument on malformed input.  Keeps "1/6"-style space
/// parameters exactly representable instead of forcing callers to spell
/// out 0.16666... by hand.
double parse_number(const std::string& text);

/// Shortest decimal form that round-trips a double.
std::string format_double(double v);

/// "t,w1,w2" / "t,x1,x2,x3" tables at full precision.
std::string trajectory_csv(const Trajectory<2>& traj, const std::string& labels = "w1,w2");
std::string trajectory_csv(const Trajectory<3>& traj,
                           const std::string& labels = "x1,x2,x3");

/// Report envelope shared by every machine-readable artifact:
/// {"schema_version": 1, "space": {"a":..,"d":..}, "payload": ...}.
json report_envelope(const SpaceParams& s, const std::string& kind, json payload);

json to_json(const PhasePoint& p);
json to_json(const Metric3& m);
json to_json(const Trajectory<2>& traj);
json to_json(const Trajectory<3>& traj);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace wflow
