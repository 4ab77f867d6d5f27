#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "wflow/io.hpp"
#include "wflow/portrait.hpp"
#include "wflow/sweep.hpp"

using namespace wflow;

namespace {
const SpaceParams W12 = make_space(1.0 / 8.0, 4);
}

TEST_CASE("grid generation respects the filters") {
    SweepSpec spec;
    spec.space = W12;
    spec.region = Region::SectionalPositive;
    spec.w1_lo = 1.0;
    spec.w1_hi = 1.35;
    spec.w2_lo = 1.0;
    spec.w2_hi = 3.0;
    spec.n1 = 12;
    spec.n2 = 12;
    spec.margin = 1e-2;
    const auto grid = sweep_grid(spec);
    CHECK(grid.size() > 10);
    for (const auto& p : grid) {
        CHECK(p.w1 - 1.0 >= spec.margin);
        CHECK(p.w2 - 1.0 >= spec.margin);
        CHECK((p.w2 - p.w1) / std::sqrt(2.0) >= spec.margin);
        CHECK(region_margin(W12, Region::SectionalPositive, p) >= spec.margin);
    }
    // Without the membership requirement more nodes survive.
    SweepSpec open = spec;
    open.require_inside = false;
    CHECK(sweep_grid(open).size() > grid.size());
}

TEST_CASE("wedge filter") {
    SweepSpec spec;
    spec.space = make_space(1.0 / 6.0, 2);
    spec.region = Region::RicciPositive;
    spec.w1_lo = 1.05;
    spec.w1_hi = 1.9;
    spec.w2_lo = 1.05;
    spec.w2_hi = 12.0;
    spec.n1 = 10;
    spec.n2 = 30;
    spec.margin = 1e-2;
    spec.wedge_only = true;
    spec.require_inside = false;
    const auto grid = sweep_grid(spec);
    CHECK(!grid.empty());
    for (const auto& p : grid) CHECK(p.w2 * (p.w1 - 1.0) < p.w1);
}

TEST_CASE("escape sweep over the sectional region") {
    SweepSpec spec;
    spec.space = W12;
    spec.region = Region::SectionalPositive;
    spec.w1_lo = 1.0;
    spec.w1_hi = 1.35;
    spec.w2_lo = 1.0;
    spec.w2_hi = 3.0;
    spec.n1 = 6;
    spec.n2 = 6;
    spec.margin = 1e-2;
    spec.options.t_max = 80.0;
    spec.options.state_cap = 1e7;
    const auto result = run_sweep(spec);
    REQUIRE(!result.records.empty());
    for (const auto& rec : result.records) {
        CHECK(rec.error.empty());
        CHECK(rec.exit_time.has_value());
        CHECK_FALSE(rec.returned);
        REQUIRE(rec.exit_curve.has_value());
        const bool on_s = *rec.exit_curve == CurveId::S1 ||
                          *rec.exit_curve == CurveId::S2 ||
                          *rec.exit_curve == CurveId::S3;
        CHECK(on_s);
    }
}

TEST_CASE("sweep results do not depend on the worker count") {
    SweepSpec spec;
    spec.space = W12;
    spec.region = Region::SectionalPositive;
    spec.w1_lo = 1.0;
    spec.w1_hi = 1.35;
    spec.w2_lo = 1.0;
    spec.w2_hi = 3.0;
    spec.n1 = 5;
    spec.n2 = 5;
    spec.margin = 1e-2;
    spec.options.t_max = 40.0;
    spec.options.state_cap = 1e6;

    SweepSpec serial = spec;
    serial.jobs = 1;
    SweepSpec parallel = spec;
    parallel.jobs = 4;
    const auto r1 = run_sweep(serial);
    const auto r2 = run_sweep(parallel);
    REQUIRE(r1.records.size() == r2.records.size());
    for (std::size_t i = 0; i < r1.records.size(); ++i) {
        CHECK(r1.records[i].start.w1 == r2.records[i].start.w1);
        CHECK(r1.records[i].start.w2 == r2.records[i].start.w2);
        REQUIRE(r1.records[i].exit_time.has_value());
        REQUIRE(r2.records[i].exit_time.has_value());
        CHECK(*r1.records[i].exit_time == *r2.records[i].exit_time);
    }
}

TEST_CASE("default windows") {
    double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    default_window(Region::SectionalPositive, W12, a1, a2, b1, b2);
    CHECK(a1 == doctest::Approx(1.0));
    CHECK(a2 == doctest::Approx(1.35));
    default_window(Region::RicciPositive, W12, a1, a2, b1, b2);
    CHECK(a2 == doctest::Approx(8.0));
}

TEST_CASE("number parsing") {
    CHECK(parse_number("1/8") == doctest::Approx(0.125).epsilon(1e-16));
    CHECK(parse_number("5") == doctest::Approx(5.0));
    CHECK(parse_number("2.5e-3") == doctest::Approx(2.5e-3));
    CHECK(parse_number("-3/4") == doctest::Approx(-0.75));
    CHECK_THROWS_AS(parse_number("1/"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("a/2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("1/2/3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_number("1/0"), std::invalid_argument);
}

TEST_CASE("shortest round-trip formatting") {
    for (double v : {1.0 / 3.0, 0.1, 1e300, 1234567.25, -2.5e-17}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("csv serialization of planar trajectories") {
    Trajectory<2> traj;
    traj.samples.push_back(Sample<2>{0.0, {1.0, 2.0}});
    traj.samples.push_back(Sample<2>{0.5, {1.25, 2.5}});
    const std::string csv = trajectory_csv(traj);
    CHECK(csv == "t,w1,w2\n0,1,2\n0.5,1.25,2.5\n");
}

TEST_CASE("json report envelope") {
    const json payload = {{"value", 42}};
    const json rep = report_envelope(W12, "unit", payload);
    CHECK(rep.at("schema_version").get<int>() == 1);
    CHECK(rep.at("kind").get<std::string>() == "unit");
    CHECK(rep.at("space").at("a").get<double>() == doctest::Approx(0.125));
    CHECK(rep.at("space").at("d").get<int>() == 4);
    CHECK(rep.at("payload").at("value").get<int>() == 42);
}

TEST_CASE("portrait bundle contents") {
    PortraitSpec spec;
    spec.space = W12;
    spec.curve_samples = 80;
    spec.traj_per_axis = 2;
    spec.horizon = 10.0;
    const json p = build_portrait(spec);
    CHECK(p.at("kind").get<std::string>() == "portrait");
    const auto& payload = p.at("payload");
    std::set<std::string> families;
    for (const auto& c : payload.at("curves")) {
        families.insert(c.at("id").get<std::string>());
        for (const auto& seg : c.at("segments")) {
            CHECK(seg.at("points").is_array());
            CHECK(seg.at("points").size() >= 2);
        }
    }
    CHECK(families.count("s3") == 1);
    CHECK(families.count("r1") == 1);
    CHECK(families.count("omega") == 1);
    CHECK(payload.at("equilibria").size() == 4);
    CHECK(payload.at("special_points").size() == 3);
    CHECK(payload.at("q_point").at("location").at("w1").get<double>() ==
          doctest::Approx(3.16608752075748).epsilon(1e-8));
    CHECK(payload.at("trajectories").size() > 0);
    CHECK_FALSE(payload.contains("kahler_line"));

    PortraitSpec spec6 = spec;
    spec6.space = make_space(1.0 / 6.0, 2);
    const json p6 = build_portrait(spec6);
    CHECK(p6.at("payload").contains("kahler_line"));
}

TEST_CASE("portrait rendering produces curves") {
    PortraitSpec spec;
    spec.space = W12;
    spec.curve_samples = 60;
    spec.traj_per_axis = 2;
    spec.horizon = 8.0;
    const json p = build_portrait(spec);
    const std::string svg = render_svg(p);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("degenerate parameter drops the coincident equilibria") {
    PortraitSpec spec;
    spec.space = make_space(0.25, 4);
    spec.curve_samples = 40;
    spec.traj_per_axis = 0;
    const json p = build_portrait(spec);
    CHECK(p.at("payload").at("equilibria").size() == 1);
}
