#include <sstream>

#include <gtest/gtest.h>

#include "sphere_dubins/io.hpp"

using namespace sphere_dubins;
using namespace sphere_dubins::io;

TEST(ParseInstance, Minimal) {
    const auto inst = parse_instance_text(R"({"format": 1, "r": 0.4, "target": [0, 1, 0]})");
    EXPECT_EQ(inst.r, 0.4);
    EXPECT_EQ(inst.target, Vec3(0, 1, 0));
    EXPECT_EQ(inst.r0, Mat3::Identity());
    EXPECT_FALSE(inst.options.samples.has_value());
}

TEST(ParseInstance, Full) {
    const auto inst = parse_instance_text(R"({"format": 1, "r": 0.3, "target": [0, 0, 1],
        "r0": [[0, 1, 0], [1, 0, 0], [0, 0, -1]],
        "options": {"samples": 50, "grid_step": 0.01, "max_segments": 2}})");
    EXPECT_EQ(inst.r0(0, 1), 1.0);
    EXPECT_EQ(inst.r0(2, 2), -1.0);
    EXPECT_EQ(inst.options.samples, 50);
    EXPECT_EQ(inst.options.grid_step, 0.01);
    EXPECT_EQ(inst.options.max_segments, 2);
}

TEST(ParseInstance, NormalizesNearUnitTarget) {
    const auto inst = parse_instance_text(R"({"format": 1, "r": 0.4, "target": [0.6942, 0.5498, 0.4646]})");
    EXPECT_NEAR(inst.target.norm(), 1.0, 1e-15);
}

TEST(ParseInstance, RejectsBadInput) {
    EXPECT_THROW(parse_instance_text(R"({"r": 0.4, "target": [0, 1, 0]})"), InputError);
    EXPECT_THROW(parse_instance_text(R"({"format": 2, "r": 0.4, "target": [0, 1, 0]})"), InputError);
    EXPECT_THROW(parse_instance_text(R"({"format": 1, "r": 0.4, "target": [0, 1, 0], "extra": 1})"), InputError);
    EXPECT_THROW(parse_instance_text(R"({"format": 1, "r": 0.4, "target": [0, 1]})"), InputError);
    EXPECT_THROW(parse_instance_text(R"({"format": 1, "r": 0.4, "target": [0, 2, 0]})"), InputError);
    EXPECT_THROW(parse_instance_text(R"({"format": 1, "r": "x", "target": [0, 1, 0]})"), InputError);
    EXPECT_THROW(parse_instance_text(R"({"format": 1, "target": [0, 1, 0]})"), InputError);
    EXPECT_THROW(parse_instance_text(R"({"format": 1, "r": 0.4, "target": [0, 1, 0], "options": {"bogus": 1}})"),
                 InputError);
    EXPECT_THROW(parse_instance_text("{not json"), InputError);
}

TEST(ParseList, Counts) {
    EXPECT_EQ(parse_list("1,2,3", 3, "t"), (std::vector<double>{1, 2, 3}));
    EXPECT_THROW(parse_list("1,2", 3, "t"), InputError);
    EXPECT_THROW(parse_list("1,x,3", 3, "t"), InputError);
    EXPECT_THROW(parse_list("1,2,3abc", 3, "t"), InputError);
}

TEST(InstanceJson, RoundTrip) {
    Instance inst;
    inst.r = 0.25;
    inst.target = Vec3(0, 0, 1);
    const auto again = parse_instance(nlohmann::json::parse(to_json(inst).dump()));
    EXPECT_EQ(again.r, inst.r);
    EXPECT_EQ(again.target, inst.target);
    EXPECT_EQ(again.r0, inst.r0);
}

TEST(PlanReport, FieldsAndOrder) {
    Instance inst;
    inst.r = 0.3;
    inst.target = Vec3(-1, 0, 0);
    const auto p = plan(Configuration::identity(), inst.target, TurnRadius(inst.r));
    const auto j = plan_report(inst, p);
    EXPECT_EQ(j["format"], 1);
    EXPECT_EQ(j["optimal_type"], "G");
    EXPECT_EQ(j.begin().key(), "format");
    EXPECT_TRUE(j["sorted"].get<bool>());
}

TEST(Waypoints, HeaderAndRows) {
    const std::vector<Segment> segs{{SegmentType::G, kPi}};
    const auto samples = sample_path(Configuration::identity(), segs, TurnRadius(0.3), 3);
    std::ostringstream os;
    write_waypoints(os, samples, segs);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "s x y z tx ty tz segment type");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.back(), 'G');
    }
    EXPECT_EQ(rows, 3);
}
