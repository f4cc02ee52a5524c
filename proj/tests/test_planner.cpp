#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "sphere_dubins/planner.hpp"
#include "test_support.hpp"

using namespace sphere_dubins;
using sphere_dubins::testing::random_rotation;
using sphere_dubins::testing::random_unit;
using sphere_dubins::testing::uniform;

namespace {

const Vec3 kWorkedTarget = Vec3(0.6942, 0.5498, 0.4646).normalized();

} // namespace

TEST(Plan, WorkedExampleSelectsLG) {
    const auto p = plan(Configuration::identity(), kWorkedTarget, TurnRadius(0.4));
    EXPECT_EQ(p.best().type, PathType::LG);
    EXPECT_LE((path_endpoint(p.start, p.best().segments, TurnRadius(0.4)) - kWorkedTarget).norm(), 1e-8);
    std::set<PathType> types;
    for (const auto& c : p.candidates) types.insert(c.type);
    EXPECT_TRUE(types.count(PathType::LG));
    EXPECT_TRUE(types.count(PathType::RG));
    EXPECT_TRUE(types.count(PathType::LR));
    EXPECT_NEAR(p.best().length, 0.83593, 1e-4);
}

TEST(Plan, StartLocationIsTrivial) {
    const auto p = plan(Configuration::identity(), Vec3::UnitX(), TurnRadius(0.3));
    ASSERT_EQ(p.candidates.size(), 1u);
    EXPECT_EQ(p.best().type, PathType::TRIVIAL);
    EXPECT_EQ(p.best().length, 0.0);
    EXPECT_TRUE(p.best().segments.empty());
}

TEST(Plan, AntipodeIsHalfGreatCircle) {
    const auto p = plan(Configuration::identity(), Vec3(-1, 0, 0), TurnRadius(0.3));
    EXPECT_EQ(p.best().type, PathType::G);
    EXPECT_NEAR(p.best().length, kPi, 1e-12);
    ASSERT_EQ(p.best().segments.size(), 1u);
    EXPECT_NEAR(p.best().segments[0].angle, kPi, 1e-12);
}

TEST(Plan, RejectsLargeRadius) {
    try {
        plan(Configuration::identity(), Vec3(0, 1, 0), TurnRadius(0.6));
        FAIL() << "expected a domain error";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("outside proven candidate-set range"), std::string::npos);
    }
}

TEST(Plan, RejectsNonUnitTarget) {
    EXPECT_THROW(plan(Configuration::identity(), Vec3(1.0, 0.01, 0.0), TurnRadius(0.3)), std::domain_error);
}

TEST(Plan, SortedAndTieBroken) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto p = plan(Configuration::identity(), random_unit(rng), TurnRadius(uniform(rng, 0.05, 0.5)));
        for (std::size_t k = 1; k < p.candidates.size(); ++k) {
            EXPECT_LE(p.candidates[k - 1].length, p.candidates[k].length);
        }
        EXPECT_LE(p.best().length, p.candidates.front().length + 1e-10);
    }
}

TEST(EnumerateCandidates, WorkedExampleCounts) {
    const auto c = enumerate_candidates(TargetLocal(kWorkedTarget), TurnRadius(0.4));
    int lg = 0, rg = 0, lr = 0, rl = 0;
    for (const auto& x : c) {
        lg += x.type == PathType::LG;
        rg += x.type == PathType::RG;
        lr += x.type == PathType::LR;
        rl += x.type == PathType::RL;
    }
    EXPECT_EQ(lg, 2);
    EXPECT_EQ(rg, 2);
    EXPECT_EQ(lr, 1);
    EXPECT_EQ(rl, 1);
}

TEST(EnumerateCandidates, StartLocationOnlyTrivial) {
    const auto c = enumerate_candidates(TargetLocal(Vec3::UnitX()), TurnRadius(0.4));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].type, PathType::TRIVIAL);
}

TEST(EnumerateCandidates, ResidualsAndFinalTurnAngle) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 500; ++i) {
        const Vec3 x = random_unit(rng);
        const TurnRadius r(uniform(rng, 0.05, 0.5));
        const auto c = enumerate_candidates(TargetLocal(x), r);
        EXPECT_FALSE(c.empty());
        for (const auto& k : c) {
            EXPECT_LE((path_endpoint(Configuration::identity(), k.segments, r) - x).norm(), 1e-9);
            EXPECT_GE(k.length, 0.0);
            if (k.type == PathType::LR || k.type == PathType::RL) {
                EXPECT_GE(k.phi2(), kPi);
            }
        }
    }
}

TEST(PlanProperty, FrameInvariance) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 200; ++i) {
        const TurnRadius r(uniform(rng, 0.05, 0.5));
        const Mat3 r0 = random_rotation(rng);
        const Vec3 x = random_unit(rng);
        const Mat3 q = random_rotation(rng);
        const auto a = plan(Configuration::from_matrix(r0), x, r);
        const auto b = plan(Configuration::reprojected(q * r0), (q * x).normalized(), r);
        ASSERT_EQ(a.candidates.size(), b.candidates.size());
        for (std::size_t k = 0; k < a.candidates.size(); ++k) {
            EXPECT_NEAR(a.candidates[k].length, b.candidates[k].length, 1e-10);
        }
        EXPECT_EQ(a.best().type, b.best().type);
    }
}

TEST(PlanProperty, EndpointFromRotatedStart) {
    std::mt19937_64 rng(34);
    for (int i = 0; i < 300; ++i) {
        const TurnRadius r(uniform(rng, 0.1, 0.5));
        const auto start = Configuration::from_matrix(random_rotation(rng));
        const Vec3 x = random_unit(rng);
        const auto p = plan(start, x, r);
        EXPECT_LE((path_endpoint(start, p.best().segments, r) - x).norm(), 1e-8);
    }
}

TEST(PlanProperty, ShorterThanOrEqualToEveryTwoSegmentRoundTrip) {
    // A forward-composed candidate-class path is an upper bound on the optimum.
    std::mt19937_64 rng(35);
    for (int i = 0; i < 500; ++i) {
        const double r = uniform(rng, 0.1, 0.5);
        const auto type = kAllPathTypes[static_cast<std::size_t>(i % 4)];
        const auto t = segment_types(type);
        const bool two_turn = type == PathType::LR || type == PathType::RL;
        const std::vector<Segment> path{{t[0], uniform(rng, 0.0, kTwoPi)},
                                        {t[1], two_turn ? uniform(rng, kPi, kTwoPi) : uniform(rng, 0.0, kTwoPi)}};
        const Vec3 x = path_endpoint(Configuration::identity(), path, TurnRadius(r));
        const auto p = plan(Configuration::identity(), x, TurnRadius(r));
        EXPECT_LE(p.best().length, path_length(path, TurnRadius(r)) + 1e-9);
    }
}
