#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sphere_dubins/geometry.hpp"
#include "test_support.hpp"

using namespace sphere_dubins;
using sphere_dubins::testing::mirror_matrix;
using sphere_dubins::testing::random_type;
using sphere_dubins::testing::uniform;

namespace {

double max_abs_diff(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST(SegmentRotation, GreatCircleFirstColumn) {
    const TurnRadius r(0.3);
    for (const double phi : {0.0, 0.4, 1.7, 3.0, 5.9}) {
        const Mat3 m = segment_rotation(SegmentType::G, r, phi);
        EXPECT_NEAR(m(0, 0), std::cos(phi), 1e-15);
        EXPECT_NEAR(m(1, 0), std::sin(phi), 1e-15);
        EXPECT_EQ(m(2, 0), 0.0);
    }
}

TEST(SegmentRotation, ZeroAngleIsIdentity) {
    for (const auto t : {SegmentType::L, SegmentType::R, SegmentType::G}) {
        EXPECT_EQ(max_abs_diff(segment_rotation(t, TurnRadius(0.45), 0.0), Mat3::Identity()), 0.0);
    }
}

TEST(SegmentRotation, RightTurnMirrorsLeftTurn) {
    const Mat3 d = mirror_matrix();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const TurnRadius r(uniform(rng, 1e-3, TurnRadius::kMax));
        const double phi = uniform(rng, 0.0, kTwoPi);
        const Mat3 right = segment_rotation(SegmentType::R, r, phi);
        const Mat3 left = segment_rotation(SegmentType::L, r, phi);
        EXPECT_LE(max_abs_diff(right, d * left * d), 1e-14);
    }
}

TEST(SegmentRotation, RejectsBadArguments) {
    EXPECT_THROW(TurnRadius(0.0), std::domain_error);
    EXPECT_THROW(TurnRadius(-0.1), std::domain_error);
    EXPECT_THROW(TurnRadius(0.71), std::domain_error);
    EXPECT_NO_THROW(TurnRadius(1.0 / std::sqrt(2.0)));
    const TurnRadius r(0.4);
    EXPECT_THROW(segment_rotation(SegmentType::L, r, -1e-12), std::domain_error);
    EXPECT_THROW(segment_rotation(SegmentType::L, r, kTwoPi), std::domain_error);
    EXPECT_THROW(segment_rotation(SegmentType::G, r, std::nan("")), std::domain_error);
}

TEST(TurnRadius, CurvatureRelation) {
    for (const double v : {0.05, 0.2, 0.5, TurnRadius::kMax}) {
        const TurnRadius r(v);
        EXPECT_NEAR(r.value() * std::sqrt(1.0 + r.u_max() * r.u_max()), 1.0, 1e-12);
    }
}

TEST(SegmentRotationProperty, OutputsLieInSO3) {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const TurnRadius r(uniform(rng, 1e-3, TurnRadius::kMax));
        worst = std::max(worst, so3_defect(segment_rotation(random_type(rng), r, uniform(rng, 0.0, kTwoPi))));
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(SegmentRotationProperty, Semigroup) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 2000; ++i) {
        const auto t = random_type(rng);
        const TurnRadius r(uniform(rng, 1e-3, TurnRadius::kMax));
        const double a = uniform(rng, 0.0, kTwoPi);
        const double b = uniform(rng, 0.0, kTwoPi);
        const Mat3 lhs = segment_rotation(t, r, a) * segment_rotation(t, r, b);
        EXPECT_LE(max_abs_diff(lhs, segment_rotation(t, r, wrap_angle(a + b))), 1e-12);
    }
}

TEST(SegmentRotationProperty, TightTurnKeepsConstantDistanceFromCentre) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
        const TurnRadius r(uniform(rng, 1e-3, TurnRadius::kMax));
        const Vec3 centre(r.axial(), 0.0, r.value());
        const double phi = uniform(rng, 0.0, kTwoPi);
        const Vec3 x = segment_rotation(SegmentType::L, r, phi).col(0);
        EXPECT_NEAR(x.dot(centre), r.axial(), 1e-10);
        // The circle has radius r about the centre direction.
        EXPECT_NEAR((x - x.dot(centre) * centre).norm(), r.value(), 1e-10);
    }
}

TEST(IntegrateFrame, HalfGreatCircle) {
    const auto end = integrate_frame(Configuration::identity(), 0.0, kPi, 1e-4);
    EXPECT_LE((end.position() - Vec3(-1.0, 0.0, 0.0)).norm(), 1e-8);
}

TEST(IntegrateFrame, ZeroLengthReturnsStart) {
    std::mt19937_64 rng(3);
    const auto start = Configuration::from_matrix(sphere_dubins::testing::random_rotation(rng));
    const auto end = integrate_frame(start, 1.3, 0.0, 1e-3);
    EXPECT_EQ(max_abs_diff(end.matrix(), start.matrix()), 0.0);
}

TEST(IntegrateFrame, MatchesClosedFormLeftTurn) {
    const TurnRadius r(0.4);
    const auto end = integrate_frame(Configuration::identity(), r.u_max(), r.value() * kPi, 1e-4);
    EXPECT_LE(max_abs_diff(end.matrix(), segment_rotation(SegmentType::L, r, kPi)), 1e-8);
}

TEST(IntegrateFrame, MatchesClosedFormEachType) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 6; ++i) {
        const auto t = static_cast<SegmentType>(i % 3);
        const TurnRadius r(uniform(rng, 0.1, TurnRadius::kMax));
        const double phi = uniform(rng, 0.0, kTwoPi);
        const double arc = Segment{t, phi}.arc_length(r);
        const auto end = integrate_frame(Configuration::identity(), geodesic_curvature(t, r), arc, 1e-4);
        EXPECT_LE(max_abs_diff(end.matrix(), segment_rotation(t, r, phi)), 1e-8);
    }
}

TEST(IntegrateFrame, RejectsBadStep) {
    EXPECT_THROW(integrate_frame(Configuration::identity(), 0.0, 1.0, 0.0), std::domain_error);
    EXPECT_THROW(integrate_frame(Configuration::identity(), 0.0, -1.0, 1e-3), std::domain_error);
}

TEST(PathEndpoint, LeftPiRightPiClosedForm) {
    for (const double rv : {0.1, 0.3, 0.4, 0.5, 0.7}) {
        const TurnRadius r(rv);
        const std::vector<Segment> path{{SegmentType::L, kPi}, {SegmentType::R, kPi}};
        const Vec3 expected(1.0 + 8.0 * std::pow(rv, 4) - 8.0 * rv * rv, 0.0,
                            4.0 * (1.0 - 2.0 * rv * rv) * rv * std::sqrt(1.0 - rv * rv));
        EXPECT_LE((path_endpoint(Configuration::identity(), path, r) - expected).norm(), 1e-12);
    }
}

TEST(PathEndpoint, HalfRadiusValue) {
    const std::vector<Segment> path{{SegmentType::L, kPi}, {SegmentType::R, kPi}};
    const Vec3 p = path_endpoint(Configuration::identity(), path, TurnRadius(0.5));
    EXPECT_NEAR(p.x(), -0.5, 1e-12);
    EXPECT_NEAR(p.y(), 0.0, 1e-12);
    EXPECT_NEAR(p.z(), 0.8660254037844386, 1e-12);
}

TEST(PathEndpoint, EmptyPathStaysPut) {
    const Vec3 p = path_endpoint(Configuration::identity(), {}, TurnRadius(0.3));
    EXPECT_EQ(p, Vec3::UnitX());
}

TEST(PathEndpoint, UnitNorm) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const TurnRadius r(uniform(rng, 0.05, 0.5));
        std::vector<Segment> path;
        for (int k = 0; k < 3; ++k) path.push_back({random_type(rng), uniform(rng, 0.0, kTwoPi)});
        const auto start = Configuration::from_matrix(sphere_dubins::testing::random_rotation(rng));
        EXPECT_NEAR(path_endpoint(start, path, r).norm(), 1.0, 1e-12);
    }
}

TEST(SamplePath, EquatorSamples) {
    const std::vector<Segment> path{{SegmentType::G, kPi}};
    const auto s = sample_path(Configuration::identity(), path, TurnRadius(0.3), 3);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_LE((s[0].frame.position() - Vec3(1, 0, 0)).norm(), 1e-15);
    EXPECT_LE((s[1].frame.position() - Vec3(0, 1, 0)).norm(), 1e-15);
    EXPECT_LE((s[2].frame.position() - Vec3(-1, 0, 0)).norm(), 1e-15);
    EXPECT_DOUBLE_EQ(s[2].arc, kPi);
}

TEST(SamplePath, QuarterLeftTurnEndsOnClosedForm) {
    const TurnRadius r(0.5);
    const std::vector<Segment> path{{SegmentType::L, kPi / 2}};
    const auto s = sample_path(Configuration::identity(), path, r, 2);
    EXPECT_LE((s.back().frame.position() - segment_rotation(SegmentType::L, r, kPi / 2).col(0)).norm(), 1e-15);
}

TEST(SamplePath, EndsMatchPathEndpoint) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const TurnRadius r(uniform(rng, 0.05, 0.5));
        std::vector<Segment> path;
        for (int k = 0; k < 2; ++k) path.push_back({random_type(rng), uniform(rng, 0.0, kTwoPi)});
        const auto start = Configuration::from_matrix(sphere_dubins::testing::random_rotation(rng));
        const auto s = sample_path(start, path, r, 57);
        ASSERT_EQ(s.size(), 57u);
        EXPECT_LE((s.front().frame.matrix() - start.matrix()).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LE((s.back().frame.position() - path_endpoint(start, path, r)).norm(), 1e-10);
        EXPECT_NEAR(s.back().arc, path_length(path, r), 1e-15);
        for (std::size_t k = 1; k < s.size(); ++k) {
            EXPECT_GE(s[k].segment, s[k - 1].segment);
            EXPECT_NEAR(s[k].frame.position().norm(), 1.0, 1e-12);
        }
    }
}

TEST(SamplePath, RejectsTooFewSamples) {
    EXPECT_THROW(sample_path(Configuration::identity(), {}, TurnRadius(0.3), 1), std::domain_error);
}

TEST(Configuration, ValidatesInsteadOfRepairing) {
    Mat3 skewed = Mat3::Identity();
    skewed(0, 1) = 1e-6;
    EXPECT_THROW(Configuration::from_matrix(skewed), std::domain_error);
    EXPECT_THROW(Configuration::from_matrix(Vec3(1, 1, -1).asDiagonal()), std::domain_error);
    const auto repaired = Configuration::reprojected(skewed);
    EXPECT_LE(so3_defect(repaired.matrix()), 1e-14);
    EXPECT_NO_THROW(Configuration::from_matrix(repaired.matrix()));
}

TEST(Angles, WrapAndDistance) {
    EXPECT_DOUBLE_EQ(wrap_angle(-kPi / 2), 1.5 * kPi);
    EXPECT_EQ(wrap_angle(kTwoPi), 0.0);
    EXPECT_NEAR(angle_distance(0.1, kTwoPi - 0.1), 0.2, 1e-15);
}
