/*
 Copyright 2026 The Rendezvous Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "oracles.hpp"
#include "rendezvous/kos.hpp"

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace rdv {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

KosConfig make(double ls, double lt, double margin) {
    KosConfig c;
    c.chaser_side = ls;
    c.target_side = lt;
    c.margin_fraction = margin;
    return c;
}

TEST(KosGeometry, RSafeMatchesHalfDiagonals) {
    struct Case {
        double ls, lt, margin;
    };
    for (const Case& c : {Case{0.3, 0.3, 0.1}, Case{0.2, 0.5, 0.05}, Case{0.4, 0.1, 0.0}}) {
        const double half_diag_s = std::hypot(c.ls / 2, c.ls / 2);
        const double half_diag_t = std::hypot(c.lt / 2, c.lt / 2);
        EXPECT_NEAR(r_safe(make(c.ls, c.lt, c.margin)), half_diag_s + half_diag_t + c.margin * c.ls, 1e-15);
    }
    EXPECT_NEAR(r_safe(make(0.3, 0.3, 0.1)), 0.4543, 1e-4);
}

TEST(KosGeometry, StateTwoForbiddenSetInsideStateOne) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const KosConfig cfg = make(0.3, 0.3, 0.1);
    int state_two_forbidden = 0;
    for (int i = 0; i < 10000; ++i) {
        const double theta = std::numbers::pi * u(rng);
        const Vector2 center(0.5 * u(rng), 0.5 * u(rng));
        const Vector2 p = center + Vector2(0.6 * u(rng), 0.6 * u(rng));
        const double g2 = signed_distance(p, build_region(KosState::kStateII, theta, center, cfg));
        const double g1 = signed_distance(p, build_region(KosState::kStateI, theta, center, cfg));
        if (g2 < 0.0) {
            ++state_two_forbidden;
            EXPECT_LT(g1, 0.0) << "point forbidden in state II but allowed in state I";
        }
        EXPECT_LE(g1, g2);
    }
    EXPECT_GT(state_two_forbidden, 100);
}

TEST(KosGeometry, CornerAngleMatchesPoseSamplingOracle) {
    for (const KosConfig& cfg : {make(0.3, 0.3, 0.1), make(0.2, 0.3, 0.1), make(0.3, 0.5, 0.0), make(0.25, 0.3, 0.2)}) {
        const double closed = corner_safe_angle_threshold(cfg);
        const double sampled = oracle::sampled_corner_safe_angle(cfg, 0.1 * kDeg, 1e-3);
        EXPECT_NEAR(closed / kDeg, sampled / kDeg, 0.5) << "ls=" << cfg.chaser_side << " lt=" << cfg.target_side;
    }
    EXPECT_NEAR(corner_safe_angle_threshold(make(0.3, 0.3, 0.1)) / kDeg, 5.71, 0.01);
}

TEST(KosGeometry, CornerAngleGrowsAsChaserShrinks) {
    double previous = 0.0;
    for (double ls : {0.3, 0.25, 0.2, 0.15, 0.1}) {
        const double phi = corner_safe_angle_threshold(make(ls, 0.3, 0.1));
        EXPECT_GT(phi, previous);
        previous = phi;
    }
}

TEST(KosGeometry, CornerAngleSymmetricForEqualSides) {
    const KosConfig a = make(0.3, 0.3, 0.1);
    KosConfig b = a;
    std::swap(b.chaser_side, b.target_side);
    EXPECT_DOUBLE_EQ(corner_safe_angle_threshold(a), corner_safe_angle_threshold(b));
}

TEST(KosGeometry, ExplicitAngleOverridesDerivedOne) {
    KosConfig cfg = make(0.3, 0.3, 0.1);
    cfg.angle_threshold = 0.3;
    EXPECT_DOUBLE_EQ(cfg.effective_angle_threshold(), 0.3);
    cfg.angle_threshold = 2.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(KosClassify, ExamplePoses) {
    const KosConfig cfg = make(0.3, 0.3, 0.1);
    const double r = r_safe(cfg);
    const Vector2 o = Vector2::Zero();
    auto at = [](double x, double y) { return BodyState{x, y, 0, 0, 0, 0}; };
    EXPECT_EQ(classify(at(0.5, 0.0), 0.0, o, cfg), KosState::kStateII);
    EXPECT_EQ(classify(at(-0.5, 0.0), 0.0, o, cfg), KosState::kStateI);        // behind the face
    EXPECT_EQ(classify(at(1.6 * r, 0.0), 0.0, o, cfg), KosState::kStateI);     // too far
    EXPECT_EQ(classify(at(0.5, 0.5 * std::tan(8 * kDeg)), 0.0, o, cfg), KosState::kStateI);  // off axis
    EXPECT_EQ(classify(at(0.5, 0.5 * std::tan(5 * kDeg)), 0.0, o, cfg), KosState::kStateII);
    // Rotated target: the docking normal follows its attitude.
    EXPECT_EQ(classify(at(0.0, 0.5), std::numbers::pi / 2, o, cfg), KosState::kStateII);
    EXPECT_EQ(classify(at(0.5, 0.0), std::numbers::pi / 2, o, cfg), KosState::kStateI);
}

TEST(KosRegion, StateTwoOpensTheDockingCorridor) {
    const KosConfig cfg = make(0.3, 0.3, 0.1);
    const Vector2 p(0.35, 0.0);  // docking standoff, inside the circle
    EXPECT_LT(signed_distance(p, build_region(KosState::kStateI, 0.0, Vector2::Zero(), cfg)), 0.0);
    EXPECT_GT(signed_distance(p, build_region(KosState::kStateII, 0.0, Vector2::Zero(), cfg)), 0.0);
    // Behind the face no ellipse is active.
    EXPECT_EQ(signed_distance(Vector2(-0.1, 0.0), build_region(KosState::kStateII, 0.0, Vector2::Zero(), cfg)),
              std::numeric_limits<double>::infinity());
}

// Boundary sampling: zero on the boundary, sign and first-order magnitude
// under small normal offsets.
TEST(KosRegion, AuditDistanceOnSampledBoundaries) {
    const KosConfig cfg = make(0.3, 0.3, 0.1);
    const Vector2 c(0.2, -0.1);
    const double theta = 0.7;
    const double r = r_safe(cfg);
    const KosRegion two = build_region(KosState::kStateII, theta, c, cfg);
    for (int i = 1; i < 200; ++i) {
        const double s = -std::numbers::pi / 2 + std::numbers::pi * i / 200;  // open docking half
        const Vector2 p = oracle::ellipse_point(cfg, theta, c, s);
        EXPECT_NEAR(signed_distance(p, two), 0.0, 1e-12);
        // Outward normal of the ellipse at p, from the implicit gradient.
        const double a = r, b = 0.5 * r;
        const Vector2 n_local(std::cos(s) / b, std::sin(s) / a);
        const Vector2 n = Eigen::Rotation2Dd(theta) * n_local.normalized();
        for (double delta : {1e-3, -1e-3}) {
            const double g = signed_distance(p + delta * n, two);
            if (std::isinf(g)) continue;
            EXPECT_NEAR(g, delta, 1e-4) << "s=" << s;
        }
    }
    const KosRegion one = build_region(KosState::kStateI, theta, c, cfg);
    for (int i = 0; i < 64; ++i) {
        const double s = 2 * std::numbers::pi * i / 64;
        const Vector2 dir(std::cos(s), std::sin(s));
        EXPECT_NEAR(signed_distance(c + (r + 0.01) * dir, one), 0.01, 1e-12);
        EXPECT_LT(signed_distance(c + (r - 0.01) * dir, one), 0.0);
    }
}

TEST(KosRegion, AuditDistanceUsesOwnClassification) {
    const KosConfig cfg = make(0.3, 0.3, 0.1);
    const BodyState docked{0.35, 0.0, 0, 0, 0, 0};
    EXPECT_GT(audit_distance(docked, 0.0, Vector2::Zero(), cfg), 0.0);
    const BodyState side{0.0, 0.35, 0, 0, 0, 0};
    EXPECT_LT(audit_distance(side, 0.0, Vector2::Zero(), cfg), 0.0);
}

TEST(KosConfig, ValidateRejectsBadValues) {
    KosConfig cfg = make(0.3, 0.3, -0.1);
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = make(0.3, 0.3, 0.1);
    cfg.dist_threshold_factor = 0.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace rdv
