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
#include "rendezvous/controller.hpp"
#include "rendezvous/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace rdv {
namespace {

TEST(BodyParams, SquarePlateInertia) {
    const BodyParams p = BodyParams::square_plate(10.0, 0.3);
    EXPECT_DOUBLE_EQ(p.inertia, 10.0 * 0.09 / 6.0);
}

TEST(BodyParams, ValidateNamesField) {
    BodyParams p;
    p.mass = -1.0;
    try {
        p.validate();
        FAIL() << "negative mass accepted";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("mass"), std::string::npos);
    }
    p = BodyParams{};
    p.inertia = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Dynamics, WrapAngleRange) {
    for (double a : {-10.0, -std::numbers::pi, 0.0, std::numbers::pi, 3 * std::numbers::pi, 7.5}) {
        const double w = wrap_angle(a);
        EXPECT_GT(w, -std::numbers::pi - 1e-15);
        EXPECT_LE(w, std::numbers::pi + 1e-15);
        EXPECT_NEAR(std::sin(w), std::sin(a), 1e-12);
        EXPECT_NEAR(std::cos(w), std::cos(a), 1e-12);
    }
}

// Constant wrench: Euler has a global error of exactly (a/2) t dt in position,
// so halving dt halves the error (Richardson ratio 2).
TEST(Dynamics, EulerFirstOrderConvergence) {
    const BodyParams p = BodyParams::square_plate(10.0, 0.3);
    const BodyState s0{0.3, -0.2, 0.1, 0.01, 0.02, -0.01};
    const Wrench w{0.2, -0.1, 0.01};
    const double horizon = 4.0;
    auto error = [&](double dt) {
        BodyState s = s0;
        const int n = static_cast<int>(std::lround(horizon / dt));
        for (int k = 0; k < n; ++k) s = euler_step(s, w, p, dt);
        return (s.vector() - oracle::constant_wrench_motion(s0, w, p, horizon).vector()).norm();
    };
    const double e1 = error(0.04), e2 = error(0.02), e3 = error(0.01);
    EXPECT_NEAR(e1 / e2, 2.0, 1e-6);
    EXPECT_NEAR(e2 / e3, 2.0, 1e-6);
}

TEST(Dynamics, ZeroThrustConservesMomentum) {
    const BodyParams p = BodyParams::square_plate(10.0, 0.3);
    BodyState s{1.0, 2.0, 0.5, 0.03, -0.04, 0.2};
    const double px = p.mass * s.vx, py = p.mass * s.vy, h = p.inertia * s.omega;
    for (int k = 0; k < 100000; ++k) s = euler_step(s, Wrench{}, p, 0.01);
    EXPECT_EQ(p.mass * s.vx, px);
    EXPECT_EQ(p.mass * s.vy, py);
    EXPECT_EQ(p.inertia * s.omega, h);
}

TEST(Dynamics, StateDerivativeMatchesNewtonEuler) {
    const BodyParams p{2.0, 0.5, 0.3};
    const BodyState s{0, 0, 1.0, 0.1, 0.2, 0.3};
    const StateRate r = state_derivative(s, Wrench{1.0, -2.0, 0.25}, p);
    EXPECT_DOUBLE_EQ(r.x, 0.1);
    EXPECT_DOUBLE_EQ(r.y, 0.2);
    EXPECT_DOUBLE_EQ(r.theta, 0.3);
    EXPECT_DOUBLE_EQ(r.vx, 0.5);
    EXPECT_DOUBLE_EQ(r.vy, -1.0);
    EXPECT_DOUBLE_EQ(r.omega, 0.5);
}

TEST(Thrusters, EffectivenessColumnsFromGeometry) {
    const ThrusterLayout layout = ThrusterLayout::square(0.3, 0.3);
    const EffectivenessMatrix b = layout.effectiveness();
    // +x face, upper thruster at (0.15, 0.12) pushing -x: torque = -y * dx = 0.12.
    EXPECT_DOUBLE_EQ(b(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(b(1, 0), 0.0);
    EXPECT_NEAR(b(2, 0), 0.12, 1e-15);
    // +y face, right thruster at (0.12, 0.15) pushing -y: torque = x * dy = -0.12.
    EXPECT_DOUBLE_EQ(b(1, 4), -1.0);
    EXPECT_NEAR(b(2, 4), -0.12, 1e-15);
    // Each face pair is torque-balanced.
    for (int i = 0; i < 8; i += 2) EXPECT_NEAR(b(2, i) + b(2, i + 1), 0.0, 1e-15);
    EXPECT_NO_THROW(layout.validate());
}

TEST(Thrusters, WrenchIsLinearInCommand) {
    const ThrusterLayout layout = ThrusterLayout::square(0.3, 0.25);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ThrusterCommand a{}, b{}, sum{};
        const double alpha = u(rng), beta = u(rng);
        for (std::size_t i = 0; i < kNumThrusters; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
            sum[i] = alpha * a[i] + beta * b[i];
        }
        const Eigen::Vector3d lhs = total_wrench(sum, layout).vector();
        const Eigen::Vector3d rhs =
            alpha * total_wrench(a, layout).vector() + beta * total_wrench(b, layout).vector();
        EXPECT_LT((lhs - rhs).norm(), 1e-15);
        const Eigen::Matrix<double, 8, 1> av = Eigen::Map<const Eigen::Matrix<double, 8, 1>>(a.data());
        EXPECT_LT((total_wrench(a, layout).vector() - layout.f_max * layout.effectiveness() * av).norm(), 1e-15);
    }
}

TEST(Thrusters, AttitudeIndependentBoundsDefaults) {
    const Wrench b = ThrusterLayout::square(0.3, 1.0).attitude_independent_bounds();
    EXPECT_NEAR(b.fx, 0.8284, 1e-3);
    EXPECT_NEAR(b.fy, 0.8284, 1e-3);
    EXPECT_NEAR(b.tau, 0.2812, 1e-3);
    const Wrench half = ThrusterLayout::square(0.3, 0.5).attitude_independent_bounds();
    EXPECT_NEAR(half.fx, 0.5 * b.fx, 1e-9);
    EXPECT_NEAR(half.tau, 0.5 * b.tau, 1e-9);
}

// Independent check through the allocator: every corner of the box, rotated
// into the body frame at sampled attitudes, is reachable with zero residual,
// while a 3% larger box is not reachable everywhere.
TEST(Thrusters, BoundsBoxIsAttainableAtEveryAttitude) {
    const ThrusterLayout layout = ThrusterLayout::square(0.3, 0.3);
    const Wrench b = layout.attitude_independent_bounds();
    const Eigen::MatrixXd a = layout.effectiveness() * layout.f_max;
    auto worst = [&](double scale) {
        double r = 0.0;
        for (int k = 0; k < 720; ++k) {
            const double th = 2 * std::numbers::pi * k / 720;
            for (int sx : {-1, 1})
                for (int sy : {-1, 1})
                    for (int st : {-1, 1}) {
                        const Wrench w = world_to_body({scale * sx * b.fx, scale * sy * b.fy, scale * st * b.tau}, th);
                        const Eigen::VectorXd u = bounded_least_squares(a, w.vector());
                        r = std::max(r, (a * u - w.vector()).norm());
                    }
        }
        return r;
    };
    EXPECT_LT(worst(1.0), 1e-8);
    EXPECT_GT(worst(1.03), 1e-4);
}

TEST(Thrusters, ValidateRejectsDegenerateLayout) {
    ThrusterLayout layout = ThrusterLayout::square(0.3, 0.3);
    layout.directions[0] = {2.0, 0.0};
    EXPECT_THROW(layout.validate(), std::invalid_argument);
    layout = ThrusterLayout::square(0.3, 0.3);
    for (auto& d : layout.directions) d = {1.0, 0.0};
    EXPECT_THROW(layout.validate(), std::invalid_argument);
}

TEST(Target, UniformRotation) {
    TargetState t;
    t.theta0 = 0.3;
    t.omega = -0.2;
    t.position = {1.0, 2.0};
    const TargetPose pose = target_state_at(5.0, t);
    EXPECT_DOUBLE_EQ(pose.theta, 0.3 - 1.0);
    EXPECT_EQ(pose.position, t.position);
}

}  // namespace
}  // namespace rdv
