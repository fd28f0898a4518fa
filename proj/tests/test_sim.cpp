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

#include "rendezvous/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

namespace rdv {
namespace {

struct Scenario {
    OptProblem problem;
    PlannedTrajectory plan;
    SimConfig sim;
};

// A short straight-line reference; the simulator does not require optimality.
Scenario scenario() {
    Scenario s;
    s.problem.body = BodyParams::square_plate(10.0, 0.3);
    s.problem.x_init = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    s.problem.target.omega = 0.1;
    s.problem = instantiate(s.problem, {10.0, 0}, 0.05);
    s.plan = initial_guess(s.problem);
    s.plan.converged = true;
    s.sim.body = s.problem.body;
    s.sim.layout = ThrusterLayout::square(0.3, 0.3);
    s.sim.tail = 1.0;
    return s;
}

bool bitwise_equal(const std::vector<BodyState>& a, const std::vector<BodyState>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(BodyState)) == 0;
}

TEST(Sim, RepeatedRunsAreBitIdentical) {
    Scenario s = scenario();
    s.sim.mismatch.enabled = true;
    s.sim.disturbance.linear = 1e-4;
    s.sim.disturbance.angular = 1e-4;
    const SimResult a = run(s.plan, s.sim, s.problem.target, s.problem.kos);
    const SimResult b = run(s.plan, s.sim, s.problem.target, s.problem.kos);
    EXPECT_TRUE(bitwise_equal(a.states, b.states));
    EXPECT_EQ(a.firings, b.firings);
    s.sim.seed = 2;
    const SimResult c = run(s.plan, s.sim, s.problem.target, s.problem.kos);
    EXPECT_FALSE(bitwise_equal(a.states, c.states));
    EXPECT_NE(a.plant_body.mass, c.plant_body.mass);
}

TEST(Sim, ThrustersOffConservesMomentum) {
    Scenario s = scenario();
    s.sim.thrusters = false;
    s.plan.states.front().vx = 0.01;
    s.plan.states.front().omega = 0.02;
    const SimResult r = run(s.plan, s.sim, s.problem.target, s.problem.kos);
    for (const BodyState& x : r.states) {
        EXPECT_EQ(x.vx, r.states.front().vx);
        EXPECT_EQ(x.vy, r.states.front().vy);
        EXPECT_EQ(x.omega, r.states.front().omega);
    }
    for (const auto& f : r.firings)
        for (double u : f) EXPECT_EQ(u, 0.0);
}

TEST(Sim, OutputRatesAndBinaryFirings) {
    const Scenario s = scenario();
    const SimResult r = run(s.plan, s.sim, s.problem.target, s.problem.kos);
    const double horizon = s.plan.duration() + s.sim.tail;
    EXPECT_EQ(r.states.size(), static_cast<std::size_t>(std::lround(horizon / 0.01)) + 1);
    EXPECT_EQ(r.control_times.size(), static_cast<std::size_t>(std::lround(horizon * 10)));
    EXPECT_EQ(r.firings.size(), r.control_times.size() * 10);
    for (const auto& f : r.firings)
        for (double u : f) EXPECT_TRUE(u == 0.0 || u == 1.0);
    EXPECT_EQ(r.kos_distance.size(), r.states.size());
}

TEST(Sim, ZeroGainsStillRunToCompletion) {
    Scenario s = scenario();
    s.sim.gains = {0.0, 0.0, 0.0, 0.0};
    const SimResult r = run(s.plan, s.sim, s.problem.target, s.problem.kos);
    EXPECT_TRUE(std::isfinite(r.terminal_position_error));
    EXPECT_TRUE(r.states.back().finite());
}

TEST(Sim, MisalignedTimingIsRejected) {
    Scenario s = scenario();
    s.sim.control_hz = 7.0;
    EXPECT_THROW(run(s.plan, s.sim, s.problem.target, s.problem.kos), ConfigMisaligned);
    s = scenario();
    s.sim.n_slots = 3;
    EXPECT_THROW(run(s.plan, s.sim, s.problem.target, s.problem.kos), ConfigMisaligned);
}

// Finite-difference oracle: derivative of the chaser position expressed in
// the rotating target frame, along straight-line chaser motion.
TEST(RelativeVelocity, MatchesFiniteDifferenceInTargetFrame) {
    TargetState target;
    target.theta0 = 0.4;
    target.omega = -0.7;
    target.position = {0.3, -0.2};
    const BodyState c{1.1, 0.6, 0.0, 0.05, -0.12, 0.0};
    auto frame_position = [&](double t) {
        const double th = target.theta0 + target.omega * t;
        const Vector2 d(c.x + c.vx * t - target.position.x(), c.y + c.vy * t - target.position.y());
        return Vector2(std::cos(th) * d.x() + std::sin(th) * d.y(), -std::sin(th) * d.x() + std::cos(th) * d.y());
    };
    const double h = 1e-5;
    const Vector2 fd = (frame_position(h) - frame_position(-h)) / (2 * h);
    const Vector2 v = relative_velocity_target_frame(c, target.theta0, target.omega, target.position);
    EXPECT_LE((v - fd).norm(), 1e-6);
}

TEST(Reference, CorotatedTailFollowsTarget) {
    const Scenario s = scenario();
    const double t_end = s.plan.times.back();
    const BodyState a = reference_at(s.plan, s.problem.target, t_end);
    const BodyState b = reference_at(s.plan, s.problem.target, t_end + 2.0);
    const BodyState rot = corotate(a, s.problem.target, 2.0);
    EXPECT_NEAR((b.vector() - rot.vector()).norm(), 0.0, 1e-12);
    EXPECT_NEAR(std::hypot(b.x, b.y), std::hypot(a.x, a.y), 1e-12);
    EXPECT_NEAR(b.theta - a.theta, 0.2, 1e-12);
    // Zero-order hold inside the horizon.
    EXPECT_EQ(reference_at(s.plan, s.problem.target, 0.15).x, s.plan.states[1].x);
}

}  // namespace
}  // namespace rdv
