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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace rdv {

int SimConfig::steps_per_period() const {
    if (!(physics_dt > 0.0) || !(control_hz > 0.0)) {
        throw ConfigMisaligned("sim.physics_dt and sim.control_hz must be positive");
    }
    const double ratio = 1.0 / (control_hz * physics_dt);
    const long steps = std::lround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
        throw ConfigMisaligned("control period is not an integer number of physics steps");
    }
    return static_cast<int>(steps);
}

void SimConfig::validate() const {
    const int steps = steps_per_period();
    if (n_slots < 1 || steps % n_slots != 0) {
        throw ConfigMisaligned("ctrl.n_slots must divide the physics steps per control period (" +
                               std::to_string(steps) + ")");
    }
    std::string errors;
    if (!(tail >= 0.0)) errors += "sim.tail must be non-negative; ";
    if (!(mismatch.fraction >= 0.0 && mismatch.fraction < 1.0)) errors += "sim.mismatch_fraction must lie in [0, 1); ";
    if (!(disturbance.linear >= 0.0)) errors += "sim.disturbance_linear must be non-negative; ";
    if (!(disturbance.angular >= 0.0)) errors += "sim.disturbance_angular must be non-negative; ";
    if (!errors.empty()) throw std::invalid_argument(errors);
    body.validate();
    layout.validate();
    gains.validate();
}

double SimResult::tracking_rms() const {
    if (tracking_errors.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& e : tracking_errors) acc += e.e_x * e.e_x + e.e_y * e.e_y;
    return std::sqrt(acc / static_cast<double>(tracking_errors.size()));
}

BodyState corotate(const BodyState& s, const TargetState& target, double dt) {
    const double a = target.omega * dt;
    const double c = std::cos(a), sn = std::sin(a);
    const Vector2 r = s.position() - target.position;
    const Vector2 rr(c * r.x() - sn * r.y(), sn * r.x() + c * r.y());
    BodyState out;
    out.x = target.position.x() + rr.x();
    out.y = target.position.y() + rr.y();
    out.theta = s.theta + a;
    out.vx = -target.omega * rr.y();
    out.vy = target.omega * rr.x();
    out.omega = target.omega;
    return out;
}

BodyState reference_at(const PlannedTrajectory& plan, const TargetState& target, double t) {
    const double t0 = plan.times.front();
    const double t_end = plan.times.back();
    if (t < t_end - 1e-9) {
        const auto k = static_cast<std::size_t>(std::clamp(std::floor((t - t0) / plan.dt + 1e-9), 0.0,
                                                           static_cast<double>(plan.wrenches.size() - 1)));
        return plan.states[k];
    }
    return corotate(plan.states.back(), target, t - t_end);
}

Vector2 relative_velocity_target_frame(const BodyState& chaser, double target_theta, double target_omega,
                                       const Vector2& target_pos) {
    const Vector2 r = chaser.position() - target_pos;
    const Vector2 v = chaser.velocity() - Vector2(-target_omega * r.y(), target_omega * r.x());
    const double c = std::cos(target_theta), s = std::sin(target_theta);
    return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

double audit_safety(const std::vector<double>& times, const std::vector<BodyState>& states,
                    const TargetState& target, const KosConfig& cfg) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const TargetPose pose = target_state_at(times[i], target);
        g = std::min(g, audit_distance(states[i], pose.theta, pose.position, cfg));
    }
    return g;
}

SimResult run(const PlannedTrajectory& plan, const SimConfig& cfg, const TargetState& target, const KosConfig& kos) {
    cfg.validate();
    if (plan.states.size() < 2 || plan.wrenches.size() + 1 != plan.states.size() ||
        plan.times.size() != plan.states.size()) {
        throw std::invalid_argument("plan must hold N + 1 states, N wrenches and N + 1 time stamps");
    }
    const int steps = cfg.steps_per_period();
    const int steps_per_slot = steps / cfg.n_slots;
    const double period = steps * cfg.physics_dt;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    SimResult out;
    out.plant_body = cfg.body;
    ThrusterLayout plant_layout = cfg.layout;
    if (cfg.mismatch.enabled) {
        out.plant_body.mass *= 1.0 + cfg.mismatch.fraction * unit(rng);
        out.plant_body.inertia *= 1.0 + cfg.mismatch.fraction * unit(rng);
        plant_layout.f_max *= 1.0 + cfg.mismatch.fraction * unit(rng);
    }
    out.plant_f_max = plant_layout.f_max;

    const double t0 = plan.times.front();
    const double t_end = plan.times.back() + cfg.tail;
    const auto periods = static_cast<long>(std::ceil((t_end - t0) / period - 1e-9));

    BodyState s = plan.states.front();
    double t = t0;
    auto record = [&] {
        out.times.push_back(t);
        out.states.push_back(s);
        const TargetPose pose = target_state_at(t, target);
        out.kos_distance.push_back(audit_distance(s, pose.theta, pose.position, kos));
    };
    record();

    for (long p = 0; p < periods; ++p) {
        const double tc = t0 + static_cast<double>(p) * period;
        const BodyState ref = reference_at(plan, target, tc);
        std::optional<Wrench> ff;
        if (cfg.feedforward && tc < plan.times.back() - 1e-9) {
            const auto k = static_cast<std::size_t>(
                std::clamp(std::floor((tc - t0) / plan.dt + 1e-9), 0.0, static_cast<double>(plan.wrenches.size() - 1)));
            ff = plan.wrenches[k];
        }
        const ControlOutput ctrl = control_step(ref, s, cfg.gains, cfg.layout, cfg.n_slots, ff);

        out.control_times.push_back(tc);
        out.references.push_back(ref);
        out.tracking_errors.push_back(tracking_error(ref, s));
        const TargetPose pose = target_state_at(tc, target);
        out.relative_velocity.push_back(relative_velocity_target_frame(s, pose.theta, target.omega, pose.position));

        for (int j = 0; j < cfg.n_slots; ++j) {
            ThrusterCommand u = cfg.pwm ? ctrl.schedule.slot(j) : ctrl.allocation.duty;
            if (!cfg.thrusters) u.fill(0.0);
            out.slot_times.push_back(t);
            out.firings.push_back(u);
            const Wrench body = total_wrench(u, plant_layout);
            for (int k = 0; k < steps_per_slot; ++k) {
                Wrench world = body_to_world(body, s.theta);
                if (cfg.disturbance.active()) {
                    world.fx += out.plant_body.mass * cfg.disturbance.linear * unit(rng);
                    world.fy += out.plant_body.mass * cfg.disturbance.linear * unit(rng);
                    world.tau += out.plant_body.inertia * cfg.disturbance.angular * unit(rng);
                }
                s = euler_step(s, world, out.plant_body, cfg.physics_dt);
                t = tc + static_cast<double>(j * steps_per_slot + k + 1) * cfg.physics_dt;
                record();
            }
        }
    }

    // Terminal metrics against the capture goal carried with the target.
    const BodyState goal = corotate(plan.x_goal, target, t - plan.times.back());
    out.terminal_position_error = (s.position() - goal.position()).norm();
    out.terminal_attitude_error = std::abs(wrap_angle(s.theta - goal.theta));
    const TargetPose pose = target_state_at(t, target);
    out.terminal_relative_velocity = relative_velocity_target_frame(s, pose.theta, target.omega, pose.position).norm();
    out.min_kos_distance = *std::min_element(out.kos_distance.begin(), out.kos_distance.end());
    return out;
}

}  // namespace rdv
