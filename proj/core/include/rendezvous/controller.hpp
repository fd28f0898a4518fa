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

#ifndef RENDEZVOUS_CONTROLLER_HPP
#define RENDEZVOUS_CONTROLLER_HPP

#include "rendezvous/dynamics.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace rdv {

struct PdGains {
    double kp_pos = 2.0;
    double kd_pos = 8.0;
    double kp_att = 0.4;
    double kd_att = 1.2;

    void validate() const;
};

struct TrackingError {
    double e_x = 0.0;
    double e_y = 0.0;
    double e_theta = 0.0;  // wrapped to (-pi, pi]
    double e_vx = 0.0;
    double e_vy = 0.0;
    double e_omega = 0.0;
};

/// ref - actual, with the attitude difference wrapped.
TrackingError tracking_error(const BodyState& ref, const BodyState& actual);

/// Inertial-frame PD wrench.
Wrench pd_wrench(const TrackingError& e, const PdGains& gains);

Wrench world_to_body(const Wrench& w, double theta);
Wrench body_to_world(const Wrench& w, double theta);

/**
 * Bounded least squares: min |A u - b|^2 + ridge |u|^2 subject to 0 <= u <= 1.
 *
 * Primal active-set method on the strictly convex ridge problem, followed by
 * a minimum-norm polish of the free variables with the ridge removed (kept
 * only when it stays inside the box).
 */
Eigen::VectorXd bounded_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double ridge = 1e-9);

struct DutyAllocation {
    ThrusterCommand duty{};
    Wrench residual;  // B u f_max - w_body
};

DutyAllocation allocate_duty(const Wrench& w_body, const ThrusterLayout& layout);

/// Binary firing pattern over one control period.
struct PwmSchedule {
    int n_slots = 10;
    /// pattern[i][j] != 0 when thruster i fires in slot j.
    std::array<std::vector<std::uint8_t>, kNumThrusters> pattern;

    int on_slots(std::size_t thruster) const;
    /// Firing vector of slot j.
    ThrusterCommand slot(int j) const;
    /// Delivered duty of every thruster: on_slots / n_slots.
    ThrusterCommand delivered_duty() const;
};

/// Leading-edge PWM: thruster i is ON for the first round(u_i * n_slots) slots.
PwmSchedule pwm_schedule(const ThrusterCommand& duty, int n_slots);

struct ControlOutput {
    Wrench world_wrench;
    Wrench body_wrench;
    DutyAllocation allocation;
    PwmSchedule schedule;
};

/// tracking_error -> pd_wrench (+ feed-forward) -> world_to_body -> allocate_duty -> pwm_schedule.
ControlOutput control_step(const BodyState& ref, const BodyState& actual, const PdGains& gains,
                           const ThrusterLayout& layout, int n_slots,
                           const std::optional<Wrench>& feedforward = std::nullopt);

}  // namespace rdv

#endif  // RENDEZVOUS_CONTROLLER_HPP
