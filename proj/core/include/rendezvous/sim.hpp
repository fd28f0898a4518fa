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

#ifndef RENDEZVOUS_SIM_HPP
#define RENDEZVOUS_SIM_HPP

#include "rendezvous/controller.hpp"
#include "rendezvous/dynamics.hpp"
#include "rendezvous/kos.hpp"
#include "rendezvous/optimizer.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rdv {

class ConfigMisaligned : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Multiplicative plant/model mismatch, drawn once per run.
struct ModelMismatch {
    bool enabled = false;
    double fraction = 0.05;  // m, I and f_max each scaled by 1 + U(-fraction, fraction)
};

/// Bounded uniform random accelerations, redrawn every physics step.
struct Disturbance {
    double linear = 0.0;   // [m/s^2]
    double angular = 0.0;  // [rad/s^2]

    bool active() const { return linear > 0.0 || angular > 0.0; }
};

struct SimConfig {
    double physics_dt = 0.01;
    double control_hz = 10.0;
    /// Station-keeping time after the plan horizon [s].
    double tail = 5.0;
    BodyParams body;
    ThrusterLayout layout;
    PdGains gains;
    int n_slots = 10;
    bool feedforward = true;
    /// When false the allocated continuous duty is applied directly.
    bool pwm = true;
    /// When false no thruster ever fires.
    bool thrusters = true;
    ModelMismatch mismatch;
    Disturbance disturbance;
    std::uint64_t seed = 1;

    /// Physics steps per control period. Throws ConfigMisaligned.
    int steps_per_period() const;
    /// Throws std::invalid_argument (ConfigMisaligned for timing).
    void validate() const;
};

struct SimResult {
    // Physics rate.
    std::vector<double> times;
    std::vector<BodyState> states;
    std::vector<double> kos_distance;
    // One row per PWM slot.
    std::vector<double> slot_times;
    std::vector<ThrusterCommand> firings;
    // Control rate.
    std::vector<double> control_times;
    std::vector<BodyState> references;
    std::vector<TrackingError> tracking_errors;
    std::vector<Vector2> relative_velocity;

    double terminal_position_error = 0.0;
    double terminal_attitude_error = 0.0;
    double terminal_relative_velocity = 0.0;
    double min_kos_distance = 0.0;
    /// Plant parameters actually simulated (after mismatch).
    BodyParams plant_body;
    double plant_f_max = 0.0;

    /// RMS position tracking error over control periods.
    double tracking_rms() const;
};

/// Reference for time t: zero-order hold of the knots, then the final knot
/// carried rigidly with the target.
BodyState reference_at(const PlannedTrajectory& plan, const TargetState& target, double t);

/// Rigid rotation of a state about the target by the target's motion over dt.
BodyState corotate(const BodyState& s, const TargetState& target, double dt);

/// R(theta_t)^T (v - omega_t x (p - p_t)).
Vector2 relative_velocity_target_frame(const BodyState& chaser, double target_theta, double target_omega,
                                       const Vector2& target_pos);

/// Minimum exact KOS distance, classifying each state on its own.
double audit_safety(const std::vector<double>& times, const std::vector<BodyState>& states,
                    const TargetState& target, const KosConfig& cfg);

SimResult run(const PlannedTrajectory& plan, const SimConfig& cfg, const TargetState& target, const KosConfig& kos);

}  // namespace rdv

#endif  // RENDEZVOUS_SIM_HPP
