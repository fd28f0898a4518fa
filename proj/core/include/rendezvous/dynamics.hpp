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

#ifndef RENDEZVOUS_DYNAMICS_HPP
#define RENDEZVOUS_DYNAMICS_HPP

#include <Eigen/Core>

#include <array>
#include <cstddef>

namespace rdv {

inline constexpr std::size_t kNumThrusters = 8;

using Vector2 = Eigen::Vector2d;
using StateVector = Eigen::Matrix<double, 6, 1>;
using EffectivenessMatrix = Eigen::Matrix<double, 3, kNumThrusters>;

/// Wraps an angle to the half-open interval (-pi, pi].
double wrap_angle(double angle);

/**
 * @brief Planar chaser state [x, y, theta, vx, vy, omega].
 *
 * The attitude is kept unwrapped so that differences between consecutive
 * knots stay continuous; wrapping only happens inside error metrics.
 */
struct BodyState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double omega = 0.0;

    StateVector vector() const;
    static BodyState from_vector(const StateVector& v);

    Vector2 position() const { return {x, y}; }
    Vector2 velocity() const { return {vx, vy}; }
    bool finite() const;
};

/// Time derivative of a BodyState, laid out in the same order.
using StateRate = BodyState;

struct BodyParams {
    double mass = 10.0;
    double inertia = 0.15;
    double side_length = 0.3;

    /// Uniform square plate: I = m * l^2 / 6.
    static BodyParams square_plate(double mass, double side_length);

    /// Throws std::invalid_argument naming the first non-positive field.
    void validate() const;
};

struct Wrench {
    double fx = 0.0;
    double fy = 0.0;
    double tau = 0.0;

    Eigen::Vector3d vector() const { return {fx, fy, tau}; }
    static Wrench from_vector(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

    friend Wrench operator+(const Wrench& a, const Wrench& b) {
        return {a.fx + b.fx, a.fy + b.fy, a.tau + b.tau};
    }
    friend Wrench operator*(double s, const Wrench& w) { return {s * w.fx, s * w.fy, s * w.tau}; }
};

/// Duty ratios in [0, 1] or binary firings, one entry per thruster.
using ThrusterCommand = std::array<double, kNumThrusters>;

/**
 * @brief Eight fixed-direction ON/OFF thrusters on the chaser's faces.
 *
 * Columns of the effectiveness matrix are the body wrench produced by one
 * thruster at unit duty and unit thrust: (d_x, d_y, r x d).
 */
struct ThrusterLayout {
    std::array<Vector2, kNumThrusters> positions{};
    std::array<Vector2, kNumThrusters> directions{};
    double f_max = 0.3;

    /**
     * Two thrusters per face of a square of side @p side_length, mounted at
     * +/- offset_fraction * side_length from the face center. Each pushes the
     * body away from its face (direction = -outward normal).
     *
     * Thruster order: +x face (upper, lower), -x face (upper, lower),
     * +y face (right, left), -y face (right, left).
     */
    static ThrusterLayout square(double side_length, double f_max, double offset_fraction = 0.4);

    EffectivenessMatrix effectiveness() const;

    /// Largest |fx|, |fy| and |tau| that are attainable simultaneously at any
    /// body attitude (see README, "Wrench bounds").
    Wrench attitude_independent_bounds() const;

    /// Throws std::invalid_argument when directions are not unit length, the
    /// effectiveness matrix is rank deficient, or the thrusters cannot produce
    /// wrenches of both signs about every axis.
    void validate() const;
};

struct TargetState {
    double theta0 = 0.0;
    double omega = 0.1;
    double side_length = 0.3;
    Vector2 position = Vector2::Zero();
};

struct TargetPose {
    double theta = 0.0;
    Vector2 position = Vector2::Zero();
};

/// Body-frame wrench of a duty/firing vector: sum_i u_i f_max (d_i, r_i x d_i).
Wrench total_wrench(const ThrusterCommand& cmd, const ThrusterLayout& layout);

/// Newton-Euler rates for an inertial-frame wrench.
StateRate state_derivative(const BodyState& s, const Wrench& world_wrench, const BodyParams& p);

/// One explicit Euler step. This is the exact map used by the transcription
/// defects and by the simulator.
BodyState euler_step(const BodyState& s, const Wrench& world_wrench, const BodyParams& p, double dt);

TargetPose target_state_at(double t, const TargetState& target);

}  // namespace rdv

#endif  // RENDEZVOUS_DYNAMICS_HPP
