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

#include "rendezvous/controller.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rdv {

void PdGains::validate() const {
    std::string errors;
    if (!(kp_pos >= 0.0)) errors += "ctrl.kp_pos must be non-negative; ";
    if (!(kd_pos >= 0.0)) errors += "ctrl.kd_pos must be non-negative; ";
    if (!(kp_att >= 0.0)) errors += "ctrl.kp_att must be non-negative; ";
    if (!(kd_att >= 0.0)) errors += "ctrl.kd_att must be non-negative; ";
    if (!errors.empty()) throw std::invalid_argument(errors);
}

TrackingError tracking_error(const BodyState& ref, const BodyState& actual) {
    return {ref.x - actual.x,   ref.y - actual.y,   wrap_angle(ref.theta - actual.theta),
            ref.vx - actual.vx, ref.vy - actual.vy, ref.omega - actual.omega};
}

Wrench pd_wrench(const TrackingError& e, const PdGains& g) {
    return {g.kp_pos * e.e_x + g.kd_pos * e.e_vx, g.kp_pos * e.e_y + g.kd_pos * e.e_vy,
            g.kp_att * e.e_theta + g.kd_att * e.e_omega};
}

Wrench world_to_body(const Wrench& w, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * w.fx + s * w.fy, -s * w.fx + c * w.fy, w.tau};
}

Wrench body_to_world(const Wrench& w, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * w.fx - s * w.fy, s * w.fx + c * w.fy, w.tau};
}

namespace {

enum class Bound : std::uint8_t { kFree, kLower, kUpper };

}  // namespace

Eigen::VectorXd bounded_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double ridge) {
    const Eigen::Index n = a.cols();
    const Eigen::MatrixXd h = a.transpose() * a + ridge * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd atb = a.transpose() * b;

    // Start at u = 0 with every variable held at its lower bound.
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    std::vector<Bound> state(static_cast<std::size_t>(n), Bound::kLower);
    const double tol = 1e-14 * (1.0 + h.diagonal().maxCoeff());

    for (int iter = 0; iter < 50 * static_cast<int>(n) + 50; ++iter) {
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (state[static_cast<std::size_t>(i)] == Bound::kFree) free.push_back(i);
        }

        // Minimizer over the free variables with the rest held fixed.
        Eigen::VectorXd target = u;
        if (!free.empty()) {
            const auto m = static_cast<Eigen::Index>(free.size());
            Eigen::MatrixXd hff(m, m);
            Eigen::VectorXd rhs(m);
            for (Eigen::Index r = 0; r < m; ++r) {
                rhs(r) = atb(free[r]);
                for (Eigen::Index c = 0; c < n; ++c) {
                    if (state[static_cast<std::size_t>(c)] != Bound::kFree) rhs(r) -= h(free[r], c) * u(c);
                }
                for (Eigen::Index c = 0; c < m; ++c) hff(r, c) = h(free[r], free[c]);
            }
            const Eigen::VectorXd uf = hff.ldlt().solve(rhs);
            for (Eigen::Index r = 0; r < m; ++r) target(free[r]) = uf(r);
        }

        // Walk toward it and stop at the first bound crossed.
        double alpha = 1.0;
        Eigen::Index blocking = -1;
        for (Eigen::Index i : free) {
            const double d = target(i) - u(i);
            if (d < 0.0 && target(i) < 0.0) {
                const double s = -u(i) / d;
                if (s < alpha) alpha = s, blocking = i;
            } else if (d > 0.0 && target(i) > 1.0) {
                const double s = (1.0 - u(i)) / d;
                if (s < alpha) alpha = s, blocking = i;
            }
        }
        u += alpha * (target - u);
        if (blocking >= 0) {
            const bool lower = target(blocking) < 0.0;
            u(blocking) = lower ? 0.0 : 1.0;
            state[static_cast<std::size_t>(blocking)] = lower ? Bound::kLower : Bound::kUpper;
            continue;
        }

        // Free-subspace optimum reached: release the most violated bound.
        const Eigen::VectorXd grad = h * u - atb;
        Eigen::Index release = -1;
        double worst = tol;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Bound s = state[static_cast<std::size_t>(i)];
            const double violation = s == Bound::kLower ? -grad(i) : (s == Bound::kUpper ? grad(i) : 0.0);
            if (violation > worst) worst = violation, release = i;
        }
        if (release < 0) break;
        state[static_cast<std::size_t>(release)] = Bound::kFree;
    }

    // Minimum-norm polish of the free block without the ridge bias.
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (state[static_cast<std::size_t>(i)] == Bound::kFree) free.push_back(i);
    }
    if (!free.empty() && ridge > 0.0) {
        Eigen::MatrixXd af(a.rows(), static_cast<Eigen::Index>(free.size()));
        Eigen::VectorXd rhs = b;
        for (Eigen::Index c = 0; c < n; ++c) {
            if (state[static_cast<std::size_t>(c)] != Bound::kFree) rhs -= a.col(c) * u(c);
        }
        for (std::size_t c = 0; c < free.size(); ++c) af.col(static_cast<Eigen::Index>(c)) = a.col(free[c]);
        const Eigen::VectorXd uf = af.completeOrthogonalDecomposition().solve(rhs);
        // Rounding can put a duty that is exactly on a bound just outside it.
        constexpr double kBoxSlack = 1e-9;
        if ((uf.array() >= -kBoxSlack).all() && (uf.array() <= 1.0 + kBoxSlack).all()) {
            for (std::size_t c = 0; c < free.size(); ++c) u(free[c]) = uf(static_cast<Eigen::Index>(c));
        }
    }
    return u.cwiseMax(0.0).cwiseMin(1.0);
}

DutyAllocation allocate_duty(const Wrench& w_body, const ThrusterLayout& layout) {
    const Eigen::MatrixXd a = layout.effectiveness() * layout.f_max;
    const Eigen::VectorXd u = bounded_least_squares(a, w_body.vector());
    DutyAllocation out;
    for (std::size_t i = 0; i < kNumThrusters; ++i) out.duty[i] = u(static_cast<Eigen::Index>(i));
    out.residual = Wrench::from_vector(a * u - w_body.vector());
    return out;
}

int PwmSchedule::on_slots(std::size_t thruster) const {
    return static_cast<int>(std::count(pattern[thruster].begin(), pattern[thruster].end(), std::uint8_t{1}));
}

ThrusterCommand PwmSchedule::slot(int j) const {
    ThrusterCommand u{};
    for (std::size_t i = 0; i < kNumThrusters; ++i) u[i] = pattern[i][static_cast<std::size_t>(j)];
    return u;
}

ThrusterCommand PwmSchedule::delivered_duty() const {
    ThrusterCommand u{};
    for (std::size_t i = 0; i < kNumThrusters; ++i) u[i] = static_cast<double>(on_slots(i)) / n_slots;
    return u;
}

PwmSchedule pwm_schedule(const ThrusterCommand& duty, int n_slots) {
    if (n_slots < 1) throw std::invalid_argument("PWM slot count must be at least 1");
    PwmSchedule s;
    s.n_slots = n_slots;
    for (std::size_t i = 0; i < kNumThrusters; ++i) {
        const double u = std::clamp(duty[i], 0.0, 1.0);
        const auto k = static_cast<std::size_t>(std::lround(u * n_slots));
        s.pattern[i].assign(static_cast<std::size_t>(n_slots), 0);
        std::fill_n(s.pattern[i].begin(), k, std::uint8_t{1});
    }
    return s;
}

ControlOutput control_step(const BodyState& ref, const BodyState& actual, const PdGains& gains,
                           const ThrusterLayout& layout, int n_slots, const std::optional<Wrench>& feedforward) {
    ControlOutput out;
    out.world_wrench = pd_wrench(tracking_error(ref, actual), gains);
    if (feedforward) out.world_wrench = out.world_wrench + *feedforward;
    out.body_wrench = world_to_body(out.world_wrench, actual.theta);
    out.allocation = allocate_duty(out.body_wrench, layout);
    out.schedule = pwm_schedule(out.allocation.duty, n_slots);
    return out;
}

}  // namespace rdv
