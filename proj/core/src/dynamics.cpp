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

#include "rendezvous/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdv {

double wrap_angle(double angle) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, kTwoPi);
    if (r <= -std::numbers::pi) {
        r += kTwoPi;
    } else if (r > std::numbers::pi) {
        r -= kTwoPi;
    }
    return r;
}

StateVector BodyState::vector() const {
    StateVector v;
    v << x, y, theta, vx, vy, omega;
    return v;
}

BodyState BodyState::from_vector(const StateVector& v) {
    return {v(0), v(1), v(2), v(3), v(4), v(5)};
}

bool BodyState::finite() const { return vector().allFinite(); }

BodyParams BodyParams::square_plate(double mass, double side_length) {
    return {mass, mass * side_length * side_length / 6.0, side_length};
}

void BodyParams::validate() const {
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    if (!(inertia > 0.0)) throw std::invalid_argument("inertia must be positive");
    if (!(side_length > 0.0)) throw std::invalid_argument("side_length must be positive");
}

ThrusterLayout ThrusterLayout::square(double side_length, double f_max, double offset_fraction) {
    const double h = 0.5 * side_length;
    const double o = offset_fraction * side_length;
    ThrusterLayout layout;
    layout.f_max = f_max;
    layout.positions = {Vector2{h, o},  Vector2{h, -o}, Vector2{-h, o}, Vector2{-h, -o},
                        Vector2{o, h},  Vector2{-o, h}, Vector2{o, -h}, Vector2{-o, -h}};
    layout.directions = {Vector2{-1, 0}, Vector2{-1, 0}, Vector2{1, 0},  Vector2{1, 0},
                         Vector2{0, -1}, Vector2{0, -1}, Vector2{0, 1},  Vector2{0, 1}};
    return layout;
}

EffectivenessMatrix ThrusterLayout::effectiveness() const {
    EffectivenessMatrix b;
    for (std::size_t i = 0; i < kNumThrusters; ++i) {
        const Vector2& r = positions[i];
        const Vector2& d = directions[i];
        b(0, i) = d.x();
        b(1, i) = d.y();
        b(2, i) = r.x() * d.y() - r.y() * d.x();
    }
    return b;
}

namespace {

// The attainable set {B u f : u in [0,1]^8} is a zonotope. Its facet normals
// are cross products of generator pairs.
struct Zonotope {
    Eigen::Vector3d center;
    std::vector<Eigen::Vector3d> generators;
    std::vector<Eigen::Vector3d> normals;

    explicit Zonotope(const Eigen::Matrix<double, 3, kNumThrusters>& scaled) {
        center = 0.5 * scaled.rowwise().sum();
        for (std::size_t i = 0; i < kNumThrusters; ++i) generators.emplace_back(0.5 * scaled.col(i));
        for (std::size_t i = 0; i < kNumThrusters; ++i) {
            for (std::size_t j = i + 1; j < kNumThrusters; ++j) {
                Eigen::Vector3d n = generators[i].cross(generators[j]);
                if (n.norm() > 1e-12) normals.push_back(n.normalized());
            }
        }
    }

    double support(const Eigen::Vector3d& n) const {
        double h = 0.0;
        for (const auto& g : generators) h += std::abs(n.dot(g));
        return h;
    }

    bool contains(const Eigen::Vector3d& p, double slack = 1e-12) const {
        for (const auto& n : normals) {
            if (std::abs(n.dot(p - center)) > support(n) + slack) return false;
        }
        return true;
    }
};

}  // namespace

Wrench ThrusterLayout::attitude_independent_bounds() const {
    const Zonotope z(effectiveness() * f_max);
    constexpr int kAngles = 360;
    auto bisect = [](auto&& feasible, double hi) {
        double lo = 0.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? lo : hi) = mid;
        }
        return lo;
    };
    const double cap = 16.0 * f_max * (1.0 + positions[0].norm());

    // Smallest over directions of the largest pure force, and largest pure torque.
    double pure_force = cap;
    for (int k = 0; k < kAngles; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / kAngles;
        const Eigen::Vector3d dir(std::cos(phi), std::sin(phi), 0.0);
        pure_force = std::min(pure_force, bisect([&](double a) { return z.contains(a * dir); }, cap));
    }
    const double pure_torque = bisect(
        [&](double t) { return z.contains(Eigen::Vector3d(0, 0, t)) && z.contains(Eigen::Vector3d(0, 0, -t)); },
        cap);

    // Scale the box (F/sqrt2, F/sqrt2, T) uniformly until every rotated corner fits.
    const double f_box = pure_force / std::numbers::sqrt2;
    auto box_fits = [&](double s) {
        for (int k = 0; k < kAngles; ++k) {
            const double th = 2.0 * std::numbers::pi * k / kAngles;
            const double c = std::cos(th), sn = std::sin(th);
            for (int sx : {-1, 1}) {
                for (int sy : {-1, 1}) {
                    for (int st : {-1, 1}) {
                        const double fx = s * sx * f_box, fy = s * sy * f_box;
                        const Eigen::Vector3d body(c * fx + sn * fy, -sn * fx + c * fy, s * st * pure_torque);
                        if (!z.contains(body)) return false;
                    }
                }
            }
        }
        return true;
    };
    const double s = bisect(box_fits, 1.0);
    return {s * f_box, s * f_box, s * pure_torque};
}

void ThrusterLayout::validate() const {
    if (!(f_max > 0.0)) throw std::invalid_argument("f_max must be positive");
    for (std::size_t i = 0; i < kNumThrusters; ++i) {
        if (std::abs(directions[i].norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("thruster " + std::to_string(i) + " direction is not unit length");
        }
    }
    const EffectivenessMatrix b = effectiveness();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
    if (lu.rank() < 3) throw std::invalid_argument("thruster layout effectiveness matrix is rank deficient");

    // Zero wrench is interior to the attainable set iff some strictly positive
    // duty vector is in the null space. Alternate projections onto the null
    // space and the box [eps, 1].
    const Eigen::MatrixXd pinv = b.transpose() * (b * b.transpose()).inverse();
    Eigen::Matrix<double, kNumThrusters, 1> u = Eigen::Matrix<double, kNumThrusters, 1>::Constant(0.5);
    constexpr double kFloor = 1e-3;
    for (int it = 0; it < 2000; ++it) {
        u -= pinv * (b * u);
        if (u.minCoeff() >= kFloor && u.maxCoeff() <= 1.0) return;
        u = u.cwiseMax(kFloor).cwiseMin(1.0);
    }
    throw std::invalid_argument("thruster layout cannot produce wrenches of both signs on every axis");
}

Wrench total_wrench(const ThrusterCommand& cmd, const ThrusterLayout& layout) {
    Wrench w;
    for (std::size_t i = 0; i < kNumThrusters; ++i) {
        const double f = cmd[i] * layout.f_max;
        const Vector2& r = layout.positions[i];
        const Vector2& d = layout.directions[i];
        w.fx += f * d.x();
        w.fy += f * d.y();
        w.tau += f * (r.x() * d.y() - r.y() * d.x());
    }
    return w;
}

StateRate state_derivative(const BodyState& s, const Wrench& w, const BodyParams& p) {
    return {s.vx, s.vy, s.omega, w.fx / p.mass, w.fy / p.mass, w.tau / p.inertia};
}

BodyState euler_step(const BodyState& s, const Wrench& w, const BodyParams& p, double dt) {
    const StateRate r = state_derivative(s, w, p);
    return {s.x + r.x * dt,         s.y + r.y * dt,   s.theta + r.theta * dt,
            s.vx + r.vx * dt,       s.vy + r.vy * dt, s.omega + r.omega * dt};
}

TargetPose target_state_at(double t, const TargetState& target) {
    return {target.theta0 + target.omega * t, target.position};
}

}  // namespace rdv
