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

#include "rendezvous/kos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace rdv {

double r_safe(const KosConfig& cfg) {
    constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;
    return kHalfSqrt2 * cfg.chaser_side + kHalfSqrt2 * cfg.target_side + cfg.margin_fraction * cfg.chaser_side;
}

double KosConfig::r_safe() const { return rdv::r_safe(*this); }

double KosConfig::effective_angle_threshold() const {
    return angle_threshold ? *angle_threshold : corner_safe_angle_threshold(*this);
}

void KosConfig::validate() const {
    std::string errors;
    if (!(chaser_side >= 0.0)) errors += "kos: chaser side length must be non-negative; ";
    if (!(target_side >= 0.0)) errors += "kos: target side length must be non-negative; ";
    if (!(margin_fraction >= 0.0)) errors += "kos.margin_fraction must be non-negative; ";
    if (!(rdv::r_safe(*this) > 0.0)) errors += "kos: r_safe must be positive; ";
    if (!(dist_threshold_factor >= 1.0)) errors += "kos.dist_threshold_factor must be >= 1; ";
    if (angle_threshold && !(*angle_threshold > 0.0 && *angle_threshold < std::numbers::pi / 2)) {
        errors += "kos.angle_threshold must lie in (0, pi/2); ";
    }
    if (!errors.empty()) throw std::invalid_argument(errors);
}

double corner_safe_angle_threshold(const KosConfig& cfg) {
    // Attitude-synchronized chaser closing on the target along its line of
    // sight at deviation phi. Face contact happens at center distance
    // (l_s + l_t)/2 along the normal, with lateral offset (l_s + l_t)/2 tan(phi).
    // Corner-to-corner contact is excluded while the chaser's leading face
    // stays inside the docking face widened by the margin:
    //   offset + l_s/2 <= l_t/2 + l_margin.
    const double contact = 0.5 * (cfg.chaser_side + cfg.target_side);
    const double slack = 0.5 * (cfg.target_side - cfg.chaser_side) + cfg.margin_fraction * cfg.chaser_side;
    if (!(contact > 0.0)) return std::numbers::pi / 4;
    return std::atan(std::max(slack, 0.0) / contact);
}

KosState classify(const BodyState& chaser, double target_theta, const Vector2& target_pos,
                  const KosConfig& cfg) {
    const Vector2 rel = chaser.position() - target_pos;
    const Vector2 normal(std::cos(target_theta), std::sin(target_theta));
    const double along = rel.dot(normal);
    if (!(along > 0.0)) return KosState::kStateI;
    const double dist = rel.norm();
    const double deviation = std::acos(std::clamp(along / dist, -1.0, 1.0));
    if (deviation > cfg.effective_angle_threshold()) return KosState::kStateI;
    if (dist > cfg.dist_threshold_factor * rdv::r_safe(cfg)) return KosState::kStateI;
    return KosState::kStateII;
}

Vector2 HalfEllipse::local(const Vector2& p) const {
    const Vector2 d = p - center;
    const double c = std::cos(orientation), s = std::sin(orientation);
    return {c * d.x() + s * d.y(), -s * d.x() + c * d.y()};
}

bool HalfEllipse::active(const Vector2& p) const {
    const Vector2 q = local(p);
    return q.x() >= 0.0 && side * q.y() >= 0.0;
}

double HalfEllipse::implicit(const Vector2& p) const {
    const Vector2 q = local(p);
    const double u = q.x() / semi_minor, v = q.y() / semi_major;
    return u * u + v * v - 1.0;
}

namespace {

double circle_distance(const Vector2& p, const Circle& c) { return (p - c.center).norm() - c.radius; }

// (rho - 1) / |grad rho| with rho the ellipse "radius": exact along both axes,
// first-order accurate near the boundary, and homogeneous along rays.
double ellipse_distance(const Vector2& p, const HalfEllipse& e) {
    if (!e.active(p)) return std::numeric_limits<double>::infinity();
    const Vector2 q = e.local(p);
    const double a = e.semi_major, b = e.semi_minor;
    const double rho = std::hypot(q.x() / b, q.y() / a);
    if (rho == 0.0) return -std::min(a, b);
    const double gx = q.x() / (b * b * rho), gy = q.y() / (a * a * rho);
    return (rho - 1.0) / std::hypot(gx, gy);
}

}  // namespace

double signed_distance(const Vector2& p, const KosPrimitive& primitive) {
    return std::visit(
        [&](const auto& prim) {
            using T = std::decay_t<decltype(prim)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return circle_distance(p, prim);
            } else {
                return ellipse_distance(p, prim);
            }
        },
        primitive);
}

double signed_distance(const Vector2& p, const KosRegion& region) {
    double g = std::numeric_limits<double>::infinity();
    for (const auto& prim : region.primitives) g = std::min(g, signed_distance(p, prim));
    return g;
}

KosRegion build_region(KosState state, double target_theta, const Vector2& target_pos, const KosConfig& cfg) {
    const double r = rdv::r_safe(cfg);
    KosRegion region;
    region.state = state;
    if (state == KosState::kStateI) region.primitives.emplace_back(Circle{target_pos, r});
    for (int side : {1, -1}) {
        region.primitives.emplace_back(HalfEllipse{target_pos, target_theta, r, 0.5 * r, side});
    }
    return region;
}

double audit_distance(const BodyState& chaser, double target_theta, const Vector2& target_pos,
                      const KosConfig& cfg) {
    const KosState state = classify(chaser, target_theta, target_pos, cfg);
    return signed_distance(chaser.position(), build_region(state, target_theta, target_pos, cfg));
}

}  // namespace rdv
