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

#ifndef RENDEZVOUS_KOS_HPP
#define RENDEZVOUS_KOS_HPP

#include "rendezvous/dynamics.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace rdv {

/**
 * @brief Keep-out sphere geometry.
 *
 * The target's docking face is its body +x face; its outward normal points
 * along (cos theta_t, sin theta_t).
 */
struct KosConfig {
    double chaser_side = 0.3;
    double target_side = 0.3;
    double margin_fraction = 0.10;       // l_margin / l_s
    double dist_threshold_factor = 1.5;  // State II entry radius, in units of r_safe
    /// Unset means "use corner_safe_angle_threshold()".
    std::optional<double> angle_threshold;

    double r_safe() const;
    double effective_angle_threshold() const;

    /// Throws std::invalid_argument listing the violated invariant.
    void validate() const;
};

enum class KosState { kStateI = 1, kStateII = 2 };

struct Circle {
    Vector2 center = Vector2::Zero();
    double radius = 0.0;
};

/**
 * One half of the docking-side ellipse. The ellipse has its semi-minor axis
 * along the docking normal (angle @c orientation) and its semi-major axis
 * along the face. The primitive is active where the point is on the docking
 * side of the face plane and on the @c side (+1 or -1) of the docking axis.
 */
struct HalfEllipse {
    Vector2 center = Vector2::Zero();
    double orientation = 0.0;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    int side = 1;

    /// Point expressed in the ellipse frame: x along the normal, y along the face.
    Vector2 local(const Vector2& p) const;
    bool active(const Vector2& p) const;
    /// (x/b)^2 + (y/a)^2 - 1, the raw implicit value.
    double implicit(const Vector2& p) const;
};

using KosPrimitive = std::variant<Circle, HalfEllipse>;

struct KosRegion {
    KosState state = KosState::kStateI;
    std::vector<KosPrimitive> primitives;
};

double r_safe(const KosConfig& cfg);

KosState classify(const BodyState& chaser, double target_theta, const Vector2& target_pos,
                  const KosConfig& cfg);

/// Largest line-of-sight deviation from the docking normal at which an
/// attitude-synchronized chaser closing on the target makes face contact
/// without either corner leaving the docking face (widened by the margin).
double corner_safe_angle_threshold(const KosConfig& cfg);

/// Signed distance of a single primitive; +infinity when inactive.
double signed_distance(const Vector2& p, const KosPrimitive& primitive);

/// Minimum signed distance over the region's active primitives (positive = allowed).
double signed_distance(const Vector2& p, const KosRegion& region);

KosRegion build_region(KosState state, double target_theta, const Vector2& target_pos, const KosConfig& cfg);

/// classify + build_region + signed_distance.
double audit_distance(const BodyState& chaser, double target_theta, const Vector2& target_pos,
                      const KosConfig& cfg);

}  // namespace rdv

#endif  // RENDEZVOUS_KOS_HPP
