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

#ifndef RENDEZVOUS_CONFIG_HPP
#define RENDEZVOUS_CONFIG_HPP

#include "rendezvous/controller.hpp"
#include "rendezvous/dynamics.hpp"
#include "rendezvous/kos.hpp"
#include "rendezvous/optimizer.hpp"
#include "rendezvous/sim.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rdv {

/// Parse or validation failure; the message names the offending keys.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One axis of a sweep grid: start, start + step, ..., up to stop inclusive.
struct GridAxis {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    /// Number of points; stop is included when it lies on the grid within 1e-9 steps.
    int size() const;
    /// start + i * step, generated from the integer index.
    double at(int i) const;
    std::vector<double> values() const;
};

struct SweepSpec {
    GridAxis omega;       // target angular rate [rad/s]
    GridAxis f_thr;       // thrust per thruster [N]
    GridAxis theta_deg;   // approach attitude [deg]
};

struct ConfigEntry {
    std::string key;
    std::string default_value;
    std::string description;
};

/// Every accepted key with its default, in file order.
const std::vector<ConfigEntry>& config_schema();

/**
 * @brief Fully resolved scenario.
 *
 * Built from the flat key = value text; `values` keeps the resolved text of
 * every key so that outputs can embed it verbatim.
 */
struct RunConfig {
    std::vector<std::pair<std::string, std::string>> values;

    BodyParams body;
    double thruster_offset = 0.4;
    double f_thr = 0.3;
    TargetState target;
    BodyState chaser;
    KosConfig kos;
    bool kos_enabled = true;
    double blend_band = 0.02;

    double opt_dt = 0.1;
    double w_goal = 100.0;
    double w_u = 10.0;
    std::optional<double> force_max;   // unset: attitude-independent bound of the layout
    std::optional<double> torque_max;
    double theta_approach = 0.0;       // [rad]
    PlanSettings plan;

    PdGains gains;
    int n_slots = 10;
    bool feedforward = true;
    SimConfig sim;
    double audit_tolerance = 0.005;

    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int parallel = 1;

    SweepSpec sweep1;
    SweepSpec sweep2;

    ThrusterLayout layout() const;
    /// Wrench box handed to the optimizer.
    std::pair<Wrench, Wrench> wrench_bounds() const;
    OptProblem problem_template() const;
    SimConfig sim_config() const;

    const std::string& value(const std::string& key) const;
    /// "key = value" lines in schema order.
    std::string to_text() const;
    /// FNV-1a of to_text(), as 16 hex digits.
    std::string digest() const;
};

/// Parses text; missing keys take defaults. Throws ConfigError.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);
/// Re-resolves with some keys replaced (values as config text).
RunConfig with_overrides(const RunConfig& cfg, const std::map<std::string, std::string>& overrides);

/// Shortest text that parses back to exactly @p v.
std::string format_double(double v);

}  // namespace rdv

#endif  // RENDEZVOUS_CONFIG_HPP
