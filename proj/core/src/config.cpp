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

#include "rendezvous/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace rdv {

int GridAxis::size() const {
    if (!(step > 0.0) || stop < start) return 0;
    return static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
}

double GridAxis::at(int i) const {
    const double v = start + static_cast<double>(i) * step;
    // Snap to the 1e-12 decimal lattice so that 0.1 + 2 * 0.1 yields the
    // double written as 0.3, not 0.30000000000000004.
    constexpr double kLattice = 1e12;
    if (std::abs(v) >= 1e3) return v;
    return std::round(v * kLattice) / kLattice;
}

std::vector<double> GridAxis::values() const {
    std::vector<double> out;
    for (int i = 0; i < size(); ++i) out.push_back(at(i));
    return out;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

const std::vector<ConfigEntry>& config_schema() {
    static const std::vector<ConfigEntry> schema = {
        {"body.mass", "10", "chaser mass [kg]"},
        {"body.inertia", "auto", "chaser z inertia [kg m^2]; auto = mass * side^2 / 6"},
        {"body.side_length", "0.3", "chaser side length l_s [m]"},
        {"thruster.f_max", "0.3", "thrust per thruster F_thr [N]"},
        {"thruster.offset_fraction", "0.4", "thruster offset from face center, fraction of l_s"},
        {"target.theta0", "0", "target attitude at t = 0 [rad]"},
        {"target.omega", "0.1", "target angular rate [rad/s]"},
        {"target.side_length", "0.3", "target side length l_t [m]"},
        {"target.x", "0", "target center x [m]"},
        {"target.y", "0", "target center y [m]"},
        {"chaser.x", "1.0", "initial x [m]"},
        {"chaser.y", "0", "initial y [m]"},
        {"chaser.theta", "0", "initial attitude [rad]"},
        {"chaser.vx", "0", "initial vx [m/s]"},
        {"chaser.vy", "0", "initial vy [m/s]"},
        {"chaser.omega", "0", "initial angular rate [rad/s]"},
        {"kos.enabled", "true", "enforce the keep-out constraint in the optimizer"},
        {"kos.margin_fraction", "0.1", "l_margin / l_s"},
        {"kos.dist_threshold_factor", "1.5", "State II entry distance in units of r_safe"},
        {"kos.angle_threshold", "auto", "State II entry line-of-sight deviation [rad]; auto = corner-safe angle"},
        {"kos.blend_band", "0.02", "smooth half-plane activation width of the ellipse rows [m]"},
        {"opt.dt", "0.1", "knot spacing [s]"},
        {"opt.w_goal", "100", "terminal state weight"},
        {"opt.w_u", "10", "wrench effort weight"},
        {"opt.force_max", "auto", "|Fx|, |Fy| bound [N]; auto = attitude-independent thruster bound"},
        {"opt.torque_max", "auto", "|tau| bound [N m]; auto = attitude-independent thruster bound"},
        {"opt.theta_approach_deg", "135", "target attitude at closest approach [deg]"},
        {"opt.capture_offset", "0.05", "goal standoff beyond face contact [m]"},
        {"opt.max_candidates", "2", "duration candidates tried per plan"},
        {"opt.min_duration", "5", "absolute horizon floor [s]"},
        {"opt.transfer_time_factor", "1.0", "horizon floor as a multiple of the bang-bang transfer time"},
        {"opt.max_duration", "inf", "longest horizon considered [s]"},
        {"opt.static_ladder", "20,40,60,80", "horizons for a non-rotating target [s]"},
        {"opt.warm_start", "true", "seed each candidate with the previous solution"},
        {"opt.kkt_tol", "1e-6", "stationarity tolerance"},
        {"opt.feas_tol", "1e-8", "constraint violation tolerance"},
        {"opt.max_outer", "500", "augmented Lagrangian outer iterations"},
        {"opt.max_inner", "200", "Newton iterations per outer iteration"},
        {"ctrl.kp_pos", "2.0", "position proportional gain [N/m]"},
        {"ctrl.kd_pos", "8.0", "position derivative gain [N s/m]"},
        {"ctrl.kp_att", "0.4", "attitude proportional gain [N m/rad]"},
        {"ctrl.kd_att", "1.2", "attitude derivative gain [N m s/rad]"},
        {"ctrl.n_slots", "10", "PWM slots per control period"},
        {"ctrl.feedforward", "true", "add the planned wrench to the PD wrench"},
        {"sim.physics_dt", "0.01", "integration step [s]"},
        {"sim.control_hz", "10", "control rate [Hz]"},
        {"sim.tail", "5", "station-keeping time after the horizon [s]"},
        {"sim.pwm", "true", "apply PWM firings (false: continuous duty)"},
        {"sim.thrusters", "true", "allow thrusters to fire"},
        {"sim.mismatch", "false", "perturb plant mass, inertia and thrust"},
        {"sim.mismatch_fraction", "0.05", "relative half-width of the mismatch"},
        {"sim.disturbance_linear", "0", "bound of random linear acceleration [m/s^2]"},
        {"sim.disturbance_angular", "0", "bound of random angular acceleration [rad/s^2]"},
        {"sim.audit_tolerance", "0.005", "allowed KOS incursion in the audit [m]"},
        {"run.seed", "1", "random seed"},
        {"run.out", "out", "output directory"},
        {"run.parallel", "1", "worker threads for sweeps"},
        {"sweep1.omega_start", "0.035", "[rad/s]"},
        {"sweep1.omega_stop", "2.0", "[rad/s]"},
        {"sweep1.omega_step", "0.025", "[rad/s]"},
        {"sweep1.f_start", "0.03", "[N]"},
        {"sweep1.f_stop", "1.02", "[N]"},
        {"sweep1.f_step", "0.03", "[N]"},
        {"sweep2.theta_start_deg", "0", "[deg]"},
        {"sweep2.theta_stop_deg", "330", "[deg]"},
        {"sweep2.theta_step_deg", "30", "[deg]"},
        {"sweep2.omega_start", "0.05", "[rad/s]"},
        {"sweep2.omega_stop", "2.0", "[rad/s]"},
        {"sweep2.omega_step", "0.05", "[rad/s]"},
        {"sweep2.f_thr", "0.03", "fixed thrust per thruster [N]"},
    };
    return schema;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool known_key(const std::string& key) {
    const auto& schema = config_schema();
    return std::any_of(schema.begin(), schema.end(), [&](const ConfigEntry& e) { return e.key == key; });
}

class Reader {
public:
    explicit Reader(const std::map<std::string, std::string>& values) : values_(values) {}

    double real(const std::string& key) {
        const std::string& text = values_.at(key);
        if (text == "inf") return std::numeric_limits<double>::infinity();
        double v = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size() || std::isnan(v)) {
            fail(key, "expected a number, got '" + text + "'");
        }
        return v;
    }

    std::optional<double> real_or_auto(const std::string& key) {
        if (values_.at(key) == "auto") return std::nullopt;
        return real(key);
    }

    long long integer(const std::string& key) {
        const std::string& text = values_.at(key);
        long long v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
            fail(key, "expected an integer, got '" + text + "'");
        }
        return v;
    }

    std::uint64_t unsigned64(const std::string& key) {
        const std::string& text = values_.at(key);
        std::uint64_t v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
            fail(key, "expected an unsigned 64-bit integer, got '" + text + "'");
        }
        return v;
    }

    bool boolean(const std::string& key) {
        const std::string& t = values_.at(key);
        if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
        if (t == "false" || t == "0" || t == "no" || t == "off") return false;
        fail(key, "expected true or false, got '" + t + "'");
        return false;
    }

    std::vector<double> list(const std::string& key) {
        std::vector<double> out;
        std::stringstream ss(values_.at(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            double v = 0.0;
            const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
            if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
                fail(key, "expected a comma-separated list of numbers");
                return {};
            }
            out.push_back(v);
        }
        return out;
    }

    const std::string& text(const std::string& key) { return values_.at(key); }

    void require(bool ok, const std::string& key, const std::string& what) {
        if (!ok) fail(key, what);
    }

    void fail(const std::string& key, const std::string& what) { errors_ += key + ": " + what + "\n"; }
    const std::string& errors() const { return errors_; }

private:
    const std::map<std::string, std::string>& values_;
    std::string errors_;
};

RunConfig build(const std::map<std::string, std::string>& values) {
    RunConfig c;
    for (const auto& e : config_schema()) c.values.emplace_back(e.key, values.at(e.key));
    Reader r(values);

    c.body.mass = r.real("body.mass");
    c.body.side_length = r.real("body.side_length");
    const auto inertia = r.real_or_auto("body.inertia");
    c.body.inertia = inertia ? *inertia : c.body.mass * c.body.side_length * c.body.side_length / 6.0;
    r.require(c.body.mass > 0.0, "body.mass", "mass must be positive");
    r.require(c.body.side_length > 0.0, "body.side_length", "side length must be positive");
    r.require(c.body.inertia > 0.0, "body.inertia", "inertia must be positive");

    c.f_thr = r.real("thruster.f_max");
    c.thruster_offset = r.real("thruster.offset_fraction");
    r.require(c.f_thr > 0.0 && std::isfinite(c.f_thr), "thruster.f_max", "thrust must be positive and finite");
    r.require(c.thruster_offset > 0.0 && c.thruster_offset <= 0.5, "thruster.offset_fraction",
              "offset must lie in (0, 0.5]");

    c.target.theta0 = r.real("target.theta0");
    c.target.omega = r.real("target.omega");
    c.target.side_length = r.real("target.side_length");
    c.target.position = {r.real("target.x"), r.real("target.y")};
    r.require(c.target.side_length > 0.0, "target.side_length", "side length must be positive");
    r.require(std::isfinite(c.target.omega), "target.omega", "angular rate must be finite");

    c.chaser = {r.real("chaser.x"),  r.real("chaser.y"),  r.real("chaser.theta"),
                r.real("chaser.vx"), r.real("chaser.vy"), r.real("chaser.omega")};
    r.require(c.chaser.finite(), "chaser", "initial state must be finite");

    c.kos.chaser_side = c.body.side_length;
    c.kos.target_side = c.target.side_length;
    c.kos.margin_fraction = r.real("kos.margin_fraction");
    c.kos.dist_threshold_factor = r.real("kos.dist_threshold_factor");
    c.kos.angle_threshold = r.real_or_auto("kos.angle_threshold");
    c.kos_enabled = r.boolean("kos.enabled");
    c.blend_band = r.real("kos.blend_band");
    r.require(c.kos.margin_fraction >= 0.0, "kos.margin_fraction", "must be non-negative");
    r.require(c.kos.dist_threshold_factor >= 1.0, "kos.dist_threshold_factor", "must be at least 1");
    r.require(!c.kos.angle_threshold || (*c.kos.angle_threshold > 0.0 && *c.kos.angle_threshold < std::numbers::pi / 2),
              "kos.angle_threshold", "must lie in (0, pi/2)");
    r.require(c.blend_band > 0.0, "kos.blend_band", "must be positive");

    c.opt_dt = r.real("opt.dt");
    c.w_goal = r.real("opt.w_goal");
    c.w_u = r.real("opt.w_u");
    c.force_max = r.real_or_auto("opt.force_max");
    c.torque_max = r.real_or_auto("opt.torque_max");
    c.theta_approach = r.real("opt.theta_approach_deg") * std::numbers::pi / 180.0;
    r.require(c.opt_dt > 0.0, "opt.dt", "must be positive");
    r.require(c.w_goal >= 0.0, "opt.w_goal", "must be non-negative");
    r.require(c.w_u >= 0.0, "opt.w_u", "must be non-negative");
    r.require(!c.force_max || *c.force_max >= 0.0, "opt.force_max", "must be non-negative");
    r.require(!c.torque_max || *c.torque_max >= 0.0, "opt.torque_max", "must be non-negative");

    c.plan.capture_offset = r.real("opt.capture_offset");
    c.plan.candidates.max_candidates = static_cast<int>(r.integer("opt.max_candidates"));
    c.plan.candidates.min_duration = r.real("opt.min_duration");
    c.plan.candidates.transfer_time_factor = r.real("opt.transfer_time_factor");
    c.plan.candidates.max_duration = r.real("opt.max_duration");
    c.plan.candidates.static_ladder = r.list("opt.static_ladder");
    c.plan.warm_start = r.boolean("opt.warm_start");
    c.plan.solver.nlp.kkt_tolerance = r.real("opt.kkt_tol");
    c.plan.solver.nlp.feasibility_tolerance = r.real("opt.feas_tol");
    c.plan.solver.nlp.max_outer_iterations = static_cast<int>(r.integer("opt.max_outer"));
    c.plan.solver.nlp.max_inner_iterations = static_cast<int>(r.integer("opt.max_inner"));
    r.require(c.plan.capture_offset >= 0.0, "opt.capture_offset", "must be non-negative");
    r.require(c.plan.candidates.max_candidates >= 1, "opt.max_candidates", "must be at least 1");
    r.require(c.plan.candidates.min_duration >= 0.0, "opt.min_duration", "must be non-negative");
    r.require(c.plan.candidates.transfer_time_factor >= 0.0, "opt.transfer_time_factor", "must be non-negative");
    r.require(c.plan.candidates.max_duration > c.plan.candidates.min_duration, "opt.max_duration",
              "must exceed opt.min_duration");
    r.require(c.plan.solver.nlp.kkt_tolerance > 0.0, "opt.kkt_tol", "must be positive");
    r.require(c.plan.solver.nlp.feasibility_tolerance > 0.0, "opt.feas_tol", "must be positive");
    r.require(c.plan.solver.nlp.max_outer_iterations >= 1, "opt.max_outer", "must be at least 1");
    r.require(c.plan.solver.nlp.max_inner_iterations >= 1, "opt.max_inner", "must be at least 1");

    c.gains = {r.real("ctrl.kp_pos"), r.real("ctrl.kd_pos"), r.real("ctrl.kp_att"), r.real("ctrl.kd_att")};
    try {
        c.gains.validate();
    } catch (const std::invalid_argument& e) {
        r.fail("ctrl", e.what());
    }
    c.n_slots = static_cast<int>(r.integer("ctrl.n_slots"));
    c.feedforward = r.boolean("ctrl.feedforward");

    c.sim.physics_dt = r.real("sim.physics_dt");
    c.sim.control_hz = r.real("sim.control_hz");
    c.sim.tail = r.real("sim.tail");
    c.sim.pwm = r.boolean("sim.pwm");
    c.sim.thrusters = r.boolean("sim.thrusters");
    c.sim.mismatch.enabled = r.boolean("sim.mismatch");
    c.sim.mismatch.fraction = r.real("sim.mismatch_fraction");
    c.sim.disturbance.linear = r.real("sim.disturbance_linear");
    c.sim.disturbance.angular = r.real("sim.disturbance_angular");
    c.audit_tolerance = r.real("sim.audit_tolerance");
    r.require(c.sim.tail >= 0.0, "sim.tail", "must be non-negative");
    r.require(c.sim.mismatch.fraction >= 0.0 && c.sim.mismatch.fraction < 1.0, "sim.mismatch_fraction",
              "must lie in [0, 1)");
    r.require(c.sim.disturbance.linear >= 0.0, "sim.disturbance_linear", "must be non-negative");
    r.require(c.sim.disturbance.angular >= 0.0, "sim.disturbance_angular", "must be non-negative");
    r.require(c.audit_tolerance >= 0.0, "sim.audit_tolerance", "must be non-negative");

    c.seed = r.unsigned64("run.seed");
    c.out_dir = r.text("run.out");
    c.parallel = static_cast<int>(r.integer("run.parallel"));
    r.require(c.parallel >= 1, "run.parallel", "must be at least 1");

    c.sweep1.omega = {r.real("sweep1.omega_start"), r.real("sweep1.omega_stop"), r.real("sweep1.omega_step")};
    c.sweep1.f_thr = {r.real("sweep1.f_start"), r.real("sweep1.f_stop"), r.real("sweep1.f_step")};
    c.sweep1.theta_deg = {r.real("opt.theta_approach_deg"), r.real("opt.theta_approach_deg"), 1.0};
    c.sweep2.theta_deg = {r.real("sweep2.theta_start_deg"), r.real("sweep2.theta_stop_deg"),
                          r.real("sweep2.theta_step_deg")};
    c.sweep2.omega = {r.real("sweep2.omega_start"), r.real("sweep2.omega_stop"), r.real("sweep2.omega_step")};
    c.sweep2.f_thr = {r.real("sweep2.f_thr"), r.real("sweep2.f_thr"), 1.0};
    for (const char* prefix : {"sweep1.omega", "sweep1.f", "sweep2.theta", "sweep2.omega"}) {
        const std::string p(prefix);
        const std::string suffix = p == "sweep2.theta" ? "_deg" : "";
        const double start = r.real(p + "_start" + suffix), stop = r.real(p + "_stop" + suffix),
                     step = r.real(p + "_step" + suffix);
        r.require(step > 0.0, p + "_step" + suffix, "must be positive");
        r.require(stop >= start, p + "_stop" + suffix, "must not be below the start");
    }
    r.require(c.sweep1.f_thr.start > 0.0, "sweep1.f_start", "must be positive");
    r.require(c.sweep2.f_thr.start > 0.0, "sweep2.f_thr", "must be positive");

    if (r.errors().empty()) {
        try {
            c.sim_config().validate();
        } catch (const std::invalid_argument& e) {
            r.fail("sim", e.what());
        }
    }
    if (!r.errors().empty()) throw ConfigError("invalid configuration:\n" + r.errors());
    return c;
}

std::map<std::string, std::string> defaults() {
    std::map<std::string, std::string> m;
    for (const auto& e : config_schema()) m[e.key] = e.default_value;
    return m;
}

}  // namespace

ThrusterLayout RunConfig::layout() const { return ThrusterLayout::square(body.side_length, f_thr, thruster_offset); }

std::pair<Wrench, Wrench> RunConfig::wrench_bounds() const {
    const Wrench b = layout().attitude_independent_bounds();
    const double f = force_max ? *force_max : std::min(b.fx, b.fy);
    const double t = torque_max ? *torque_max : b.tau;
    return {Wrench{-f, -f, -t}, Wrench{f, f, t}};
}

OptProblem RunConfig::problem_template() const {
    OptProblem p;
    p.dt = opt_dt;
    p.x_init = chaser;
    p.w_goal = w_goal;
    p.w_u = w_u;
    std::tie(p.wrench_min, p.wrench_max) = wrench_bounds();
    p.kos = kos;
    p.kos_enabled = kos_enabled;
    p.target = target;
    p.body = body;
    p.blend_band = blend_band;
    return p;
}

SimConfig RunConfig::sim_config() const {
    SimConfig s = sim;
    s.body = body;
    s.layout = layout();
    s.gains = gains;
    s.n_slots = n_slots;
    s.feedforward = feedforward;
    s.seed = seed;
    return s;
}

const std::string& RunConfig::value(const std::string& key) const {
    for (const auto& [k, v] : values) {
        if (k == key) return v;
    }
    throw ConfigError("unknown key '" + key + "'");
}

std::string RunConfig::to_text() const {
    std::string out;
    for (const auto& [k, v] : values) out += k + " = " + v + "\n";
    return out;
}

std::string RunConfig::digest() const {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char ch : to_text()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    std::map<std::string, std::string> values = defaults();
    std::map<std::string, int> seen;
    std::string errors;
    std::istringstream in(text);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors += where + "expected 'key = value'\n";
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key)) {
            errors += where + "unknown key '" + key + "'\n";
        } else if (seen.count(key)) {
            errors += where + "duplicate key '" + key + "' (first set on line " + std::to_string(seen[key]) + ")\n";
        } else if (value.empty()) {
            errors += where + "missing value for '" + key + "'\n";
        } else {
            seen[key] = lineno;
            values[key] = value;
        }
    }
    if (!errors.empty()) throw ConfigError("cannot parse configuration:\n" + errors);
    return build(values);
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open configuration file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

RunConfig with_overrides(const RunConfig& cfg, const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> values(cfg.values.begin(), cfg.values.end());
    for (const auto& [k, v] : overrides) {
        if (!known_key(k)) throw ConfigError("unknown key '" + k + "'");
        values[k] = v;
    }
    return build(values);
}

}  // namespace rdv
