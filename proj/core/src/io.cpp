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

#include "rendezvous/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rdv {

namespace {

constexpr const char* kMagic = "# rendezvous ";

std::string fmt(double v) { return format_double(v); }

std::pair<std::string, std::string> split_assignment(const std::string& s) {
    const auto eq = s.find(" = ");
    if (eq == std::string::npos) throw FormatError("malformed header line '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 3)};
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

}  // namespace

const std::string& Table::meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta) {
        if (k == key) return v;
    }
    throw FormatError(kind + " file has no '" + key + "' entry");
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw FormatError(kind + " file has no '" + name + "' column");
}

double Table::number(std::size_t row, std::size_t col) const {
    const std::string& s = rows.at(row).at(col);
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw FormatError(kind + " file: row " + std::to_string(row + 1) + ", column '" + columns.at(col) +
                          "' is not a number");
    }
    return v;
}

void write_table(std::ostream& os, const Table& t) {
    os << kMagic << t.kind << "\n";
    os << "# format_version = " << t.version << "\n";
    std::string digest;
    for (const auto& [k, v] : t.meta) {
        if (k == "config_digest") digest = v;
    }
    for (const auto& [k, v] : t.config) os << "# config: " << k << " = " << v << "\n";
    for (const auto& [k, v] : t.meta) os << "# meta: " << k << " = " << v << "\n";
    os << join(t.columns) << "\n";
    for (const auto& row : t.rows) os << join(row) << "\n";
}

void write_table(const std::string& path, const Table& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot write '" + path + "'");
    write_table(f, t);
    if (!f) throw FormatError("failed while writing '" + path + "'");
}

Table read_table(const std::string& path, const std::string& expected_kind) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "'");
    Table t;
    std::string line;
    if (!std::getline(f, line) || line.rfind(kMagic, 0) != 0) throw FormatError(path + ": not a rendezvous file");
    t.kind = line.substr(std::string(kMagic).size());
    if (t.kind != expected_kind) throw FormatError(path + ": expected a " + expected_kind + " file, found " + t.kind);
    bool have_version = false;
    while (std::getline(f, line)) {
        if (line.rfind("# ", 0) != 0) break;
        const std::string body = line.substr(2);
        if (body.rfind("format_version = ", 0) == 0) {
            t.version = std::stoi(body.substr(17));
            have_version = true;
        } else if (body.rfind("config: ", 0) == 0) {
            t.config.push_back(split_assignment(body.substr(8)));
        } else if (body.rfind("meta: ", 0) == 0) {
            t.meta.push_back(split_assignment(body.substr(6)));
        }
    }
    if (!have_version) throw FormatError(path + ": missing format_version");
    if (t.version != kFormatVersion) {
        throw FormatError(path + ": unsupported format version " + std::to_string(t.version));
    }
    t.columns = split_csv(line);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto row = split_csv(line);
        if (row.size() != t.columns.size()) {
            throw FormatError(path + ": row " + std::to_string(t.rows.size() + 1) + " has " +
                              std::to_string(row.size()) + " fields, expected " + std::to_string(t.columns.size()));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

RunConfig embedded_config(const Table& table) {
    std::string text;
    for (const auto& [k, v] : table.config) text += k + " = " + v + "\n";
    return parse_config(text, table.kind + " header");
}

Table make_table(const std::string& kind, const RunConfig& cfg, std::vector<std::string> columns) {
    Table t;
    t.kind = kind;
    t.config = cfg.values;
    t.meta.emplace_back("config_digest", cfg.digest());
    t.columns = std::move(columns);
    return t;
}

Table trajectory_table(const PlannedTrajectory& plan, const RunConfig& cfg) {
    Table t = make_table("trajectory", cfg, kTrajectoryColumns);
    const OptProblem tmpl = cfg.problem_template();
    t.meta.emplace_back("converged", plan.converged ? "true" : "false");
    t.meta.emplace_back("status", nlp::to_string(plan.status));
    t.meta.emplace_back("dt", fmt(plan.dt));
    t.meta.emplace_back("knots", std::to_string(plan.knots()));
    t.meta.emplace_back("objective", fmt(plan.objective_value));
    t.meta.emplace_back("objective_goal", fmt(plan.breakdown.goal));
    t.meta.emplace_back("objective_kinetic", fmt(plan.breakdown.kinetic));
    t.meta.emplace_back("objective_effort", fmt(plan.breakdown.effort));
    t.meta.emplace_back("theta_finish", fmt(plan.theta_finish));
    const auto g = plan.x_goal;
    t.meta.emplace_back("x_goal", fmt(g.x) + " " + fmt(g.y) + " " + fmt(g.theta) + " " + fmt(g.vx) + " " +
                                      fmt(g.vy) + " " + fmt(g.omega));
    t.meta.emplace_back("outer_iterations", std::to_string(plan.solver_stats.outer_iterations));
    t.meta.emplace_back("inner_iterations", std::to_string(plan.solver_stats.inner_iterations));
    t.meta.emplace_back("constraint_violation", fmt(plan.solver_stats.constraint_violation));
    t.meta.emplace_back("kos_r_safe", fmt(cfg.kos.r_safe()));
    t.meta.emplace_back("kos_ellipse_semi_major", fmt(cfg.kos.r_safe()));
    t.meta.emplace_back("kos_ellipse_semi_minor", fmt(0.5 * cfg.kos.r_safe()));
    t.meta.emplace_back("kos_angle_threshold", fmt(cfg.kos.effective_angle_threshold()));
    t.meta.emplace_back("kos_dist_threshold", fmt(cfg.kos.dist_threshold_factor * cfg.kos.r_safe()));
    for (std::size_t k = 0; k < plan.states.size(); ++k) {
        const BodyState& s = plan.states[k];
        const Wrench w = k < plan.wrenches.size() ? plan.wrenches[k] : Wrench{};
        const KosState state = plan.kos_states.empty() ? KosState::kStateI : plan.kos_states[k];
        const TargetPose pose = target_state_at(plan.times[k], tmpl.target);
        const double g_min =
            signed_distance(s.position(), build_region(state, pose.theta, pose.position, tmpl.kos));
        t.rows.push_back({fmt(plan.times[k]), fmt(s.x), fmt(s.y), fmt(s.theta), fmt(s.vx), fmt(s.vy), fmt(s.omega),
                          fmt(w.fx), fmt(w.fy), fmt(w.tau), std::to_string(static_cast<int>(state)), fmt(g_min)});
    }
    return t;
}

PlannedTrajectory trajectory_from_table(const Table& t) {
    for (const auto& c : kTrajectoryColumns) t.column(c);
    if (t.columns != kTrajectoryColumns) throw FormatError("trajectory file: unexpected column layout");
    if (t.rows.size() < 2) throw FormatError("trajectory file: needs at least two knots");
    PlannedTrajectory p;
    p.converged = t.meta_value("converged") == "true";
    p.dt = std::stod(t.meta_value("dt"));
    p.theta_finish = std::stod(t.meta_value("theta_finish"));
    p.objective_value = std::stod(t.meta_value("objective"));
    p.breakdown = {std::stod(t.meta_value("objective_goal")), std::stod(t.meta_value("objective_kinetic")),
                   std::stod(t.meta_value("objective_effort"))};
    std::istringstream goal(t.meta_value("x_goal"));
    goal >> p.x_goal.x >> p.x_goal.y >> p.x_goal.theta >> p.x_goal.vx >> p.x_goal.vy >> p.x_goal.omega;
    if (!goal) throw FormatError("trajectory file: malformed x_goal");
    p.status = p.converged ? nlp::Status::kConverged : nlp::Status::kNotConverged;
    p.solver_stats.outer_iterations = std::stoi(t.meta_value("outer_iterations"));
    p.solver_stats.inner_iterations = std::stoi(t.meta_value("inner_iterations"));
    p.solver_stats.constraint_violation = std::stod(t.meta_value("constraint_violation"));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        p.times.push_back(t.number(r, 0));
        p.states.push_back({t.number(r, 1), t.number(r, 2), t.number(r, 3), t.number(r, 4), t.number(r, 5),
                            t.number(r, 6)});
        if (r + 1 < t.rows.size()) p.wrenches.push_back({t.number(r, 7), t.number(r, 8), t.number(r, 9)});
        p.kos_states.push_back(t.number(r, 10) == 2.0 ? KosState::kStateII : KosState::kStateI);
    }
    return p;
}

Table run_record_table(const SimResult& r, const RunConfig& cfg) {
    Table t = make_table("run_record", cfg, {"t", "x", "y", "theta", "vx", "vy", "omega", "g"});
    t.meta.emplace_back("terminal_position_error", fmt(r.terminal_position_error));
    t.meta.emplace_back("terminal_attitude_error", fmt(r.terminal_attitude_error));
    t.meta.emplace_back("terminal_relative_velocity", fmt(r.terminal_relative_velocity));
    t.meta.emplace_back("min_kos_distance", fmt(r.min_kos_distance));
    t.meta.emplace_back("tracking_rms", fmt(r.tracking_rms()));
    t.meta.emplace_back("plant_mass", fmt(r.plant_body.mass));
    t.meta.emplace_back("plant_inertia", fmt(r.plant_body.inertia));
    t.meta.emplace_back("plant_f_max", fmt(r.plant_f_max));
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        const BodyState& s = r.states[i];
        t.rows.push_back({fmt(r.times[i]), fmt(s.x), fmt(s.y), fmt(s.theta), fmt(s.vx), fmt(s.vy), fmt(s.omega),
                          fmt(r.kos_distance[i])});
    }
    return t;
}

Table firing_table(const SimResult& r, const RunConfig& cfg) {
    Table t = make_table("firing_sequence", cfg, {"t_slot", "u1", "u2", "u3", "u4", "u5", "u6", "u7", "u8"});
    t.meta.emplace_back("pwm", cfg.sim.pwm ? "true" : "false");
    for (std::size_t i = 0; i < r.firings.size(); ++i) {
        std::vector<std::string> row{fmt(r.slot_times[i])};
        for (double u : r.firings[i]) row.push_back(fmt(u));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table control_table(const SimResult& r, const RunConfig& cfg) {
    Table t = make_table("control_log", cfg,
                         {"t", "ref_x", "ref_y", "ref_theta", "e_x", "e_y", "e_theta", "e_vx", "e_vy", "e_omega",
                          "vrel_x", "vrel_y", "vrel_norm"});
    for (std::size_t i = 0; i < r.control_times.size(); ++i) {
        const auto& ref = r.references[i];
        const auto& e = r.tracking_errors[i];
        const auto& v = r.relative_velocity[i];
        t.rows.push_back({fmt(r.control_times[i]), fmt(ref.x), fmt(ref.y), fmt(ref.theta), fmt(e.e_x), fmt(e.e_y),
                          fmt(e.e_theta), fmt(e.e_vx), fmt(e.e_vy), fmt(e.e_omega), fmt(v.x()), fmt(v.y()),
                          fmt(v.norm())});
    }
    return t;
}

}  // namespace rdv
