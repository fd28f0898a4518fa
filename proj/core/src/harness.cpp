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

#include "rendezvous/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace rdv {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string fmt(double v) { return format_double(v); }

std::filesystem::path output_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// Population mean and standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size()))};
}

std::vector<SweepRecord> run_grid(int n, const std::function<SweepRecord(int)>& evaluate,
                                  const SweepOptions& options) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (options.shuffle_seed) {
        std::mt19937_64 rng(*options.shuffle_seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<SweepRecord> out(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (int j = next.fetch_add(1); j < n; j = next.fetch_add(1)) {
            const int idx = order[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(idx)] = evaluate(idx);
            const int finished = done.fetch_add(1) + 1;
            if (options.progress) {
                const SweepRecord& r = out[static_cast<std::size_t>(idx)];
                std::lock_guard<std::mutex> lock(progress_mutex);
                *options.progress << "[" << finished << "/" << n << "] omega=" << fmt(r.omega)
                                  << " f_thr=" << fmt(r.f_thr) << " theta=" << fmt(r.theta_deg) << " " << r.reason;
                if (r.converged) *options.progress << " error=" << r.position_error;
                *options.progress << "\n";
            }
        }
    };
    const int threads = std::clamp(options.threads, 1, std::max(n, 1));
    std::vector<std::jthread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    return out;
}

std::string dominant_term(double goal, double kinetic, double effort) {
    if (goal == 0.0 && kinetic == 0.0 && effort == 0.0) return "none";
    if (goal >= kinetic && goal >= effort) return "goal";
    return kinetic >= effort ? "kinetic" : "effort";
}

void write_plan_summary(std::ostream& os, const PlannedTrajectory& p, const std::vector<CandidateOutcome>& log,
                        const RunConfig& cfg) {
    os << "config_digest " << cfg.digest() << "\n";
    os << "status " << nlp::to_string(p.status) << "\n";
    os << "duration " << p.duration() << " s (" << p.knots() << " intervals of " << p.dt << " s)\n";
    os << "objective " << p.objective_value << "\n";
    os << "  goal    " << p.breakdown.goal << "\n";
    os << "  kinetic " << p.breakdown.kinetic << "\n";
    os << "  effort  " << p.breakdown.effort << "\n";
    os << "terminal position error " << p.terminal_position_error() << " m\n";
    os << "terminal attitude error " << p.terminal_attitude_error() << " rad\n";
    if (const auto sw = p.kos_switch_time()) {
        os << "kos switch to state II at " << *sw << " s (" << 100.0 * (*sw - p.times.front()) / p.duration()
           << "% of the horizon)\n";
    } else {
        os << "kos switch to state II: none\n";
    }
    os << "solver outer " << p.solver_stats.outer_iterations << " inner " << p.solver_stats.inner_iterations
       << " violation " << p.solver_stats.constraint_violation << "\n";
    os << "candidates\n";
    for (const auto& c : log) {
        os << "  T=" << c.candidate.t_total << " n=" << c.candidate.n_revolutions << " "
           << (c.converged ? "converged J=" + fmt(c.objective) : "failed: " + c.reason) << "\n";
    }
}

}  // namespace

SweepRecord evaluate_point(const RunConfig& cfg) {
    SweepRecord rec;
    rec.omega = cfg.target.omega;
    rec.f_thr = cfg.f_thr;
    rec.theta_deg = cfg.theta_approach * kRadToDeg;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CandidateOutcome> log;
    try {
        PlanSettings settings = cfg.plan;
        settings.threads = 1;
        const PlannedTrajectory p = plan(cfg.theta_approach, cfg.problem_template(), settings, &log);
        rec.converged = true;
        rec.reason = "ok";
        rec.duration = p.duration();
        // The horizon is rounded to whole knots, so match the nearest candidate.
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : log) {
            const double gap = std::abs(c.candidate.t_total - p.duration());
            if (c.converged && gap < best) {
                best = gap;
                rec.n_revolutions = c.candidate.n_revolutions;
            }
        }
        rec.breakdown = p.breakdown;
        rec.objective = p.objective_value;
        rec.position_error = p.terminal_position_error();
        rec.attitude_error = p.terminal_attitude_error();
        rec.switch_time = p.kos_switch_time();
    } catch (const PlanError&) {
        rec.reason = log.empty() ? "no_candidates" : "all_failed";
    } catch (const std::invalid_argument&) {
        rec.reason = "invalid";
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::vector<SweepRecord> run_sweep1(const RunConfig& cfg, const SweepOptions& options) {
    const GridAxis& wa = cfg.sweep1.omega;
    const GridAxis& fa = cfg.sweep1.f_thr;
    const int nf = fa.size();
    return run_grid(
        wa.size() * nf,
        [&](int idx) {
            const int i = idx / nf, j = idx % nf;
            SweepRecord rec;
            try {
                rec = evaluate_point(with_overrides(
                    cfg, {{"target.omega", fmt(wa.at(i))}, {"thruster.f_max", fmt(fa.at(j))}}));
            } catch (const ConfigError&) {
                rec.omega = wa.at(i);
                rec.f_thr = fa.at(j);
                rec.theta_deg = cfg.theta_approach * kRadToDeg;
                rec.reason = "invalid";
            }
            rec.i_a = i;
            rec.i_b = j;
            return rec;
        },
        options);
}

std::vector<SweepRecord> run_sweep2(const RunConfig& cfg, const SweepOptions& options) {
    const GridAxis& ta = cfg.sweep2.theta_deg;
    const GridAxis& wa = cfg.sweep2.omega;
    const int nw = wa.size();
    return run_grid(
        ta.size() * nw,
        [&](int idx) {
            const int i = idx / nw, j = idx % nw;
            SweepRecord rec;
            try {
                rec = evaluate_point(with_overrides(cfg, {{"opt.theta_approach_deg", fmt(ta.at(i))},
                                                          {"target.omega", fmt(wa.at(j))},
                                                          {"thruster.f_max", fmt(cfg.sweep2.f_thr.start)}}));
            } catch (const ConfigError&) {
                rec.omega = wa.at(j);
                rec.f_thr = cfg.sweep2.f_thr.start;
                rec.reason = "invalid";
            }
            rec.theta_deg = ta.at(i);
            rec.i_a = i;
            rec.i_b = j;
            return rec;
        },
        options);
}

std::vector<Sweep1Row> aggregate_sweep1(const std::vector<SweepRecord>& records) {
    std::vector<Sweep1Row> rows;
    for (const SweepRecord& r : records) {
        if (rows.empty() || rows.back().i_omega != r.i_a) {
            rows.push_back({});
            rows.back().i_omega = r.i_a;
            rows.back().omega = r.omega;
        }
        ++rows.back().n_points;
    }
    for (Sweep1Row& row : rows) {
        std::vector<double> err;
        double goal = 0.0, kin = 0.0, eff = 0.0;
        for (const SweepRecord& r : records) {
            if (r.i_a != row.i_omega || !r.converged) continue;
            err.push_back(r.position_error);
            goal += r.breakdown.goal;
            kin += r.breakdown.kinetic;
            eff += r.breakdown.effort;
        }
        row.n_converged = static_cast<int>(err.size());
        std::tie(row.mean_error, row.std_error) = mean_std(err);
        if (row.n_converged > 0) {
            const double n = row.n_converged;
            row.mean_goal = goal / n;
            row.mean_kinetic = kin / n;
            row.mean_effort = eff / n;
            const double total = row.mean_goal + row.mean_kinetic + row.mean_effort;
            if (total > 0.0) {
                row.frac_goal = row.mean_goal / total;
                row.frac_kinetic = row.mean_kinetic / total;
                row.frac_effort = row.mean_effort / total;
            }
        }
        row.dominant = dominant_term(row.mean_goal, row.mean_kinetic, row.mean_effort);
    }
    return rows;
}

std::vector<Sweep2Row> aggregate_sweep2(const std::vector<SweepRecord>& records) {
    std::vector<Sweep2Row> rows;
    for (const SweepRecord& r : records) {
        if (rows.empty() || rows.back().i_theta != r.i_a) {
            rows.push_back({});
            rows.back().i_theta = r.i_a;
            rows.back().theta_deg = r.theta_deg;
        }
        ++rows.back().n_points;
    }
    for (Sweep2Row& row : rows) {
        std::vector<double> err;
        for (const SweepRecord& r : records) {
            if (r.i_a == row.i_theta && r.converged) err.push_back(r.position_error);
        }
        row.n_converged = static_cast<int>(err.size());
        std::tie(row.mean_error, row.std_error) = mean_std(err);
        if (!err.empty()) {
            std::sort(err.begin(), err.end());
            row.min_error = err.front();
            row.max_error = err.back();
            const std::size_t h = err.size() / 2;
            row.median_error = err.size() % 2 ? err[h] : 0.5 * (err[h - 1] + err[h]);
        }
    }
    return rows;
}

Table sweep_points_table(const std::string& kind, const std::vector<SweepRecord>& records, const RunConfig& cfg) {
    Table t = make_table(kind, cfg,
                         {"i_a", "i_b", "omega", "f_thr", "theta_deg", "converged", "reason", "duration",
                          "n_revolutions", "objective", "goal", "kinetic", "effort", "position_error",
                          "attitude_error", "switch_time", "wall_time"});
    t.meta.emplace_back("index_a", kind == "sweep1_points" ? "omega" : "theta_deg");
    t.meta.emplace_back("index_b", kind == "sweep1_points" ? "f_thr" : "omega");
    for (const SweepRecord& r : records) {
        t.rows.push_back({std::to_string(r.i_a), std::to_string(r.i_b), fmt(r.omega), fmt(r.f_thr),
                          fmt(r.theta_deg), r.converged ? "1" : "0", r.reason, fmt(r.duration),
                          std::to_string(r.n_revolutions), fmt(r.objective), fmt(r.breakdown.goal),
                          fmt(r.breakdown.kinetic), fmt(r.breakdown.effort), fmt(r.position_error),
                          fmt(r.attitude_error), r.switch_time ? fmt(*r.switch_time) : "nan", fmt(r.wall_time)});
    }
    return t;
}

std::vector<SweepRecord> sweep_records_from_table(const Table& t) {
    std::vector<SweepRecord> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        SweepRecord r;
        r.i_a = static_cast<int>(t.number(i, t.column("i_a")));
        r.i_b = static_cast<int>(t.number(i, t.column("i_b")));
        r.omega = t.number(i, t.column("omega"));
        r.f_thr = t.number(i, t.column("f_thr"));
        r.theta_deg = t.number(i, t.column("theta_deg"));
        r.converged = t.rows[i][t.column("converged")] == "1";
        r.reason = t.rows[i][t.column("reason")];
        r.duration = t.number(i, t.column("duration"));
        r.n_revolutions = static_cast<int>(t.number(i, t.column("n_revolutions")));
        r.objective = t.number(i, t.column("objective"));
        r.breakdown = {t.number(i, t.column("goal")), t.number(i, t.column("kinetic")),
                       t.number(i, t.column("effort"))};
        r.position_error = t.number(i, t.column("position_error"));
        r.attitude_error = t.number(i, t.column("attitude_error"));
        if (t.rows[i][t.column("switch_time")] != "nan") r.switch_time = t.number(i, t.column("switch_time"));
        r.wall_time = t.number(i, t.column("wall_time"));
        out.push_back(std::move(r));
    }
    return out;
}

Table sweep1_summary_table(const std::vector<Sweep1Row>& rows, const RunConfig& cfg) {
    Table t = make_table("sweep1_summary", cfg,
                         {"i_omega", "omega", "n_points", "n_converged", "mean_error", "std_error", "mean_goal",
                          "mean_kinetic", "mean_effort", "frac_goal", "frac_kinetic", "frac_effort", "dominant"});
    t.meta.emplace_back("statistics", "over converged points; std is the population standard deviation");
    for (const Sweep1Row& r : rows) {
        t.rows.push_back({std::to_string(r.i_omega), fmt(r.omega), std::to_string(r.n_points),
                          std::to_string(r.n_converged), fmt(r.mean_error), fmt(r.std_error), fmt(r.mean_goal),
                          fmt(r.mean_kinetic), fmt(r.mean_effort), fmt(r.frac_goal), fmt(r.frac_kinetic),
                          fmt(r.frac_effort), r.dominant});
    }
    return t;
}

Table sweep2_summary_table(const std::vector<Sweep2Row>& rows, const RunConfig& cfg) {
    Table t = make_table("sweep2_summary", cfg,
                         {"i_theta", "theta_deg", "n_points", "n_converged", "mean_error", "std_error",
                          "min_error", "median_error", "max_error"});
    t.meta.emplace_back("statistics", "over converged points; std is the population standard deviation");
    for (const Sweep2Row& r : rows) {
        t.rows.push_back({std::to_string(r.i_theta), fmt(r.theta_deg), std::to_string(r.n_points),
                          std::to_string(r.n_converged), fmt(r.mean_error), fmt(r.std_error), fmt(r.min_error),
                          fmt(r.median_error), fmt(r.max_error)});
    }
    return t;
}

int cmd_plan(const RunConfig& cfg, std::ostream& log) {
    std::vector<CandidateOutcome> outcomes;
    PlannedTrajectory p;
    try {
        p = plan(cfg.theta_approach, cfg.problem_template(), cfg.plan, &outcomes);
    } catch (const PlanError& e) {
        log << "plan failed: " << e.what() << "\n";
        for (const auto& c : outcomes) {
            log << "  T=" << c.candidate.t_total << " failed: " << c.reason << "\n";
        }
        return kExitPlanFailed;
    }
    const auto dir = output_dir(cfg);
    write_table((dir / "trajectory.csv").string(), trajectory_table(p, cfg));
    std::ofstream summary(dir / "plan_summary.txt");
    write_plan_summary(summary, p, outcomes, cfg);
    write_plan_summary(log, p, outcomes, cfg);
    log << "wrote " << (dir / "trajectory.csv").string() << "\n";
    return kExitOk;
}

int cmd_track(const std::string& trajectory_path, const std::optional<RunConfig>& override_cfg,
              std::ostream& log) {
    Table table;
    PlannedTrajectory p;
    RunConfig cfg;
    try {
        table = read_table(trajectory_path, "trajectory");
        p = trajectory_from_table(table);
        cfg = override_cfg ? *override_cfg : embedded_config(table);
    } catch (const std::exception& e) {
        log << "cannot use trajectory: " << e.what() << "\n";
        return kExitFormat;
    }
    if (!p.converged) {
        log << "cannot use trajectory: " << trajectory_path << " is not a converged plan\n";
        return kExitFormat;
    }
    const std::string planned_digest = table.meta_value("config_digest");
    if (planned_digest != cfg.digest()) {
        log << "note: tracking with config " << cfg.digest() << ", trajectory was planned with " << planned_digest
            << "\n";
    }
    const SimResult r = run(p, cfg.sim_config(), cfg.target, cfg.kos);
    const auto dir = output_dir(cfg);
    write_table((dir / "run_record.csv").string(), run_record_table(r, cfg));
    write_table((dir / "firing.csv").string(), firing_table(r, cfg));
    write_table((dir / "control_log.csv").string(), control_table(r, cfg));
    std::ostringstream s;
    s << "config_digest " << cfg.digest() << "\n";
    s << "planned terminal position error " << p.terminal_position_error() << " m\n";
    s << "tracked terminal position error " << r.terminal_position_error << " m\n";
    s << "tracked terminal attitude error " << r.terminal_attitude_error << " rad\n";
    s << "terminal relative velocity " << r.terminal_relative_velocity << " m/s\n";
    s << "tracking rms " << r.tracking_rms() << " m\n";
    s << "safety audit min g " << r.min_kos_distance << " m ("
      << (r.min_kos_distance >= -cfg.audit_tolerance ? "ok" : "VIOLATION") << ", tolerance " << cfg.audit_tolerance
      << " m)\n";
    std::ofstream(dir / "track_summary.txt") << s.str();
    log << s.str() << "wrote " << dir.string() << "/{run_record,firing,control_log}.csv\n";
    return kExitOk;
}

int cmd_sweep1(const RunConfig& cfg, std::ostream& log) {
    SweepOptions options;
    options.threads = cfg.parallel;
    options.progress = &log;
    const auto records = run_sweep1(cfg, options);
    const auto rows = aggregate_sweep1(records);
    const auto dir = output_dir(cfg);
    write_table((dir / "sweep1_points.csv").string(), sweep_points_table("sweep1_points", records, cfg));
    write_table((dir / "sweep1_summary.csv").string(), sweep1_summary_table(rows, cfg));
    for (const auto& r : rows) {
        log << "omega " << r.omega << " mean " << r.mean_error << " std " << r.std_error << " (" << r.n_converged
            << "/" << r.n_points << ") dominant " << r.dominant << "\n";
    }
    log << "wrote " << (dir / "sweep1_summary.csv").string() << "\n";
    return kExitOk;
}

int cmd_sweep2(const RunConfig& cfg, std::ostream& log) {
    SweepOptions options;
    options.threads = cfg.parallel;
    options.progress = &log;
    const auto records = run_sweep2(cfg, options);
    const auto rows = aggregate_sweep2(records);
    const auto dir = output_dir(cfg);
    write_table((dir / "sweep2_points.csv").string(), sweep_points_table("sweep2_points", records, cfg));
    write_table((dir / "sweep2_summary.csv").string(), sweep2_summary_table(rows, cfg));
    for (const auto& r : rows) {
        log << "theta " << r.theta_deg << " mean " << r.mean_error << " std " << r.std_error << " ("
            << r.n_converged << "/" << r.n_points << ")\n";
    }
    log << "wrote " << (dir / "sweep2_summary.csv").string() << "\n";
    return kExitOk;
}

int cmd_audit(const std::string& run_record_path, const std::optional<RunConfig>& override_cfg,
              std::ostream& log) {
    Table t;
    RunConfig cfg;
    std::vector<double> times, recorded;
    std::vector<BodyState> states;
    try {
        t = read_table(run_record_path, "run_record");
        cfg = override_cfg ? *override_cfg : embedded_config(t);
        const std::size_t g_col = t.column("g");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            times.push_back(t.number(i, t.column("t")));
            states.push_back({t.number(i, t.column("x")), t.number(i, t.column("y")), t.number(i, t.column("theta")),
                              t.number(i, t.column("vx")), t.number(i, t.column("vy")),
                              t.number(i, t.column("omega"))});
            recorded.push_back(t.number(i, g_col));
        }
    } catch (const std::exception& e) {
        log << "cannot audit: " << e.what() << "\n";
        return kExitFormat;
    }
    if (states.empty()) {
        log << "cannot audit: " << run_record_path << " has no states\n";
        return kExitFormat;
    }
    double g_min = std::numeric_limits<double>::infinity(), t_min = 0.0, drift = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const TargetPose pose = target_state_at(times[i], cfg.target);
        const double g = audit_distance(states[i], pose.theta, pose.position, cfg.kos);
        drift = std::max(drift, std::abs(g - recorded[i]));
        if (g < g_min) {
            g_min = g;
            t_min = times[i];
        }
    }
    const bool ok = g_min >= -cfg.audit_tolerance;
    log << "states " << states.size() << "\n";
    log << "min g " << g_min << " m at t = " << t_min << " s\n";
    log << "max difference from recorded g " << drift << " m\n";
    log << (ok ? "PASS" : "FAIL") << " (tolerance " << cfg.audit_tolerance << " m)\n";
    return ok ? kExitOk : kExitAuditFailed;
}

}  // namespace rdv
