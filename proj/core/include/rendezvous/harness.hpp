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

#ifndef RENDEZVOUS_HARNESS_HPP
#define RENDEZVOUS_HARNESS_HPP

#include "rendezvous/config.hpp"
#include "rendezvous/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rdv {

/// Process exit codes shared by the commands.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,        // bad flags or invalid config
    kExitPlanFailed = 3,   // no duration candidate converged
    kExitFormat = 4,       // unreadable or mismatched input file
    kExitAuditFailed = 5,  // safety re-check below tolerance
};

/**
 * @brief Outcome of one sweep grid point.
 *
 * Position and attitude errors are those of the planned trajectory against
 * its goal state.
 */
struct SweepRecord {
    int i_a = 0;  // sweep1: omega index; sweep2: theta index
    int i_b = 0;  // sweep1: f_thr index; sweep2: omega index
    double omega = 0.0;
    double f_thr = 0.0;
    double theta_deg = 0.0;
    bool converged = false;
    /// ok, no_candidates, all_failed or invalid.
    std::string reason;
    double duration = 0.0;
    int n_revolutions = 0;
    ObjectiveBreakdown breakdown;
    double objective = 0.0;
    double position_error = 0.0;
    double attitude_error = 0.0;
    std::optional<double> switch_time;
    double wall_time = 0.0;
};

/// Plans one scenario and fills a record; never throws for solver failures.
SweepRecord evaluate_point(const RunConfig& cfg);

struct SweepOptions {
    int threads = 1;
    /// When set, grid points are dequeued in a shuffled order (results are
    /// still returned in grid order).
    std::optional<std::uint64_t> shuffle_seed;
    std::ostream* progress = nullptr;
};

/// omega x f_thr grid of cfg.sweep1, row-major in omega.
std::vector<SweepRecord> run_sweep1(const RunConfig& cfg, const SweepOptions& options = {});
/// theta x omega grid of cfg.sweep2 at the fixed sweep2 thrust, row-major in theta.
std::vector<SweepRecord> run_sweep2(const RunConfig& cfg, const SweepOptions& options = {});

struct Sweep1Row {
    int i_omega = 0;
    double omega = 0.0;
    int n_points = 0;
    int n_converged = 0;
    double mean_error = 0.0;
    double std_error = 0.0;  // population standard deviation
    double mean_goal = 0.0;
    double mean_kinetic = 0.0;
    double mean_effort = 0.0;
    double frac_goal = 0.0;
    double frac_kinetic = 0.0;
    double frac_effort = 0.0;
    std::string dominant;  // goal, kinetic, effort or none
};

struct Sweep2Row {
    int i_theta = 0;
    double theta_deg = 0.0;
    int n_points = 0;
    int n_converged = 0;
    double mean_error = 0.0;
    double std_error = 0.0;
    double min_error = 0.0;
    double median_error = 0.0;
    double max_error = 0.0;
};

/// Per-omega statistics over converged points.
std::vector<Sweep1Row> aggregate_sweep1(const std::vector<SweepRecord>& records);
/// Per-theta statistics over converged points.
std::vector<Sweep2Row> aggregate_sweep2(const std::vector<SweepRecord>& records);

Table sweep_points_table(const std::string& kind, const std::vector<SweepRecord>& records, const RunConfig& cfg);
std::vector<SweepRecord> sweep_records_from_table(const Table& table);
Table sweep1_summary_table(const std::vector<Sweep1Row>& rows, const RunConfig& cfg);
Table sweep2_summary_table(const std::vector<Sweep2Row>& rows, const RunConfig& cfg);

/// Writes <out>/trajectory.csv and <out>/plan_summary.txt.
int cmd_plan(const RunConfig& cfg, std::ostream& log);

/**
 * Tracks a trajectory file and writes run_record.csv, firing.csv,
 * control_log.csv and track_summary.txt. Without @p cfg the scenario
 * embedded in the trajectory file is used.
 */
int cmd_track(const std::string& trajectory_path, const std::optional<RunConfig>& cfg, std::ostream& log);

/// Writes sweep1_points.csv and sweep1_summary.csv.
int cmd_sweep1(const RunConfig& cfg, std::ostream& log);
/// Writes sweep2_points.csv and sweep2_summary.csv.
int cmd_sweep2(const RunConfig& cfg, std::ostream& log);

/// Re-classifies every recorded state and reports the minimum signed distance.
int cmd_audit(const std::string& run_record_path, const std::optional<RunConfig>& cfg, std::ostream& log);

}  // namespace rdv

#endif  // RENDEZVOUS_HARNESS_HPP
