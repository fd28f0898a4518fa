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

#ifndef RENDEZVOUS_OPTIMIZER_HPP
#define RENDEZVOUS_OPTIMIZER_HPP

#include "rendezvous/dynamics.hpp"
#include "rendezvous/kos.hpp"
#include "rendezvous/nlp.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdv {

/**
 * @brief Direct-transcription problem for one fixed horizon.
 *
 * Knot k sits at time t_start + k * dt on the target's clock. Wrench k acts
 * on [t_k, t_k+1) and is expressed in the inertial frame.
 */
struct OptProblem {
    int knots = 2;  // N: number of wrench intervals; there are N + 1 state knots
    double dt = 0.1;
    double t_start = 0.0;
    BodyState x_init;
    double theta_finish = 0.0;
    BodyState x_goal;
    double w_goal = 100.0;
    double w_u = 10.0;
    Wrench wrench_min{-0.3, -0.3, -0.1};
    Wrench wrench_max{0.3, 0.3, 0.1};
    KosConfig kos;
    bool kos_enabled = true;
    /// Size knots + 1, or empty for State I everywhere.
    std::vector<KosState> kos_schedule;
    TargetState target;
    BodyParams body;
    /// Width of the smooth half-plane activation of the ellipse constraint [m].
    double blend_band = 0.02;

    double knot_time(int k) const { return t_start + k * dt; }
    KosState scheduled_state(int k) const;

    /// Throws std::invalid_argument listing every violated invariant.
    void validate() const;
};

struct ObjectiveBreakdown {
    double goal = 0.0;
    double kinetic = 0.0;
    double effort = 0.0;

    double total() const { return goal + kinetic + effort; }
};

struct PlannedTrajectory {
    std::vector<double> times;
    std::vector<BodyState> states;
    std::vector<Wrench> wrenches;
    std::vector<KosState> kos_states;
    double objective_value = 0.0;
    ObjectiveBreakdown breakdown;
    bool converged = false;
    nlp::Status status = nlp::Status::kNotConverged;
    nlp::Stats solver_stats;
    double dt = 0.1;
    BodyState x_goal;
    double theta_finish = 0.0;

    int knots() const { return static_cast<int>(wrenches.size()); }
    double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }
    double terminal_position_error() const;
    double terminal_attitude_error() const;
    /// Time of the first State II knot, if any.
    std::optional<double> kos_switch_time() const;
};

struct DurationCandidate {
    double t_total = 0.0;
    int n_revolutions = 0;
};

struct CandidateSettings {
    int max_candidates = 2;
    /// Absolute floor on the horizon [s].
    double min_duration = 5.0;
    /// plan() raises the floor to this multiple of minimum_transfer_time().
    double transfer_time_factor = 1.0;
    double max_duration = std::numeric_limits<double>::infinity();
    /// Used when the target does not rotate.
    std::vector<double> static_ladder{20.0, 40.0, 60.0, 80.0};
};

/**
 * Durations at which the target attitude equals @p theta_approach, ascending.
 * Phase index n starts at 0; candidates shorter than min_duration are skipped
 * and the next revolution is tried, up to max_candidates durations no longer
 * than max_duration. Returns an empty list when none qualifies.
 */
std::vector<DurationCandidate> duration_candidates(const TargetState& target, double theta_approach,
                                                   const CandidateSettings& settings);

/// J and its three terms for a candidate trajectory.
ObjectiveBreakdown evaluate_objective(const std::vector<BodyState>& states, const std::vector<Wrench>& wrenches,
                                      const OptProblem& problem);

/// Residuals of every constraint family for a candidate trajectory.
struct ConstraintResiduals {
    StateVector initial = StateVector::Zero();  // x_0 - x_init
    double terminal_attitude = 0.0;             // theta_N - theta_finish
    std::vector<StateVector> defects;           // x_k+1 - euler_step(x_k, F_k)
    double bound_violation = 0.0;               // max amount outside the wrench box
    std::vector<double> kos;                    // exact signed distance per knot for its scheduled state

    double max_defect() const;
    double min_kos() const;
};

ConstraintResiduals evaluate_constraints(const std::vector<BodyState>& states, const std::vector<Wrench>& wrenches,
                                         const OptProblem& problem);

/**
 * @brief The transcription as a sparse NLP.
 *
 * Variables are interleaved per knot, [x_0, F_0, x_1, F_1, ..., x_N], so the
 * Hessian of the augmented Lagrangian is banded.
 */
class Transcription final : public nlp::Problem {
public:
    explicit Transcription(OptProblem problem);

    int num_variables() const override { return 9 * problem_.knots + 6; }
    int num_equalities() const override { return 6 + 1 + 6 * problem_.knots; }
    int num_inequalities() const override { return static_cast<int>(6 * problem_.knots + kos_rows_.size()); }

    double objective(const nlp::Vector& z) const override;
    void objective_gradient(const nlp::Vector& z, nlp::Vector& grad) const override;
    void objective_hessian(const nlp::Vector& z, std::vector<nlp::Triplet>& out) const override;
    void constraints(const nlp::Vector& z, nlp::Vector& eq, nlp::Vector& ineq) const override;
    void constraint_jacobian(const nlp::Vector& z, std::vector<nlp::Triplet>& out) const override;
    void constraint_hessian(const nlp::Vector& z, const nlp::Vector& y,
                            std::vector<nlp::Triplet>& out) const override;

    nlp::Vector pack(const std::vector<BodyState>& states, const std::vector<Wrench>& wrenches) const;
    void unpack(const nlp::Vector& z, std::vector<BodyState>& states, std::vector<Wrench>& wrenches) const;

    const OptProblem& problem() const { return problem_; }

    static int state_index(int k) { return 9 * k; }
    static int wrench_index(int k) { return 9 * k + 6; }

private:
    enum class RowKind { kCircle, kEllipse };
    struct KosRow {
        int knot;
        RowKind kind;
        double cos_t;  // docking normal at the knot's time
        double sin_t;
    };

    double kos_value(const KosRow& row, const nlp::Vector& z, Vector2* grad, Eigen::Matrix2d* hess) const;

    OptProblem problem_;
    std::vector<KosRow> kos_rows_;
};

struct SolverSettings {
    nlp::Options nlp;
};

class SolveError : public std::runtime_error {
public:
    SolveError(nlp::Status status, nlp::Stats stats);
    nlp::Status status() const { return status_; }
    const nlp::Stats& stats() const { return stats_; }

private:
    nlp::Status status_;
    nlp::Stats stats_;
};

/// Straight-line position/attitude interpolation from x_init to x_goal with
/// zero wrenches.
PlannedTrajectory initial_guess(const OptProblem& problem);

/// Time-normalized resampling of a trajectory onto a new horizon.
PlannedTrajectory resample(const PlannedTrajectory& source, const OptProblem& problem);

/// Solves one horizon. Throws SolveError when the solver does not converge.
PlannedTrajectory solve(const OptProblem& problem, const std::optional<PlannedTrajectory>& guess = std::nullopt,
                        const SolverSettings& settings = {});

struct GoalSpec {
    BodyState x_goal;
    double theta_finish = 0.0;
};

/**
 * Co-rotating capture pose at time @p t: on the docking normal at center
 * distance (l_s + l_t)/2 + capture_offset, attitude equal to the normal's
 * angle (nearest representative to the initial attitude), velocity equal to
 * the target surface point's rotational velocity.
 */
GoalSpec capture_goal(const TargetState& target, double t, double chaser_side, double capture_offset,
                      const BodyState& x_init);

struct PlanSettings {
    CandidateSettings candidates;
    double capture_offset = 0.05;
    /// Sequential chain seeded by the previous candidate. When false every
    /// candidate cold-starts and they may run concurrently.
    bool warm_start = true;
    /// Worker threads for cold-start mode; ignored when warm_start is set.
    int threads = 1;
    SolverSettings solver;
};

/**
 * Rest-to-rest bang-bang time over the straight line from the start to the
 * capture standoff, using the smaller translational force bound. Zero when
 * the bounds give no acceleration (the solver then reports infeasibility).
 */
double minimum_transfer_time(const OptProblem& problem_template, double capture_offset);

struct CandidateOutcome {
    DurationCandidate candidate;
    bool converged = false;
    std::string reason;
    double objective = 0.0;
    std::optional<double> switch_time;
};

class PlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Two-pass KOS labelling for one horizon: solve with State I everywhere, then
 * latch State II from the first knot that satisfies classify() and re-solve.
 */
PlannedTrajectory solve_two_pass(OptProblem problem, const std::optional<PlannedTrajectory>& guess,
                                 const SolverSettings& settings);

/// Candidate search in ascending duration, keeping the lowest converged J
/// (shortest duration on ties). Throws PlanError when nothing converges.
PlannedTrajectory plan(double theta_approach, const OptProblem& problem_template, const PlanSettings& settings,
                       std::vector<CandidateOutcome>* log = nullptr);

/// Fills horizon-specific fields of @p problem_template for one candidate.
OptProblem instantiate(const OptProblem& problem_template, const DurationCandidate& candidate,
                       double capture_offset);

}  // namespace rdv

#endif  // RENDEZVOUS_OPTIMIZER_HPP
