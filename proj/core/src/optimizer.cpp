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

#include "rendezvous/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace rdv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Quintic smoothstep on [0, 1] and its derivatives.
struct Smoothstep {
    double value, d1, d2;
};

Smoothstep smoothstep(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0, 0.0};
    const double t2 = t * t, t3 = t2 * t;
    return {t3 * (10.0 - 15.0 * t + 6.0 * t2), 30.0 * t2 * (1.0 - t) * (1.0 - t), 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)};
}

}  // namespace

KosState OptProblem::scheduled_state(int k) const {
    return kos_schedule.empty() ? KosState::kStateI : kos_schedule.at(static_cast<std::size_t>(k));
}

void OptProblem::validate() const {
    std::string errors;
    if (knots < 1) errors += "knot count must be at least 1; ";
    if (!(dt > 0.0)) errors += "dt must be positive; ";
    if (!(w_goal >= 0.0)) errors += "w_goal must be non-negative; ";
    if (!(w_u >= 0.0)) errors += "w_u must be non-negative; ";
    const auto lo = wrench_min.vector(), hi = wrench_max.vector();
    if ((lo.array() > 0.0).any() || (hi.array() < 0.0).any()) errors += "wrench bounds must bracket zero; ";
    if (!kos_schedule.empty() && static_cast<int>(kos_schedule.size()) != knots + 1) {
        errors += "kos schedule must have one entry per knot; ";
    }
    if (!x_init.finite() || !x_goal.finite()) errors += "boundary states must be finite; ";
    try {
        body.validate();
        kos.validate();
    } catch (const std::invalid_argument& e) {
        errors += e.what();
    }
    if (!errors.empty()) throw std::invalid_argument(errors);
}

double PlannedTrajectory::terminal_position_error() const {
    return (states.back().position() - x_goal.position()).norm();
}

double PlannedTrajectory::terminal_attitude_error() const {
    return std::abs(wrap_angle(states.back().theta - theta_finish));
}

std::optional<double> PlannedTrajectory::kos_switch_time() const {
    for (std::size_t k = 0; k < kos_states.size(); ++k) {
        if (kos_states[k] == KosState::kStateII) return times[k];
    }
    return std::nullopt;
}

std::vector<DurationCandidate> duration_candidates(const TargetState& target, double theta_approach,
                                                   const CandidateSettings& settings) {
    std::vector<DurationCandidate> out;
    if (settings.max_candidates <= 0) return out;
    if (target.omega == 0.0) {
        std::vector<double> ladder = settings.static_ladder;
        std::sort(ladder.begin(), ladder.end());
        int n = 0;
        for (double t : ladder) {
            if (t < settings.min_duration || t > settings.max_duration) continue;
            out.push_back({t, n++});
            if (static_cast<int>(out.size()) == settings.max_candidates) break;
        }
        return out;
    }
    // Phase still to go, measured in the direction of rotation, in [0, 2pi).
    const double direction = target.omega > 0.0 ? 1.0 : -1.0;
    double phase = std::fmod(direction * (theta_approach - target.theta0), kTwoPi);
    if (phase < 0.0) phase += kTwoPi;
    const double rate = std::abs(target.omega);
    for (int n = 0;; ++n) {
        const double t = (phase + kTwoPi * n) / rate;
        if (t > settings.max_duration) break;
        if (t < settings.min_duration) continue;
        out.push_back({t, n});
        if (static_cast<int>(out.size()) == settings.max_candidates) break;
    }
    return out;
}

ObjectiveBreakdown evaluate_objective(const std::vector<BodyState>& states, const std::vector<Wrench>& wrenches,
                                      const OptProblem& p) {
    ObjectiveBreakdown b;
    const StateVector terminal_error = states.at(static_cast<std::size_t>(p.knots)).vector() - p.x_goal.vector();
    b.goal = p.w_goal * terminal_error.squaredNorm();
    for (int k = 0; k < p.knots; ++k) {
        const BodyState& s = states[static_cast<std::size_t>(k)];
        const Wrench& w = wrenches[static_cast<std::size_t>(k)];
        b.kinetic += (0.5 * p.body.mass * (s.vx * s.vx + s.vy * s.vy) + 0.5 * p.body.inertia * s.omega * s.omega) * p.dt;
        b.effort += p.w_u * (w.fx * w.fx + w.fy * w.fy + w.tau * w.tau) * p.dt;
    }
    return b;
}

double ConstraintResiduals::max_defect() const {
    double m = 0.0;
    for (const auto& d : defects) m = std::max(m, d.cwiseAbs().maxCoeff());
    return m;
}

double ConstraintResiduals::min_kos() const {
    double m = std::numeric_limits<double>::infinity();
    for (double g : kos) m = std::min(m, g);
    return m;
}

ConstraintResiduals evaluate_constraints(const std::vector<BodyState>& states, const std::vector<Wrench>& wrenches,
                                         const OptProblem& p) {
    ConstraintResiduals r;
    r.initial = states.front().vector() - p.x_init.vector();
    r.terminal_attitude = states.at(static_cast<std::size_t>(p.knots)).theta - p.theta_finish;
    const auto lo = p.wrench_min.vector(), hi = p.wrench_max.vector();
    for (int k = 0; k < p.knots; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        r.defects.push_back(states[ku + 1].vector() - euler_step(states[ku], wrenches[ku], p.body, p.dt).vector());
        const auto w = wrenches[ku].vector();
        r.bound_violation = std::max(r.bound_violation, (lo - w).cwiseMax(w - hi).maxCoeff());
    }
    for (int k = 0; k <= p.knots; ++k) {
        if (!p.kos_enabled) {
            r.kos.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        const TargetPose pose = target_state_at(p.knot_time(k), p.target);
        const KosRegion region = build_region(p.scheduled_state(k), pose.theta, pose.position, p.kos);
        r.kos.push_back(signed_distance(states[static_cast<std::size_t>(k)].position(), region));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Transcription

Transcription::Transcription(OptProblem problem) : problem_(std::move(problem)) {
    problem_.validate();
    if (!problem_.kos_enabled) return;
    for (int k = 0; k <= problem_.knots; ++k) {
        const double th = target_state_at(problem_.knot_time(k), problem_.target).theta;
        const double c = std::cos(th), s = std::sin(th);
        if (problem_.scheduled_state(k) == KosState::kStateI) kos_rows_.push_back({k, RowKind::kCircle, c, s});
        kos_rows_.push_back({k, RowKind::kEllipse, c, s});
    }
}

nlp::Vector Transcription::pack(const std::vector<BodyState>& states, const std::vector<Wrench>& wrenches) const {
    nlp::Vector z(num_variables());
    for (int k = 0; k <= problem_.knots; ++k) {
        z.segment<6>(state_index(k)) = states.at(static_cast<std::size_t>(k)).vector();
        if (k < problem_.knots) z.segment<3>(wrench_index(k)) = wrenches.at(static_cast<std::size_t>(k)).vector();
    }
    return z;
}

void Transcription::unpack(const nlp::Vector& z, std::vector<BodyState>& states,
                           std::vector<Wrench>& wrenches) const {
    states.resize(static_cast<std::size_t>(problem_.knots + 1));
    wrenches.resize(static_cast<std::size_t>(problem_.knots));
    for (int k = 0; k <= problem_.knots; ++k) {
        states[static_cast<std::size_t>(k)] = BodyState::from_vector(z.segment<6>(state_index(k)));
        if (k < problem_.knots) {
            wrenches[static_cast<std::size_t>(k)] = Wrench::from_vector(z.segment<3>(wrench_index(k)));
        }
    }
}

double Transcription::objective(const nlp::Vector& z) const {
    const OptProblem& p = problem_;
    const StateVector e = z.segment<6>(state_index(p.knots)) - p.x_goal.vector();
    double j = p.w_goal * e.squaredNorm();
    double running = 0.0;
    for (int k = 0; k < p.knots; ++k) {
        const int s = state_index(k), w = wrench_index(k);
        running += 0.5 * p.body.mass * (z(s + 3) * z(s + 3) + z(s + 4) * z(s + 4)) +
                   0.5 * p.body.inertia * z(s + 5) * z(s + 5) + p.w_u * z.segment<3>(w).squaredNorm();
    }
    return j + running * p.dt;
}

void Transcription::objective_gradient(const nlp::Vector& z, nlp::Vector& grad) const {
    const OptProblem& p = problem_;
    grad.setZero(num_variables());
    for (int k = 0; k < p.knots; ++k) {
        const int s = state_index(k), w = wrench_index(k);
        grad(s + 3) = p.dt * p.body.mass * z(s + 3);
        grad(s + 4) = p.dt * p.body.mass * z(s + 4);
        grad(s + 5) = p.dt * p.body.inertia * z(s + 5);
        grad.segment<3>(w) = 2.0 * p.dt * p.w_u * z.segment<3>(w);
    }
    const int n = state_index(p.knots);
    grad.segment<6>(n) = 2.0 * p.w_goal * (z.segment<6>(n) - p.x_goal.vector());
}

void Transcription::objective_hessian(const nlp::Vector&, std::vector<nlp::Triplet>& out) const {
    const OptProblem& p = problem_;
    for (int k = 0; k < p.knots; ++k) {
        const int s = state_index(k), w = wrench_index(k);
        out.emplace_back(s + 3, s + 3, p.dt * p.body.mass);
        out.emplace_back(s + 4, s + 4, p.dt * p.body.mass);
        out.emplace_back(s + 5, s + 5, p.dt * p.body.inertia);
        for (int j = 0; j < 3; ++j) out.emplace_back(w + j, w + j, 2.0 * p.dt * p.w_u);
    }
    const int n = state_index(p.knots);
    for (int j = 0; j < 6; ++j) out.emplace_back(n + j, n + j, 2.0 * p.w_goal);
}

double Transcription::kos_value(const KosRow& row, const nlp::Vector& z, Vector2* grad,
                                Eigen::Matrix2d* hess) const {
    const OptProblem& p = problem_;
    const int s = state_index(row.knot);
    const Vector2 d = Vector2(z(s), z(s + 1)) - p.target.position;
    const double r = p.kos.r_safe();
    if (row.kind == RowKind::kCircle) {
        // (|d|^2 - r^2) / (2r): same zero set as |d| - r, smooth at the center.
        if (grad) *grad = d / r;
        if (hess) *hess = Eigen::Matrix2d::Identity() / r;
        return (d.squaredNorm() - r * r) / (2.0 * r);
    }
    // Raw implicit ellipse, blended to inactive over a band behind the face plane.
    const Vector2 normal(row.cos_t, row.sin_t), tangent(-row.sin_t, row.cos_t);
    const double a = r, b = 0.5 * r;
    const double qx = d.dot(normal), qy = d.dot(tangent);
    const double implicit = qx * qx / (b * b) + qy * qy / (a * a) - 1.0;
    const Smoothstep w = smoothstep((qx + p.blend_band) / p.blend_band);
    const double w1 = w.d1 / p.blend_band, w2 = w.d2 / (p.blend_band * p.blend_band);
    if (grad) *grad = (2.0 * qx / (b * b) - w1) * normal + (2.0 * qy / (a * a)) * tangent;
    if (hess) {
        *hess = (2.0 / (b * b) - w2) * normal * normal.transpose() + (2.0 / (a * a)) * tangent * tangent.transpose();
    }
    return implicit + (1.0 - w.value);
}

void Transcription::constraints(const nlp::Vector& z, nlp::Vector& eq, nlp::Vector& ineq) const {
    const OptProblem& p = problem_;
    eq.resize(num_equalities());
    ineq.resize(num_inequalities());
    eq.head<6>() = z.head<6>() - p.x_init.vector();
    eq(6) = z(state_index(p.knots) + 2) - p.theta_finish;
    const Eigen::Vector3d lo = p.wrench_min.vector(), hi = p.wrench_max.vector();
    for (int k = 0; k < p.knots; ++k) {
        const int s = state_index(k), w = wrench_index(k), nx = state_index(k + 1);
        const int row = 7 + 6 * k;
        for (int j = 0; j < 3; ++j) eq(row + j) = z(nx + j) - z(s + j) - p.dt * z(s + 3 + j);
        eq(row + 3) = z(nx + 3) - z(s + 3) - p.dt * z(w) / p.body.mass;
        eq(row + 4) = z(nx + 4) - z(s + 4) - p.dt * z(w + 1) / p.body.mass;
        eq(row + 5) = z(nx + 5) - z(s + 5) - p.dt * z(w + 2) / p.body.inertia;
        for (int j = 0; j < 3; ++j) {
            ineq(6 * k + 2 * j) = z(w + j) - lo(j);
            ineq(6 * k + 2 * j + 1) = hi(j) - z(w + j);
        }
    }
    const int base = 6 * p.knots;
    for (std::size_t i = 0; i < kos_rows_.size(); ++i) {
        ineq(base + static_cast<int>(i)) = kos_value(kos_rows_[i], z, nullptr, nullptr);
    }
}

void Transcription::constraint_jacobian(const nlp::Vector& z, std::vector<nlp::Triplet>& out) const {
    const OptProblem& p = problem_;
    for (int j = 0; j < 6; ++j) out.emplace_back(j, j, 1.0);
    out.emplace_back(6, state_index(p.knots) + 2, 1.0);
    const int me = num_equalities();
    for (int k = 0; k < p.knots; ++k) {
        const int s = state_index(k), w = wrench_index(k), nx = state_index(k + 1);
        const int row = 7 + 6 * k;
        for (int j = 0; j < 6; ++j) {
            out.emplace_back(row + j, nx + j, 1.0);
            out.emplace_back(row + j, s + j, -1.0);
        }
        for (int j = 0; j < 3; ++j) out.emplace_back(row + j, s + 3 + j, -p.dt);
        out.emplace_back(row + 3, w, -p.dt / p.body.mass);
        out.emplace_back(row + 4, w + 1, -p.dt / p.body.mass);
        out.emplace_back(row + 5, w + 2, -p.dt / p.body.inertia);
        for (int j = 0; j < 3; ++j) {
            out.emplace_back(me + 6 * k + 2 * j, w + j, 1.0);
            out.emplace_back(me + 6 * k + 2 * j + 1, w + j, -1.0);
        }
    }
    const int base = me + 6 * p.knots;
    Vector2 g;
    for (std::size_t i = 0; i < kos_rows_.size(); ++i) {
        kos_value(kos_rows_[i], z, &g, nullptr);
        const int s = state_index(kos_rows_[i].knot);
        out.emplace_back(base + static_cast<int>(i), s, g.x());
        out.emplace_back(base + static_cast<int>(i), s + 1, g.y());
    }
}

void Transcription::constraint_hessian(const nlp::Vector& z, const nlp::Vector& y,
                                       std::vector<nlp::Triplet>& out) const {
    const int base = num_equalities() + 6 * problem_.knots;
    Eigen::Matrix2d h;
    for (std::size_t i = 0; i < kos_rows_.size(); ++i) {
        const double weight = y(base + static_cast<int>(i));
        if (weight == 0.0) continue;
        kos_value(kos_rows_[i], z, nullptr, &h);
        const int s = state_index(kos_rows_[i].knot);
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) out.emplace_back(s + r, s + c, weight * h(r, c));
        }
    }
}

// ---------------------------------------------------------------------------
// Solve

SolveError::SolveError(nlp::Status status, nlp::Stats stats)
    : std::runtime_error("solver " + nlp::to_string(status) + " after " + std::to_string(stats.outer_iterations) +
                         " outer iterations (violation " + std::to_string(stats.constraint_violation) + ")"),
      status_(status),
      stats_(stats) {}

namespace {

PlannedTrajectory skeleton(const OptProblem& p) {
    PlannedTrajectory t;
    t.dt = p.dt;
    t.x_goal = p.x_goal;
    t.theta_finish = p.theta_finish;
    for (int k = 0; k <= p.knots; ++k) {
        t.times.push_back(p.knot_time(k));
        t.kos_states.push_back(p.scheduled_state(k));
    }
    return t;
}

}  // namespace

PlannedTrajectory initial_guess(const OptProblem& p) {
    PlannedTrajectory t = skeleton(p);
    const StateVector a = p.x_init.vector();
    StateVector b = p.x_goal.vector();
    b(2) = p.theta_finish;
    const double duration = p.knots * p.dt;
    const Eigen::Vector3d rate = (b.head<3>() - a.head<3>()) / duration;
    for (int k = 0; k <= p.knots; ++k) {
        const double s = static_cast<double>(k) / p.knots;
        StateVector x;
        x.head<3>() = (1.0 - s) * a.head<3>() + s * b.head<3>();
        x.tail<3>() = rate;
        t.states.push_back(BodyState::from_vector(x));
    }
    t.wrenches.assign(static_cast<std::size_t>(p.knots), Wrench{});
    return t;
}

PlannedTrajectory resample(const PlannedTrajectory& source, const OptProblem& p) {
    PlannedTrajectory t = skeleton(p);
    const int m = source.knots();
    const double time_scale = static_cast<double>(m) / p.knots;  // old duration / new duration
    for (int k = 0; k <= p.knots; ++k) {
        const double u = static_cast<double>(k) * m / p.knots;
        const int i = std::min(static_cast<int>(u), m - 1);
        const double f = u - i;
        const auto iu = static_cast<std::size_t>(i);
        StateVector x = (1.0 - f) * source.states[iu].vector() + f * source.states[iu + 1].vector();
        x.tail<3>() *= time_scale;
        t.states.push_back(BodyState::from_vector(x));
        if (k < p.knots) {
            const Wrench& w = source.wrenches[std::min(iu, static_cast<std::size_t>(m - 1))];
            t.wrenches.push_back((time_scale * time_scale) * w);
        }
    }
    t.states.front() = p.x_init;
    return t;
}

PlannedTrajectory solve(const OptProblem& problem, const std::optional<PlannedTrajectory>& guess,
                        const SolverSettings& settings) {
    const Transcription nlp_problem(problem);
    const PlannedTrajectory start = guess && guess->knots() == problem.knots ? *guess
                                    : guess                                  ? resample(*guess, problem)
                                                                             : initial_guess(problem);
    const nlp::Result result = nlp::solve(nlp_problem, nlp_problem.pack(start.states, start.wrenches), settings.nlp);
    if (result.status != nlp::Status::kConverged) throw SolveError(result.status, result.stats);

    PlannedTrajectory t = skeleton(problem);
    nlp_problem.unpack(result.z, t.states, t.wrenches);
    t.breakdown = evaluate_objective(t.states, t.wrenches, problem);
    t.objective_value = t.breakdown.total();
    t.converged = true;
    t.status = result.status;
    t.solver_stats = result.stats;
    return t;
}

GoalSpec capture_goal(const TargetState& target, double t, double chaser_side, double capture_offset,
                      const BodyState& x_init) {
    const TargetPose pose = target_state_at(t, target);
    const Vector2 normal(std::cos(pose.theta), std::sin(pose.theta));
    const double r_dock = 0.5 * (chaser_side + target.side_length) + capture_offset;
    const Vector2 pos = pose.position + r_dock * normal;
    const Vector2 vel = target.omega * r_dock * Vector2(-normal.y(), normal.x());
    GoalSpec g;
    g.theta_finish = x_init.theta + wrap_angle(pose.theta - x_init.theta);
    g.x_goal = {pos.x(), pos.y(), g.theta_finish, vel.x(), vel.y(), target.omega};
    return g;
}

OptProblem instantiate(const OptProblem& tmpl, const DurationCandidate& candidate, double capture_offset) {
    OptProblem p = tmpl;
    p.knots = std::max(1, static_cast<int>(std::lround(candidate.t_total / p.dt)));
    p.kos_schedule.clear();
    const GoalSpec goal = capture_goal(p.target, p.knot_time(p.knots), p.body.side_length, capture_offset, p.x_init);
    p.x_goal = goal.x_goal;
    p.theta_finish = goal.theta_finish;
    return p;
}

PlannedTrajectory solve_two_pass(OptProblem problem, const std::optional<PlannedTrajectory>& guess,
                                 const SolverSettings& settings) {
    problem.kos_schedule.assign(static_cast<std::size_t>(problem.knots + 1), KosState::kStateI);
    PlannedTrajectory first = solve(problem, guess, settings);
    if (!problem.kos_enabled) return first;

    int latch = -1;
    for (int k = 0; k <= problem.knots; ++k) {
        const TargetPose pose = target_state_at(problem.knot_time(k), problem.target);
        if (classify(first.states[static_cast<std::size_t>(k)], pose.theta, pose.position, problem.kos) ==
            KosState::kStateII) {
            latch = k;
            break;
        }
    }
    if (latch < 0) return first;
    for (int k = latch; k <= problem.knots; ++k) problem.kos_schedule[static_cast<std::size_t>(k)] = KosState::kStateII;
    try {
        return solve(problem, first, settings);
    } catch (const SolveError&) {
        return first;
    }
}

double minimum_transfer_time(const OptProblem& tmpl, double capture_offset) {
    const double r_dock = 0.5 * (tmpl.body.side_length + tmpl.target.side_length) + capture_offset;
    const double distance = std::max(0.0, (tmpl.x_init.position() - tmpl.target.position).norm() - r_dock);
    const double force = std::min({tmpl.wrench_max.fx, -tmpl.wrench_min.fx, tmpl.wrench_max.fy, -tmpl.wrench_min.fy});
    if (!(force > 0.0) || distance == 0.0) return 0.0;
    return 2.0 * std::sqrt(distance * tmpl.body.mass / force);
}

namespace {

CandidateOutcome run_candidate(const OptProblem& tmpl, const DurationCandidate& c, const PlanSettings& settings,
                               const std::optional<PlannedTrajectory>& guess, std::optional<PlannedTrajectory>& out,
                               std::string& failure) {
    CandidateOutcome outcome{c, false, "", 0.0, std::nullopt};
    try {
        const OptProblem problem = instantiate(tmpl, c, settings.capture_offset);
        PlannedTrajectory t = solve_two_pass(problem, guess, settings.solver);
        outcome.converged = true;
        outcome.objective = t.objective_value;
        outcome.switch_time = t.kos_switch_time();
        out = std::move(t);
    } catch (const SolveError& e) {
        outcome.reason = nlp::to_string(e.status());
        failure = e.what();
    } catch (const std::invalid_argument& e) {
        outcome.reason = "invalid";
        failure = e.what();
    }
    return outcome;
}

}  // namespace

PlannedTrajectory plan(double theta_approach, const OptProblem& tmpl, const PlanSettings& settings,
                       std::vector<CandidateOutcome>* log) {
    CandidateSettings cs = settings.candidates;
    cs.min_duration = std::max(cs.min_duration, cs.transfer_time_factor * minimum_transfer_time(tmpl, settings.capture_offset));
    const auto candidates = duration_candidates(tmpl.target, theta_approach, cs);
    if (candidates.empty()) throw PlanError("no duration candidate within the configured limits");

    const std::size_t n = candidates.size();
    std::vector<std::optional<PlannedTrajectory>> solved(n);
    std::vector<CandidateOutcome> outcomes(n);
    std::vector<std::string> failures(n);
    if (settings.warm_start) {
        std::optional<PlannedTrajectory> previous;
        for (std::size_t i = 0; i < n; ++i) {
            outcomes[i] = run_candidate(tmpl, candidates[i], settings, previous, solved[i], failures[i]);
            if (solved[i]) previous = solved[i];
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < n; i = next++) {
                outcomes[i] = run_candidate(tmpl, candidates[i], settings, std::nullopt, solved[i], failures[i]);
            }
        };
        const int threads = std::clamp(settings.threads, 1, static_cast<int>(n));
        std::vector<std::thread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    // Ascending durations with a strict comparison: ties keep the shorter one.
    const PlannedTrajectory* best = nullptr;
    std::string last_failure;
    for (std::size_t i = 0; i < n; ++i) {
        if (log) log->push_back(outcomes[i]);
        if (!failures[i].empty()) last_failure = failures[i];
        if (solved[i] && (!best || solved[i]->objective_value < best->objective_value)) best = &*solved[i];
    }
    if (!best) throw PlanError("all duration candidates failed: " + last_failure);
    return *best;
}

}  // namespace rdv
