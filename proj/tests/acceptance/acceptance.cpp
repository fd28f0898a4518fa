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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "oracles.hpp"
#include "rendezvous/harness.hpp"

#include <CLI11.hpp>
#include <Eigen/SparseCore>

#include <chrono>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace {

using namespace rdv;

constexpr double kDeg = std::numbers::pi / 180.0;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Context {
    int parallel = 1;
    std::string out_dir;
    RunConfig nominal_cfg;
    std::optional<PlannedTrajectory> nominal;
    double nominal_seconds = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const PlannedTrajectory& nominal_plan(Context& ctx) {
    if (!ctx.nominal) {
        const auto t0 = std::chrono::steady_clock::now();
        const RunConfig& c = ctx.nominal_cfg;
        ctx.nominal = plan(c.theta_approach, c.problem_template(), c.plan);
        ctx.nominal_seconds = seconds_since(t0);
    }
    return *ctx.nominal;
}

void criterion1(Context& ctx, Verdict& v) {
    const PlannedTrajectory& p = nominal_plan(ctx);
    const RunConfig& c = ctx.nominal_cfg;
    double g_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < p.states.size(); ++k) {
        const TargetPose pose = target_state_at(p.times[k], c.target);
        g_min = std::min(g_min, signed_distance(p.states[k].position(),
                                                build_region(p.kos_states[k], pose.theta, pose.position, c.kos)));
    }
    const auto sw = p.kos_switch_time();
    const double frac = sw ? (*sw - p.times.front()) / p.duration() : 0.0;
    v.detail << "converged=" << p.converged << " T=" << p.duration() << " s, attitude residual "
             << p.terminal_attitude_error() << " rad, min knot g " << g_min << " m, switch "
             << (sw ? std::to_string(*sw) + " s (" + std::to_string(100 * frac) + "% of horizon)" : "none")
             << ", " << ctx.nominal_seconds << " s";
    v.check(p.converged, "converged");
    v.check(p.terminal_attitude_error() <= 1e-6, "attitude residual <= 1e-6 rad");
    v.check(g_min >= -1e-6, "knot KOS audit g >= -1e-6 m");
    v.check(sw && frac >= 0.9, "State II switch within the final 10%");
    v.check(ctx.nominal_seconds <= 60.0, "runtime <= 60 s");
}

void criterion2(Context& ctx, Verdict& v) {
    const PlannedTrajectory& p = nominal_plan(ctx);
    const RunConfig& c = ctx.nominal_cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const SimResult r = run(p, c.sim_config(), c.target, c.kos);
    const double secs = seconds_since(t0);
    const double bound = 2.0 * p.terminal_position_error() + 0.02;
    v.detail << "relative velocity " << r.terminal_relative_velocity << " m/s, tracked error "
             << r.terminal_position_error << " m (bound " << bound << "), audit min g " << r.min_kos_distance
             << " m, " << secs << " s";
    v.check(r.terminal_relative_velocity <= 0.05, "relative velocity <= 0.05 m/s");
    v.check(r.terminal_position_error <= bound, "tracked error <= 2x planned + 0.02 m");
    v.check(r.min_kos_distance >= -0.005, "audit min g >= -0.005 m");
    v.check(secs <= 10.0, "runtime <= 10 s");
    if (!ctx.out_dir.empty()) {
        const RunConfig out = with_overrides(c, {{"run.out", ctx.out_dir}});
        write_table(ctx.out_dir + "/nominal_trajectory.csv", trajectory_table(p, out));
        write_table(ctx.out_dir + "/nominal_run_record.csv", run_record_table(r, out));
    }
}

RunConfig sweep_config(const Context& ctx, const std::string& text) {
    return parse_config(text + "run.parallel = " + std::to_string(ctx.parallel) + "\n" +
                        (ctx.out_dir.empty() ? "" : "run.out = " + ctx.out_dir + "\n"));
}

void criterion3(Context& ctx, Verdict& v) {
    const RunConfig cfg = sweep_config(ctx,
                                       "sweep1.omega_start = 0.1\nsweep1.omega_stop = 2.0\nsweep1.omega_step = 0.1\n"
                                       "sweep1.f_start = 0.03\nsweep1.f_stop = 1.02\nsweep1.f_step = 0.33\n");
    const auto t0 = std::chrono::steady_clock::now();
    SweepOptions opt;
    opt.threads = ctx.parallel;
    const auto records = run_sweep1(cfg, opt);
    const double secs = seconds_since(t0);
    const auto rows = aggregate_sweep1(records);
    if (!ctx.out_dir.empty()) {
        write_table(ctx.out_dir + "/sweep1_points.csv", sweep_points_table("sweep1_points", records, cfg));
        write_table(ctx.out_dir + "/sweep1_summary.csv", sweep1_summary_table(rows, cfg));
    }

    std::size_t peak = 0;
    int failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].mean_error > rows[peak].mean_error) peak = i;
        failed += rows[i].n_points - rows[i].n_converged;
    }
    double plateau = 0.0;
    int n_plateau = 0;
    for (const auto& r : rows) {
        if (r.omega >= 1.5 - 1e-9 && r.n_converged > 0) plateau += r.mean_error, ++n_plateau;
    }
    plateau = n_plateau ? plateau / n_plateau : 0.0;
    bool goal_after_peak = true;
    for (std::size_t i = peak; i < rows.size(); ++i) goal_after_peak &= rows[i].dominant == "goal";

    v.detail << "mean error by omega:";
    for (const auto& r : rows) {
        v.detail << " " << r.omega << ":" << std::setprecision(3) << r.mean_error << "(" << r.dominant[0] << ")"
                 << std::setprecision(6);
    }
    v.detail << "; peak " << rows[peak].mean_error << " m at " << rows[peak].omega << " rad/s, plateau (omega >= 1.5) "
             << plateau << " m, " << failed << " failed points, " << secs << " s";
    v.check(rows[peak].omega >= 0.5 - 1e-9 && rows[peak].omega <= 1.0 + 1e-9, "peak in [0.5, 1.0] rad/s");
    v.check(plateau >= 0.05 && plateau <= 0.15, "plateau in [0.05, 0.15] m");
    v.check(rows[peak].mean_error > plateau, "peak above plateau");
    v.check(rows.front().dominant == "kinetic", "kinetic term dominant at the lowest omega");
    v.check(goal_after_peak, "goal term dominant from the peak onward");
    v.check(secs <= 1800.0, "runtime <= 30 min");
}

void criterion4(Context& ctx, Verdict& v) {
    const RunConfig cfg = sweep_config(
        ctx,
        "sweep2.theta_start_deg = 0\nsweep2.theta_stop_deg = 330\nsweep2.theta_step_deg = 30\n"
        "sweep2.omega_start = 0.1\nsweep2.omega_stop = 2.0\nsweep2.omega_step = 0.4\nsweep2.f_thr = 0.03\n");
    const auto t0 = std::chrono::steady_clock::now();
    SweepOptions opt;
    opt.threads = ctx.parallel;
    const auto records = run_sweep2(cfg, opt);
    const double secs = seconds_since(t0);
    const auto rows = aggregate_sweep2(records);
    if (!ctx.out_dir.empty()) {
        write_table(ctx.out_dir + "/sweep2_points.csv", sweep_points_table("sweep2_points", records, cfg));
        write_table(ctx.out_dir + "/sweep2_summary.csv", sweep2_summary_table(rows, cfg));
    }
    double rear = 0.0, other = 0.0;
    int n_rear = 0, n_other = 0, failed = 0;
    std::size_t top = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        failed += r.n_points - r.n_converged;
        if (r.mean_error > rows[top].mean_error) top = i;
        const bool is_rear = std::abs(r.theta_deg - 150) < 1e-9 || std::abs(r.theta_deg - 180) < 1e-9 ||
                             std::abs(r.theta_deg - 210) < 1e-9;
        (is_rear ? rear : other) += r.mean_error;
        ++(is_rear ? n_rear : n_other);
    }
    rear /= std::max(n_rear, 1);
    other /= std::max(n_other, 1);
    const double ratio = other > 0.0 ? rear / other : 0.0;
    v.detail << "mean error by theta:";
    for (const auto& r : rows) v.detail << " " << r.theta_deg << ":" << std::setprecision(3) << r.mean_error
                                        << std::setprecision(6);
    v.detail << "; rear " << rear << " m, others " << other << " m, ratio " << ratio << ", max at "
             << rows[top].theta_deg << " deg, " << failed << " failed points, " << secs << " s";
    v.check(ratio >= 1.5, "rear/other ratio >= 1.5");
    v.check(std::abs(rows[top].theta_deg - 180.0) < 1e-9, "sector maximum at 180 deg");
    v.check(secs <= 900.0, "runtime <= 15 min");
}

void criterion5(Context&, Verdict& v) {
    const auto t0 = std::chrono::steady_clock::now();
    const ThrusterLayout layout = ThrusterLayout::square(0.3, 0.3);
    const EffectivenessMatrix b = layout.effectiveness() * layout.f_max;
    Eigen::Matrix<double, 3, 4> a4;
    a4 << b.col(0), b.col(3), b.col(4), b.col(7);
    const double quant = oracle::grid_quantization_bound(a4, 21);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> f(-0.4, 0.4), t(-0.06, 0.06);
    double worst_gap = 0.0, worst_below = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Vector3d w(f(rng), f(rng), t(rng));
        const Eigen::VectorXd u = bounded_least_squares(a4, w);
        const double r = (a4 * u - w).norm();
        const double g = oracle::grid_allocation_residual<4>(a4, w, 21);
        worst_gap = std::max(worst_gap, g - r);
        worst_below = std::max(worst_below, r - g);
    }
    const Eigen::MatrixXd a8 = b;
    std::uniform_real_distribution<double> F(-1.0, 1.0), T(-0.2, 0.2);
    double kkt = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::Vector3d w(F(rng), F(rng), T(rng));
        kkt = std::max(kkt, oracle::box_kkt_residual(a8, w, bounded_least_squares(a8, w)));
    }
    const double secs = seconds_since(t0);
    v.detail << "grid - solver residual max " << worst_gap << " (bound " << quant << "), solver - grid max "
             << worst_below << ", full-layout KKT residual " << kkt << ", " << secs << " s";
    v.check(worst_gap <= quant, "grid residual within quantization bound");
    v.check(worst_below <= 1e-12, "solver never worse than grid");
    v.check(kkt <= 1e-8, "KKT residual <= 1e-8");
    v.check(secs <= 60.0, "runtime <= 1 min");
}

void criterion6(Context& ctx, Verdict& v) {
    const RunConfig& c = ctx.nominal_cfg;
    // Objective gradient.
    OptProblem small = instantiate(c.problem_template(), {2.0, 0}, c.plan.capture_offset);
    const Transcription tr(small);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    const Eigen::VectorXd z = Eigen::VectorXd::NullaryExpr(tr.num_variables(), [&] { return u(rng); });
    Eigen::VectorXd g;
    tr.objective_gradient(z, g);
    const Eigen::VectorXd fd =
        oracle::central_gradient([&](const Eigen::VectorXd& x) { return tr.objective(x); }, z, 1e-6);
    const double grad_err = (g - fd).norm() / std::max(1.0, fd.norm());

    // Euler-defect replay on the nominal plan.
    const PlannedTrajectory& p = nominal_plan(ctx);
    double defect = 0.0;
    for (int k = 0; k < p.knots(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        defect = std::max(defect, (euler_step(p.states[i], p.wrenches[i], c.body, p.dt).vector() -
                                   p.states[i + 1].vector()).lpNorm<Eigen::Infinity>());
    }

    // Thruster map linearity.
    const ThrusterLayout layout = c.layout();
    double linear = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        ThrusterCommand x{}, y{}, s{};
        const double al = u(rng), be = u(rng);
        for (std::size_t i = 0; i < kNumThrusters; ++i) {
            x[i] = u(rng) + 0.6;
            y[i] = u(rng) + 0.6;
            s[i] = al * x[i] + be * y[i];
        }
        linear = std::max(linear, (total_wrench(s, layout).vector() - al * total_wrench(x, layout).vector() -
                                   be * total_wrench(y, layout).vector()).norm());
    }

    // PWM duty accuracy.
    double pwm = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        ThrusterCommand d{};
        for (double& x : d) x = u(rng) + 0.5;
        const auto got = pwm_schedule(d, c.n_slots).delivered_duty();
        for (std::size_t i = 0; i < kNumThrusters; ++i) pwm = std::max(pwm, std::abs(got[i] - std::clamp(d[i], 0.0, 1.0)));
    }

    // Rotation round trip.
    double rot = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Wrench w{u(rng), u(rng), u(rng)};
        const double th = 20 * u(rng);
        rot = std::max(rot, (body_to_world(world_to_body(w, th), th).vector() - w.vector()).lpNorm<Eigen::Infinity>());
    }

    // Relative velocity against a finite difference of the target-frame position.
    double relv = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        TargetState tgt;
        tgt.theta0 = 5 * u(rng);
        tgt.omega = 3 * u(rng);
        tgt.position = {u(rng), u(rng)};
        const BodyState s{u(rng), u(rng), 0.0, u(rng), u(rng), 0.0};
        auto q = [&](double t) {
            const double th = tgt.theta0 + tgt.omega * t;
            const Vector2 d(s.x + s.vx * t - tgt.position.x(), s.y + s.vy * t - tgt.position.y());
            return Vector2(std::cos(th) * d.x() + std::sin(th) * d.y(), -std::sin(th) * d.x() + std::cos(th) * d.y());
        };
        const Vector2 fdv = (q(1e-5) - q(-1e-5)) / 2e-5;
        relv = std::max(relv, (relative_velocity_target_frame(s, tgt.theta0, tgt.omega, tgt.position) - fdv).norm());
    }

    // Simulator determinism.
    SimConfig sc = c.sim_config();
    sc.mismatch.enabled = true;
    sc.disturbance.linear = 1e-4;
    const SimResult r1 = run(p, sc, c.target, c.kos);
    const SimResult r2 = run(p, sc, c.target, c.kos);
    const bool identical = r1.states.size() == r2.states.size() &&
                           std::memcmp(r1.states.data(), r2.states.data(), r1.states.size() * sizeof(BodyState)) == 0 &&
                           r1.firings == r2.firings;

    // Zero-thrust momentum.
    BodyState m0{1.0, 2.0, 0.5, 0.03, -0.04, 0.2};
    BodyState m = m0;
    for (int k = 0; k < 100000; ++k) m = euler_step(m, Wrench{}, c.body, 0.01);
    const bool momentum = m.vx == m0.vx && m.vy == m0.vy && m.omega == m0.omega;

    v.detail << "gradient rel err " << grad_err << ", defect " << defect << ", linearity " << linear << ", PWM "
             << pwm << " (bound " << 0.5 / c.n_slots << "), rotation " << rot << ", relative velocity " << relv
             << ", deterministic " << identical << ", momentum exact " << momentum;
    v.check(grad_err <= 1e-4, "gradient rel err <= 1e-4");
    v.check(defect <= 1e-8, "Euler defect <= 1e-8");
    v.check(linear <= 1e-14, "thruster map linear");
    v.check(pwm <= 0.5 / c.n_slots + 1e-15, "PWM duty error <= 1/(2 n_slots)");
    v.check(rot <= 1e-12, "rotation round trip <= 1e-12");
    v.check(relv <= 1e-6, "relative velocity FD <= 1e-6");
    v.check(identical, "bit-identical repeated runs");
    v.check(momentum, "zero-thrust momentum conserved");
}

void criterion7(Context&, Verdict& v) {
    struct Case {
        double ls, lt, margin;
    };
    double rs_err = 0.0;
    for (const Case& k : {Case{0.3, 0.3, 0.1}, Case{0.2, 0.5, 0.05}, Case{0.4, 0.1, 0.0}}) {
        KosConfig cfg;
        cfg.chaser_side = k.ls;
        cfg.target_side = k.lt;
        cfg.margin_fraction = k.margin;
        const double expected = std::hypot(k.ls / 2, k.ls / 2) + std::hypot(k.lt / 2, k.lt / 2) + k.margin * k.ls;
        rs_err = std::max(rs_err, std::abs(r_safe(cfg) - expected));
    }
    const KosConfig cfg;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int violations = 0, forbidden_two = 0;
    for (int i = 0; i < 10000; ++i) {
        const double th = std::numbers::pi * u(rng);
        const Vector2 c(0.5 * u(rng), 0.5 * u(rng));
        const Vector2 q = c + Vector2(0.6 * u(rng), 0.6 * u(rng));
        const double g2 = signed_distance(q, build_region(KosState::kStateII, th, c, cfg));
        const double g1 = signed_distance(q, build_region(KosState::kStateI, th, c, cfg));
        if (g2 < 0.0) {
            ++forbidden_two;
            if (!(g1 < 0.0)) ++violations;
        }
    }
    double angle_gap = 0.0;
    for (double ls : {0.3, 0.2, 0.25}) {
        KosConfig k;
        k.chaser_side = ls;
        angle_gap = std::max(angle_gap, std::abs(corner_safe_angle_threshold(k) -
                                                 oracle::sampled_corner_safe_angle(k, 0.1 * kDeg, 1e-3)));
    }
    v.detail << "r_safe max err " << rs_err << ", containment violations " << violations << "/" << forbidden_two
             << " State II forbidden samples, corner angle " << corner_safe_angle_threshold(cfg) / kDeg
             << " deg, max gap to pose-sampling oracle " << angle_gap / kDeg << " deg";
    v.check(rs_err <= 1e-15, "r_safe formula");
    v.check(violations == 0, "State II forbidden set inside State I");
    v.check(angle_gap <= 0.5 * kDeg, "corner angle within 0.5 deg of oracle");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rendezvous acceptance suite"};
    Context ctx;
    ctx.parallel = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<int> only;
    app.add_option("--parallel", ctx.parallel, "Worker threads for the sweeps")->check(CLI::PositiveNumber);
    app.add_option("--out", ctx.out_dir, "Directory for the nominal run and sweep tables");
    app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 7));
    CLI11_PARSE(app, argc, argv);
    if (!ctx.out_dir.empty()) std::filesystem::create_directories(ctx.out_dir);
    ctx.nominal_cfg = parse_config("", "<nominal>");

    const std::vector<std::function<void(Context&, Verdict&)>> criteria = {
        criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
    bool all = true;
    for (int i = 1; i <= 7; ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
        Verdict v;
        try {
            criteria[static_cast<std::size_t>(i - 1)](ctx, v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        all &= v.pass;
        std::cout << "criterion " << i << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail.str() << std::endl;
    }
    return all ? 0 : 1;
}
