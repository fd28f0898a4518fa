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

// Micro benchmarks for the hot paths: allocation, simulator step, planner.

#include "rendezvous/config.hpp"
#include "rendezvous/controller.hpp"
#include "rendezvous/optimizer.hpp"
#include "rendezvous/sim.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace rdv;

void BM_BoundedLeastSquares(benchmark::State& state) {
    const ThrusterLayout layout = ThrusterLayout::square(0.3, 0.3);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> f(-1.0, 1.0), t(-0.2, 0.2);
    std::vector<Wrench> ws(256);
    for (auto& w : ws) w = {f(rng), f(rng), t(rng)};
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(allocate_duty(ws[i++ % ws.size()], layout));
}
BENCHMARK(BM_BoundedLeastSquares);

void BM_ControlStep(benchmark::State& state) {
    const RunConfig cfg = parse_config("", "<bench>");
    const BodyState ref{0.1, 0.2, 0.3, 0.01, 0.0, 0.05};
    const BodyState actual{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(control_step(ref, actual, cfg.gains, cfg.layout(), cfg.n_slots, std::nullopt));
    }
}
BENCHMARK(BM_ControlStep);

void BM_TrackNominal(benchmark::State& state) {
    const RunConfig cfg = parse_config("", "<bench>");
    const PlannedTrajectory p = plan(cfg.theta_approach, cfg.problem_template(), cfg.plan);
    for (auto _ : state) benchmark::DoNotOptimize(run(p, cfg.sim_config(), cfg.target, cfg.kos));
}
BENCHMARK(BM_TrackNominal)->Unit(benchmark::kMillisecond);

void BM_PlanNominal(benchmark::State& state) {
    const RunConfig cfg = parse_config("", "<bench>");
    for (auto _ : state) benchmark::DoNotOptimize(plan(cfg.theta_approach, cfg.problem_template(), cfg.plan));
}
BENCHMARK(BM_PlanNominal)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
