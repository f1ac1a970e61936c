#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "resetlab/commands.hpp"
#include "resetlab/config.hpp"
#include "resetlab/sweep.hpp"

namespace {

using resetlab::Execution;

Execution exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

std::vector<double> log_grid_rad(double fmin_hz, double fmax_hz, int points) {
    std::vector<double> w(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = fmin_hz * std::pow(fmax_hz / fmin_hz, static_cast<double>(i) / (points - 1));
        w[static_cast<size_t>(i)] = 2.0 * resetlab::kPi * f;
    }
    return w;
}

void BM_OpenLoopResponse(benchmark::State& state) {
    const resetlab::RunConfig cfg;
    const auto                chains = resetlab::chains_for(resetlab::closed_loop_parts(cfg), {1, 2, 3, 4});
    const auto                plant  = cfg.plant();
    const auto                omegas = log_grid_rad(0.1, 1000.0, 801);
    for (auto _ : state)
        for (const auto& c : chains)
            benchmark::DoNotOptimize(resetlab::open_loop_response(c, plant, omegas, {1, 3, 5, 7}, exec_of(state)));
}

void BM_OracleSweep(benchmark::State& state) {
    const auto                   re     = resetlab::make_fore(2.0 * resetlab::kPi * 100.0, 0.0);
    const auto                   omegas = log_grid_rad(1.0, 500.0, 10);
    const resetlab::OracleOptions opt;
    for (auto _ : state) benchmark::DoNotOptimize(resetlab::oracle_sweep(re, omegas, opt, exec_of(state)));
}

void BM_SensitivitySweep(benchmark::State& state) {
    resetlab::RunConfig cfg;
    cfg.disturbance = false;
    const auto chains = resetlab::chains_for(resetlab::closed_loop_parts(cfg), {1, 2, 3, 4});
    const auto plant  = cfg.plant();
    auto       sim    = cfg.sim_config();
    sim.settle_periods  = 5;
    sim.measure_periods = 5;
    std::vector<resetlab::SweepPoint> points;
    for (double f : {1.0, 5.0, 10.0, 20.0, 50.0, 100.0}) points.push_back({f, 1.0, sim.noise_fraction});
    for (auto _ : state)
        benchmark::DoNotOptimize(resetlab::sensitivity_sweep(chains, plant, points, sim, 2, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_OpenLoopResponse)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OracleSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SensitivitySweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
