// Serial reference vs OpenMP kernels on the bundled synthetic scenario.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "cpsg/baselines.hpp"
#include "cpsg/diagnostics.hpp"
#include "cpsg/synthetic.hpp"

using namespace cpsg;

namespace {

struct Fixture {
  CpsParams params = reference_params();
  Scenario scenario = make_harvey_synth(params);
  Game game{params, make_players(params)};
  PlayerWeights actor;
  Fixture() {
    LearnerState l = make_learner({}, scenario.seed);
    actor = run_game_loop(scenario, game, l).final_actor;
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void set_threads(benchmark::State& state) {
  if (state.range(0) > 0) omp_set_num_threads(static_cast<int>(state.range(0)));
}

void BM_TuneSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(tune_proportional_serial(f.scenario, f.game, default_gain_grid()));
}

void BM_TuneParallel(benchmark::State& state) {
  const auto& f = fixture();
  set_threads(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(tune_proportional(f.scenario, f.game, default_gain_grid()));
}

void BM_DeviationSerial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(deviation_test_serial(f.actor, f.scenario, f.game, {}));
}

void BM_DeviationParallel(benchmark::State& state) {
  const auto& f = fixture();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(deviation_test(f.actor, f.scenario, f.game, {}));
}

const std::vector<std::string> kSweep{"default", "beta1*2", "beta1*0.5", "q1_1*2", "window_len=3"};

SweepConfig sweep_config() {
  const auto& f = fixture();
  SweepConfig c{f.scenario, f.params, {}, {}, {}};
  c.deviation.n_perturb = 20;
  return c;
}

void BM_SweepSerial(benchmark::State& state) {
  const SweepConfig c = sweep_config();
  for (auto _ : state) benchmark::DoNotOptimize(sensitivity_sweep_serial(c, kSweep));
}

void BM_SweepParallel(benchmark::State& state) {
  const SweepConfig c = sweep_config();
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(sensitivity_sweep(c, kSweep));
}

}  // namespace

BENCHMARK(BM_TuneSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TuneParallel)->Arg(0)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeviationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeviationParallel)->Arg(0)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(0)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
