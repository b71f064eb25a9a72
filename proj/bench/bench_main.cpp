#include <benchmark/benchmark.h>

#include "quicktalk/batch.hpp"
#include "quicktalk/kernels.hpp"
#include "quicktalk/scenario.hpp"

using namespace quicktalk;

namespace {

void BM_CodecSweepSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(codec_sweep_serial(1, state.range(0), true));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CodecSweepSerial)->Arg(10000);

void BM_CodecSweepParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(codec_sweep_parallel(1, state.range(0), true));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CodecSweepParallel)->Arg(10000)->UseRealTime();

Scenario bench_scenario() {
  return parse_scenario_text(R"(
runs = 200
medium.p0 = 0.177808
medium.rssi.6 = -40
medium.rssi.1 = -55
user.rounds = 2
iot.lamp.type = BULB
iot.plug.type = POWER-PLUG
coap.1.iot = plug
coap.1.interval_s = 0.1
)", "bench").scenario;
}

void BM_BatchSerial(benchmark::State& state) {
  const Scenario sc = bench_scenario();
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(sc, seeds));
}
BENCHMARK(BM_BatchSerial)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BatchParallel(benchmark::State& state) {
  const Scenario sc = bench_scenario();
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_parallel(sc, seeds));
}
BENCHMARK(BM_BatchParallel)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
