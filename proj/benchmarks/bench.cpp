#include <benchmark/benchmark.h>

#include "remote_track/closedloop.hpp"
#include "remote_track/codec.hpp"
#include "remote_track/config.hpp"
#include "remote_track/vanderpol.hpp"

using namespace rtrack;

static void BM_Rk4VanDerPol(benchmark::State& state) {
  const VectorField f = vdp_field(1.5, 1.0);
  const double horizon = static_cast<double>(state.range(0));
  for (auto _ : state) {
    Vec end = flow_endpoint(f, {1.0, 0.0}, 0.0, horizon, 1e-3);
    benchmark::DoNotOptimize(end.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(horizon / 1e-3));
}
BENCHMARK(BM_Rk4VanDerPol)->Arg(1)->Arg(10);

static void BM_QuantizeComponent(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  double delta = -0.49;
  for (auto _ : state) {
    delta = delta < 0.49 ? delta + 1e-4 : -0.49;
    benchmark::DoNotOptimize(quantize_component(delta, 1.0, levels));
  }
}
BENCHMARK(BM_QuantizeComponent)->Arg(2)->Arg(4)->Arg(8);

static void BM_FrameRoundTrip(benchmark::State& state) {
  SymbolVector sv;
  sv.symbols = {1.5, -0.5};
  for (auto _ : state) {
    sv.k++;
    SymbolVector back = unpack_frame(pack_frame(sv, 4), 4, 2);
    benchmark::DoNotOptimize(back.symbols.data());
  }
}
BENCHMARK(BM_FrameRoundTrip);

static void BM_ClosedLoopSecond(benchmark::State& state) {
  ScenarioConfig cfg = parse_config(kScenario2Config);
  cfg.t_end = 1.0;
  cfg.t_tail = 0.0;
  cfg.expansion_pairs = 50;
  const Scenario sc = build_scenario(cfg);
  for (auto _ : state) {
    RunResult res = run_scenario(sc);
    benchmark::DoNotOptimize(res.metrics.tail_tracking_error);
  }
}
BENCHMARK(BM_ClosedLoopSecond)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
