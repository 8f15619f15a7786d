#include <benchmark/benchmark.h>

#include "riscnoma/orchestrator.hpp"

namespace riscnoma {
namespace {

void BM_Lcaobs(benchmark::State& state) {
  Scenario sc;
  sc.l_ris = static_cast<int>(state.range(0));
  sc.bits = 5;
  const ChannelSet ch = generate_channels(sc);
  for (auto _ : state) {
    const RunResult r = run_lcaobs(ch, sc);
    state.counters["iterations"] = r.iterations;
  }
}
BENCHMARK(BM_Lcaobs)->Arg(8)->Arg(20)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Aobo(benchmark::State& state) {
  Scenario sc;
  sc.n_t = 2;
  sc.l_ris = static_cast<int>(state.range(0));
  sc.bits = 1;
  const ChannelSet ch = generate_channels(sc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_aobo(ch, sc));
  }
}
BENCHMARK(BM_Aobo)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace riscnoma
