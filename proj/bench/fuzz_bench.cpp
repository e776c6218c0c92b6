// Serial reference loop against the OpenMP campaign on the same terms.

#include <benchmark/benchmark.h>

#include "spacekam/harness.hpp"

using namespace spacekam;

namespace {

FuzzConfig config(benchmark::State& st) {
  FuzzConfig cfg;
  cfg.count = static_cast<std::size_t>(st.range(0));
  cfg.seed = 1;
  return cfg;
}

void BM_FuzzSerial(benchmark::State& st) {
  FuzzConfig cfg = config(st);
  for (auto _ : st) benchmark::DoNotOptimize(fuzz_serial(cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_FuzzParallel(benchmark::State& st) {
  FuzzConfig cfg = config(st);
  for (auto _ : st) benchmark::DoNotOptimize(fuzz_parallel(cfg));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_Verify(benchmark::State& st) {
  TermPtr t = random_closed_term(term_seed(1, 0), static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(verify(t, 2000));
}

}  // namespace

BENCHMARK(BM_FuzzSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FuzzParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Verify)->Arg(25)->Arg(80)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
