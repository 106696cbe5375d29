// Serial reference against the OpenMP kernel on the bundled presets.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "cavimode/scan.hpp"

namespace {

void run(benchmark::State& state, const char* name, cavimode::Execution execution) {
  const auto req = cavimode::preset(name);
  for (auto _ : state) {
    auto result = cavimode::run_scan(req, execution);
    benchmark::DoNotOptimize(result.rows.data());
  }
  state.counters["threads"] = execution == cavimode::Execution::serial ? 1 : omp_get_max_threads();
}

}  // namespace

BENCHMARK_CAPTURE(run, fig2b_serial, "fig2b", cavimode::Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run, fig2b_parallel, "fig2b", cavimode::Execution::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run, fig4_serial, "fig4", cavimode::Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run, fig4_parallel, "fig4", cavimode::Execution::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(run, fig2c_serial, "fig2c", cavimode::Execution::serial)->Unit(benchmark::kSecond)->Iterations(1);
BENCHMARK_CAPTURE(run, fig2c_parallel, "fig2c", cavimode::Execution::parallel)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
