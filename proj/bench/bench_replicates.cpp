// Serial reference vs OpenMP replicate loop on two kernels. Both variants
// produce identical outputs; only wall time differs.
#include <benchmark/benchmark.h>

#include "beadforge/crp.hpp"
#include "beadforge/parallel.hpp"
#include "beadforge/rng.hpp"
#include "beadforge/trees.hpp"

namespace {

double grow_kernel(std::size_t i) {
  beadforge::RngStream r(1, beadforge::stream_id(0xBE, i));
  return beadforge::grow_alpha_theta(0.5, 0.5, 2000, r).n_leaves();
}

double crp_kernel(std::size_t i) {
  beadforge::RngStream r(1, beadforge::stream_id(0xBF, i));
  return beadforge::run_crp(0.5, 1.5, 10000, r).n_tables();
}

template <double (*K)(std::size_t)>
void serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(beadforge::replicate_serial<double>(n, K));
  st.SetItemsProcessed(st.iterations() * n);
}

template <double (*K)(std::size_t)>
void parallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const int jobs = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(beadforge::replicate<double>(n, jobs, K));
  st.SetItemsProcessed(st.iterations() * n);
}

}  // namespace

BENCHMARK(serial<grow_kernel>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(parallel<grow_kernel>)->Args({256, 1})->Args({256, 2})->Args({256, 4})->Args({256, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(serial<crp_kernel>)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(parallel<crp_kernel>)->Args({256, 1})->Args({256, 2})->Args({256, 4})->Args({256, 8})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
