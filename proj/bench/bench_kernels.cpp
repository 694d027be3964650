#include <benchmark/benchmark.h>
#include <omp.h>

#include <array>
#include <complex>
#include <vector>

#include "sclt/kernels.hpp"

using namespace sclt::kernels;

namespace {

const DirichletBasis& basis() {
  static const DirichletBasis b = [] {
    const std::array<double, 2> sigmas{0.5, 0.5 + 1.0 / 13.815510557964274};
    return integer_basis(700000, sigmas);
  }();
  return b;
}

void BM_serial_sum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::array<std::complex<double>, 2> out{};
  for (auto _ : state) {
    serial::dirichlet_sum(basis(), 1.5e6, n, out);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_parallel_sum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::array<std::complex<double>, 2> out{};
  for (auto _ : state) {
    parallel::dirichlet_sum(basis(), 1.5e6, n, out);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_parallel_batch(benchmark::State& state) {
  const std::size_t q = 64;
  std::vector<double> heights(q);
  std::vector<std::size_t> counts(q, 20000);
  for (std::size_t i = 0; i < q; ++i) heights[i] = 1e5 + 997.0 * static_cast<double>(i);
  std::vector<std::complex<double>> out(q * 2);
  for (auto _ : state) {
    parallel::dirichlet_sums(basis(), heights, counts, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(q * 20000));
}

}  // namespace

BENCHMARK(BM_serial_sum)->Arg(8192)->Arg(65536)->Arg(500000);
BENCHMARK(BM_parallel_sum)->Arg(8192)->Arg(65536)->Arg(500000);
BENCHMARK(BM_parallel_batch);

BENCHMARK_MAIN();
