#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "rsfft/kernels.hpp"
#include "rsfft/rng.hpp"

namespace {

std::vector<double> random_table(std::size_t n) {
  rsfft::Rng rng(42);
  std::vector<double> t(n);
  for (double& v : t) v = rng.uniform(-1.0, 1.0);
  return t;
}

std::vector<std::complex<double>> random_complex(std::size_t n) {
  rsfft::Rng rng(43);
  std::vector<std::complex<double>> t(n);
  for (auto& v : t) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return t;
}

void wht_serial_bench(benchmark::State& state) {
  const auto base = random_table(std::size_t{1} << state.range(0));
  for (auto _ : state) {
    auto work = base;
    rsfft::wht_serial(work);
    benchmark::DoNotOptimize(work.data());
  }
}
BENCHMARK(wht_serial_bench)->Arg(16)->Arg(20);

void wht_parallel_bench(benchmark::State& state) {
  const auto base = random_table(std::size_t{1} << state.range(0));
  for (auto _ : state) {
    auto work = base;
    rsfft::wht_parallel(work);
    benchmark::DoNotOptimize(work.data());
  }
}
BENCHMARK(wht_parallel_bench)->Arg(16)->Arg(20);

void cyclic_dft_serial_bench(benchmark::State& state) {
  const auto in = random_complex(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = rsfft::cyclic_dft_serial(in, -1, 1.0 / static_cast<double>(in.size()));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(cyclic_dft_serial_bench)->Arg(512)->Arg(2048);

void cyclic_dft_parallel_bench(benchmark::State& state) {
  const auto in = random_complex(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = rsfft::cyclic_dft_parallel(in, -1, 1.0 / static_cast<double>(in.size()));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(cyclic_dft_parallel_bench)->Arg(512)->Arg(2048);

void grid_probe_serial_bench(benchmark::State& state) {
  const std::vector<long long> freqs{-17, -3, 2, 9, 40};
  const auto coeffs = random_complex(freqs.size());
  for (auto _ : state) {
    auto c = rsfft::grid_count_below_serial(freqs, coeffs, 0.5,
                                            static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(grid_probe_serial_bench)->Arg(1 << 18);

void grid_probe_parallel_bench(benchmark::State& state) {
  const std::vector<long long> freqs{-17, -3, 2, 9, 40};
  const auto coeffs = random_complex(freqs.size());
  for (auto _ : state) {
    auto c = rsfft::grid_count_below_parallel(freqs, coeffs, 0.5,
                                              static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(grid_probe_parallel_bench)->Arg(1 << 18);

}  // namespace

BENCHMARK_MAIN();
