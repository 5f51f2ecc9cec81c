// Serial reference loops against the OpenMP sample map.
#include <benchmark/benchmark.h>

#include <cmath>

#include "dioph/counting.hpp"
#include "dioph/lattice.hpp"
#include "dioph/parallel.hpp"
#include "dioph/reference.hpp"
#include "dioph/rng.hpp"

namespace {

const dioph::ApproximationProblem& problem21() {
  static const auto p =
      dioph::validate({2, 1, {dioph::Rational(1, 2), dioph::Rational(1, 2)}, {1.0, 1.0}, dioph::Norm::Sup});
  return p;
}

void BM_CountSamplesSerial(benchmark::State& state) {
  const dioph::CountingPlan plan(problem21(), std::exp(static_cast<double>(state.range(0))),
                                 dioph::Convention::BothSigns);
  for (auto _ : state) {
    auto out = dioph::serial_map<std::uint64_t>(64, [&](std::uint64_t i) {
      return plan.count(dioph::sample_u(42, i, 2, 1)).total;
    });
    benchmark::DoNotOptimize(out);
  }
}

void BM_CountSamplesParallel(benchmark::State& state) {
  const dioph::CountingPlan plan(problem21(), std::exp(static_cast<double>(state.range(0))),
                                 dioph::Convention::BothSigns);
  for (auto _ : state) {
    auto out = dioph::parallel_map<std::uint64_t>(64, 0, [&](std::uint64_t i) {
      return plan.count(dioph::sample_u(42, i, 2, 1)).total;
    });
    benchmark::DoNotOptimize(out);
  }
}

void BM_CountBruteForce(benchmark::State& state) {
  const auto u = dioph::sample_u(42, 0, 2, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dioph::reference::count_brute_force(problem21(), u, std::exp(double(state.range(0))),
                                                                 dioph::Convention::BothSigns));
  }
}

void BM_AlphaSerial(benchmark::State& state) {
  for (auto _ : state) {
    auto out = dioph::serial_map<double>(64, [&](std::uint64_t i) {
      const auto lattice = dioph::lattice_from_u(problem21(), dioph::sample_u(42, i, 2, 1));
      return dioph::alpha(dioph::apply_flow(lattice, static_cast<int>(state.range(0)))).value;
    });
    benchmark::DoNotOptimize(out);
  }
}

void BM_AlphaParallel(benchmark::State& state) {
  for (auto _ : state) {
    auto out = dioph::parallel_map<double>(64, 0, [&](std::uint64_t i) {
      const auto lattice = dioph::lattice_from_u(problem21(), dioph::sample_u(42, i, 2, 1));
      return dioph::alpha(dioph::apply_flow(lattice, static_cast<int>(state.range(0)))).value;
    });
    benchmark::DoNotOptimize(out);
  }
}

}  // namespace

BENCHMARK(BM_CountSamplesSerial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountSamplesParallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountBruteForce)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlphaSerial)->Arg(3)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlphaParallel)->Arg(3)->Arg(9)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
