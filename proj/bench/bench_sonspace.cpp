// Serial reference vs OpenMP kernels for SON-space count and enumerate.
// Argument: number of nodes; every node can play every role, and the
// protocol asks for 2 x r0, 2 x r1, 1 x r2.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "fso/sonspace.hpp"

namespace {

fso::CapabilityMatrix full_matrix(std::size_t nodes) {
  std::vector<fso::NodeId> ns;
  for (std::size_t i = 0; i < nodes; ++i) ns.push_back("n" + std::to_string(i));
  fso::CapabilityMatrix m(ns, {"r0", "r1", "r2"});
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t r = 0; r < 3; ++r) m.set(i, r, true);
  }
  return m;
}

const fso::RoleMultiset kRoles = {{"r0", 2}, {"r1", 2}, {"r2", 1}};

void BM_CountSerial(benchmark::State& state) {
  const auto m = full_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fso::count_serial(m, kRoles));
}

void BM_CountParallel(benchmark::State& state) {
  const auto m = full_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fso::count(m, kRoles));
}

void BM_EnumerateSerial(benchmark::State& state) {
  const auto m = full_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fso::enumerate_serial(m, kRoles).size());
}

void BM_EnumerateParallel(benchmark::State& state) {
  const auto m = full_matrix(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fso::enumerate(m, kRoles).size());
}

}  // namespace

BENCHMARK(BM_CountSerial)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateSerial)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
