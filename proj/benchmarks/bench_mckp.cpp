#include <benchmark/benchmark.h>

#include <random>

#include "edaplan/mckp/solver.hpp"

using namespace edaplan;

namespace {

// Four stages with 4 choices each, runtimes up to `max_runtime` seconds.
mckp::MckpInstance make_instance(std::int64_t max_runtime, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> t1(max_runtime / 2, max_runtime);
  mckp::MckpInstance inst;
  std::int64_t slowest = 0;
  for (Stage s : kAllStages) {
    mckp::StageChoices sc{s, {}};
    const double base = static_cast<double>(t1(rng));
    for (int vcpus : kVcpuOptions) {
      const auto t = static_cast<std::int64_t>(base * (0.3 + 0.7 / vcpus));
      sc.choices.push_back({vcpus, t, 0.1 * vcpus * static_cast<double>(t) / 3600.0});
    }
    slowest += sc.choices.front().runtime;
    inst.stages.push_back(std::move(sc));
  }
  inst.capacity = slowest * 7 / 10;
  return inst;
}

void BM_SolveDp(benchmark::State& state) {
  const auto inst = make_instance(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(mckp::solve_dp(inst));
  state.counters["capacity"] = static_cast<double>(inst.capacity);
}
BENCHMARK(BM_SolveDp)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_BruteForce(benchmark::State& state) {
  const auto inst = make_instance(10000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mckp::brute_force_oracle(inst));
}
BENCHMARK(BM_BruteForce);

}  // namespace
