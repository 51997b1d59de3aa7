#include <benchmark/benchmark.h>

#include <random>

#include "edaplan/gcn/adam.hpp"
#include "edaplan/gcn/dense_matrix.hpp"
#include "edaplan/gcn/network.hpp"
#include "edaplan/graph/features.hpp"
#include "edaplan/synth/generator.hpp"

using namespace edaplan;

namespace {

gcn::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  gcn::DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = d(rng);
  return m;
}

void BM_Gemm(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, 256, rng), b = random_matrix(256, 128, rng);
  gcn::DenseMatrix out(n, 128);
  for (auto _ : state) {
    gcn::gemm(a, b, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * 256 * 128));
}
BENCHMARK(BM_Gemm)->Arg(100)->Arg(1000);

struct Fixture {
  explicit Fixture(synth::SizeClass size)
      : graph(synth::gen_graph(5, size, graph::SourceKind::Netlist)),
        model(gcn::GcnModel::create(Stage::Routing, 1)),
        neighborhood(gcn::make_neighborhood(graph, model.config.aggregation)),
        features(gcn::to_matrix(graph::build_features(graph))) {}
  graph::DesignGraph graph;
  gcn::GcnModel model;
  gcn::Neighborhood neighborhood;
  gcn::DenseMatrix features;
};

synth::SizeClass size_of(std::int64_t arg) { return arg == 0 ? synth::SizeClass::Small : synth::SizeClass::Large; }

void BM_Forward(benchmark::State& state) {
  Fixture f(size_of(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gcn::gcn_forward(f.model, f.neighborhood, f.features));
  state.counters["nodes"] = static_cast<double>(f.graph.node_count());
}
BENCHMARK(BM_Forward)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_Backward(benchmark::State& state) {
  Fixture f(size_of(state.range(0)));
  const auto fwd = gcn::gcn_forward(f.model, f.neighborhood, f.features);
  const std::array<double, 4> target{0.5, -0.5, 1.0, 0.0};
  gcn::GcnParameters grads;
  gcn::BackwardWorkspace work;
  for (auto _ : state) {
    gcn::gcn_backward(f.model, f.neighborhood, fwd.cache, target, grads, work);
    benchmark::DoNotOptimize(grads);
  }
  state.counters["nodes"] = static_cast<double>(f.graph.node_count());
}
BENCHMARK(BM_Backward)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_AdamStep(benchmark::State& state) {
  auto model = gcn::GcnModel::create(Stage::Routing, 1);
  const auto grads = model.params;
  auto adam = gcn::AdamState::zeros_like(model.params);
  for (auto _ : state) gcn::adam_step(model.params, grads, adam, model.config.adam);
  state.counters["parameters"] = static_cast<double>(model.params.scalar_count());
}
BENCHMARK(BM_AdamStep)->Unit(benchmark::kMicrosecond);

}  // namespace
