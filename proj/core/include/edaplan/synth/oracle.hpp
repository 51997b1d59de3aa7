#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "edaplan/gcn/dataset.hpp"
#include "edaplan/gcn/trainer.hpp"
#include "edaplan/graph/design_graph.hpp"
#include "edaplan/stage.hpp"
#include "edaplan/synth/generator.hpp"

namespace edaplan::synth {

/// Amdahl-style runtime model: t_1 = c0 + a_v|V| + a_e|E|,
/// t_k = round(t_1 (f + (1 - f)/k)) (1 + eps), eps uniform in [-noise_rel, noise_rel].
struct OracleParams {
  double a_v = 1.0;  // seconds per node
  double a_e = 0.5;  // seconds per edge
  double c0 = 10.0;  // base seconds
  double serial_fraction = 0.5;
  double noise_rel = 0.05;
  std::uint64_t seed = 0;

  /// Throws ContractViolation unless a_v, a_e, c0 >= 0, a_v + a_e > 0, f in (0, 1], noise >= 0.
  void validate() const;
};

/// Defaults per application; serial_fraction is the small-design value.
OracleParams default_oracle_params(Stage application, std::uint64_t seed = 0);

/// Serial fraction shrinks with design size (small x1, medium x1/3, large x1/10),
/// so small designs saturate early and large ones keep scaling.
double size_scale(SizeClass size) noexcept;
OracleParams params_for_graph(const OracleParams& base, const graph::DesignGraph& graph);

double base_runtime(const graph::DesignGraph& graph, const OracleParams& params);

/// Noise is drawn from (params.seed, graph name, k), so it is reproducible per design.
double oracle_runtime(const graph::DesignGraph& graph, const OracleParams& params, int vcpus);
std::array<double, 4> oracle_runtimes(const graph::DesignGraph& graph, const OracleParams& params);

struct SyntheticDesign {
  std::uint64_t seed = 0;
  SizeClass size = SizeClass::Small;
  std::shared_ptr<const graph::DesignGraph> graph;
  std::array<double, 4> runtimes{};
};

struct DatasetOptions {
  Stage application = Stage::Synthesis;
  /// Size classes cycled through in order; one graph per design.
  std::vector<SizeClass> sizes{SizeClass::Small};
  GeneratorOptions generator{};
  /// Apply size_scale to the serial fraction.
  bool size_dependent_serial_fraction = true;
};

struct SyntheticDataset {
  OracleParams params;
  Stage application = Stage::Synthesis;
  std::vector<SyntheticDesign> designs;
  std::vector<std::size_t> train;  // indices into designs
  std::vector<std::size_t> test;

  std::vector<gcn::TrainSample> samples(const std::vector<std::size_t>& indices) const;
};

/// n_graphs >= 10 distinct designs (by seed and by structure), 80/20 split.
SyntheticDataset gen_dataset(std::size_t n_graphs, const OracleParams& params, std::uint64_t seed,
                             const DatasetOptions& options = {});

struct WrittenDataset {
  std::filesystem::path train_jsonl;
  std::filesystem::path test_jsonl;
};

/// Writes graphs/<name>.graph (canonical dump) plus train.jsonl and test.jsonl into `dir`.
WrittenDataset write_dataset_files(const SyntheticDataset& dataset, const std::filesystem::path& dir);

}  // namespace edaplan::synth
