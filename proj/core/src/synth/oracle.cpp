#include "edaplan/synth/oracle.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <unordered_set>

#include "edaplan/errors.hpp"
#include "edaplan/gcn/model.hpp"
#include "edaplan/graph/graph_io.hpp"

namespace edaplan::synth {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  gcn::SplitMix64 rng(h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
  return rng.next();
}

std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

void OracleParams::validate() const {
  if (!(a_v >= 0.0) || !(a_e >= 0.0) || !(c0 >= 0.0)) throw ContractViolation("oracle coefficients must be >= 0");
  if (!(a_v + a_e > 0.0)) throw ContractViolation("oracle needs a_v + a_e > 0");
  if (!(serial_fraction > 0.0 && serial_fraction <= 1.0)) throw ContractViolation("serial fraction must be in (0, 1]");
  if (!(noise_rel >= 0.0) || noise_rel >= 1.0) throw ContractViolation("noise_rel must be in [0, 1)");
}

OracleParams default_oracle_params(Stage application, std::uint64_t seed) {
  OracleParams p;
  p.seed = seed;
  switch (application) {
    case Stage::Synthesis:
      p.c0 = 20.0, p.a_v = 0.9, p.a_e = 0.3, p.serial_fraction = 0.5;
      break;
    case Stage::Placement:
      p.c0 = 10.0, p.a_v = 0.3, p.a_e = 0.1, p.serial_fraction = 0.55;
      break;
    case Stage::Routing:
      p.c0 = 30.0, p.a_v = 1.5, p.a_e = 0.6, p.serial_fraction = 0.45;
      break;
    case Stage::Sta:
      p.c0 = 5.0, p.a_v = 0.05, p.a_e = 0.03, p.serial_fraction = 0.7;
      break;
  }
  return p;
}

double size_scale(SizeClass size) noexcept {
  switch (size) {
    case SizeClass::Small: return 1.0;
    case SizeClass::Medium: return 1.0 / 3.0;
    case SizeClass::Large: return 0.1;
  }
  return 1.0;
}

OracleParams params_for_graph(const OracleParams& base, const graph::DesignGraph& graph) {
  OracleParams p = base;
  p.serial_fraction = base.serial_fraction * size_scale(classify_size(graph.node_count()));
  return p;
}

double base_runtime(const graph::DesignGraph& graph, const OracleParams& params) {
  return params.c0 + params.a_v * static_cast<double>(graph.node_count()) +
         params.a_e * static_cast<double>(graph.edge_count());
}

double oracle_runtime(const graph::DesignGraph& graph, const OracleParams& params, int vcpus) {
  params.validate();
  if (!vcpu_index(vcpus)) throw ContractViolation("vcpus must be 1, 2, 4 or 8");
  const double f = params.serial_fraction;
  const double factor = vcpus == 1 ? 1.0 : f + (1.0 - f) / static_cast<double>(vcpus);
  const double t = std::round(base_runtime(graph, params) * factor);
  double eps = 0.0;
  if (params.noise_rel > 0.0) {
    gcn::SplitMix64 rng(mix(mix(params.seed, hash_name(graph.name())), static_cast<std::uint64_t>(vcpus)));
    eps = (2.0 * rng.uniform() - 1.0) * params.noise_rel;
  }
  return std::max(1.0, t * (1.0 + eps));
}

std::array<double, 4> oracle_runtimes(const graph::DesignGraph& graph, const OracleParams& params) {
  std::array<double, 4> out{};
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = oracle_runtime(graph, params, kVcpuOptions[k]);
  return out;
}

std::vector<gcn::TrainSample> SyntheticDataset::samples(const std::vector<std::size_t>& indices) const {
  std::vector<gcn::TrainSample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(gcn::TrainSample::make(designs.at(i).graph, application, designs[i].runtimes));
  return out;
}

SyntheticDataset gen_dataset(std::size_t n_graphs, const OracleParams& params, std::uint64_t seed,
                             const DatasetOptions& options) {
  if (n_graphs < 10) throw ConfigError("a synthetic dataset needs at least 10 graphs");
  if (options.sizes.empty()) throw ConfigError("no size classes given");
  params.validate();
  SyntheticDataset ds;
  ds.params = params;
  ds.application = options.application;
  const graph::SourceKind kind = gcn::expected_source(options.application);

  gcn::SplitMix64 seeds(seed);
  std::unordered_set<std::uint64_t> used_seeds;
  std::unordered_set<std::string> used_structures;
  while (ds.designs.size() < n_graphs) {
    const std::uint64_t s = seeds.next();
    if (!used_seeds.insert(s).second) continue;
    const SizeClass size = options.sizes[ds.designs.size() % options.sizes.size()];
    auto g = std::make_shared<const graph::DesignGraph>(gen_graph(s, size, kind, options.generator));
    // Structure only: the dump minus the name line.
    std::string dump = graph::dump_graph(*g);
    const auto first_nl = dump.find('\n');
    const auto second_nl = dump.find('\n', first_nl + 1);
    dump.erase(first_nl, second_nl - first_nl);
    if (!used_structures.insert(std::move(dump)).second) continue;
    const OracleParams p = options.size_dependent_serial_fraction ? params_for_graph(params, *g) : params;
    ds.designs.push_back({s, size, g, oracle_runtimes(*g, p)});
  }

  std::vector<std::size_t> order(n_graphs);
  std::iota(order.begin(), order.end(), std::size_t{0});
  gcn::SplitMix64 rng(mix(seed, 0x5EED5EEDull));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  const std::size_t n_train = (n_graphs * 8 + 5) / 10;
  ds.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  ds.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(ds.train.begin(), ds.train.end());
  std::sort(ds.test.begin(), ds.test.end());
  return ds;
}

WrittenDataset write_dataset_files(const SyntheticDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "graphs");
  auto write_split = [&](const std::vector<std::size_t>& indices, const std::filesystem::path& path) {
    std::vector<gcn::DatasetRecord> records;
    for (std::size_t i : indices) {
      const auto& d = dataset.designs[i];
      const std::filesystem::path graph_path = dir / "graphs" / (d.graph->name() + ".graph");
      std::ofstream out(graph_path, std::ios::trunc);
      out << graph::dump_graph(*d.graph);
      if (!out) throw LoadError("failed writing '" + graph_path.string() + "'");
      records.push_back({graph_path, dataset.application, d.runtimes});
    }
    gcn::write_dataset(path, records);
  };
  WrittenDataset written{dir / "train.jsonl", dir / "test.jsonl"};
  write_split(dataset.train, written.train_jsonl);
  write_split(dataset.test, written.test_jsonl);
  return written;
}

}  // namespace edaplan::synth
