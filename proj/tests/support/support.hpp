#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "edaplan/gcn/model.hpp"
#include "edaplan/graph/design_graph.hpp"
#include "edaplan/mckp/instance.hpp"
#include "edaplan/runtime_estimate.hpp"

namespace edaplan::test_support {

// Table 1 of the reference deployment study, transcribed literally.
inline constexpr std::array<std::array<std::int64_t, 4>, 4> kTable1Runtimes{{
    {6100, 4342, 3449, 3352},
    {1206, 905, 644, 519},
    {10461, 5514, 2894, 1692},
    {183, 119, 90, 82},
}};
inline constexpr std::array<std::array<double, 4>, 4> kTable1Costs{{
    {0.16, 0.15, 0.19, 0.37},
    {0.04, 0.04, 0.05, 0.08},
    {0.32, 0.25, 0.21, 0.25},
    {0.02, 0.01, 0.02, 0.05},
}};

mckp::MckpInstance table1_instance(std::int64_t capacity);
std::map<Stage, RuntimeEstimate> table1_estimates();

/// Random instance within l in [1,5], N_i in [1,4], t in [1,200], p in (0,10].
mckp::MckpInstance random_instance(std::mt19937_64& rng);

/// Random graph with 1..max_nodes nodes of kinds legal for `source`; edges may
/// repeat and (for netlists) form cycles, but never self-loop.
graph::DesignGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes, graph::SourceKind source);
std::vector<graph::NodeIndex> random_permutation(std::mt19937_64& rng, std::size_t n);

/// Overwrites every parameter with uniform values in [-scale, scale].
void randomize_parameters(gcn::GcnParameters& params, std::mt19937_64& rng, double scale);

/// Straight-loop forward pass written from the layer formula, independent of
/// the library's kernels. Returns the 4 normalized-space outputs.
std::array<double, 4> reference_forward(const gcn::GcnModel& model, const graph::DesignGraph& graph);

struct GradCheckReport {
  std::size_t parameters = 0;
  std::size_t compared = 0;
  std::size_t kinks = 0;  // skipped: a ReLU changed state between the two probes
  std::size_t failures = 0;
  double max_rel_error = 0.0;
  std::string worst;
};

/// Central finite differences of the normalized loss for every parameter,
/// evaluated incrementally on the reference network, against `analytic`.
/// Relative error is |a - n| / max(|a|, |n|, floor).
GradCheckReport finite_difference_check(const gcn::GcnModel& model, const graph::DesignGraph& graph,
                                        const std::array<double, 4>& normalized_target,
                                        const gcn::GcnParameters& analytic, double step = 1e-5,
                                        double tolerance = 1e-4, double floor = 1e-6);

class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

/// Source tree locations baked in at configure time.
std::filesystem::path source_dir();
std::filesystem::path fixture(const std::string& name);

}  // namespace edaplan::test_support
