#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "edaplan/graph/design_graph.hpp"

namespace edaplan::graph {

/// Per-node input features: one-hot node kind (6) followed by log(1 + in_degree)
/// and log(1 + out_degree). Row-major, one row per node in graph order.
struct FeatureMatrix {
  static constexpr std::size_t kCols = kNodeKindCount + 2;

  std::size_t rows = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const { return std::span(data).subspan(i * kCols, kCols); }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

std::array<double, FeatureMatrix::kCols> node_features(const Node& node);

FeatureMatrix build_features(const DesignGraph& graph);

}  // namespace edaplan::graph
