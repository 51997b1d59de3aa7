#include "edaplan/graph/features.hpp"

#include <algorithm>
#include <cmath>

namespace edaplan::graph {

std::array<double, FeatureMatrix::kCols> node_features(const Node& node) {
  std::array<double, FeatureMatrix::kCols> x{};
  x[static_cast<std::size_t>(node.kind)] = 1.0;
  x[kNodeKindCount] = std::log1p(static_cast<double>(node.in_degree));
  x[kNodeKindCount + 1] = std::log1p(static_cast<double>(node.out_degree));
  return x;
}

FeatureMatrix build_features(const DesignGraph& graph) {
  FeatureMatrix features;
  features.rows = graph.node_count();
  features.data.reserve(features.rows * FeatureMatrix::kCols);
  for (const Node& node : graph.nodes()) {
    const auto x = node_features(node);
    features.data.insert(features.data.end(), x.begin(), x.end());
  }
  return features;
}

}  // namespace edaplan::graph
