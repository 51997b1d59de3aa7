#include "edaplan/gcn/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edaplan/errors.hpp"
#include "edaplan/gcn/network.hpp"
#include "edaplan/graph/features.hpp"

namespace edaplan::gcn {

RuntimeEstimate predict_runtimes(const GcnModel& model, const graph::DesignGraph& graph) {
  if (!model.norm) {
    throw StateError("model for " + std::string(to_string(model.application)) +
                     " has no target normalization (untrained)");
  }
  const graph::SourceKind want = expected_source(model.application);
  if (graph.source_kind() != want) {
    throw ConfigError(std::string(to_string(model.application)) + " model expects a " +
                      std::string(graph::to_string(want)) + " graph, got a " +
                      std::string(graph::to_string(graph.source_kind())) + " graph");
  }
  const ForwardResult fwd = gcn_forward(model, graph, graph::build_features(graph));
  RuntimeEstimate estimate;
  for (std::size_t j = 0; j < kOutputs; ++j) {
    const double seconds = std::max(1.0, std::round(fwd.prediction[j]));
    if (!std::isfinite(seconds) || seconds > 9.0e15) {
      throw ContractViolation("runtime prediction out of range");
    }
    estimate.seconds[j] = static_cast<std::int64_t>(seconds);
  }
  return estimate;
}

}  // namespace edaplan::gcn
