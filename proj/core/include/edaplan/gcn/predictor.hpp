#pragma once

#include "edaplan/gcn/model.hpp"
#include "edaplan/graph/design_graph.hpp"
#include "edaplan/runtime_estimate.hpp"

namespace edaplan::gcn {

/// Runtime estimate for 1/2/4/8 vCPUs, each rounded to whole seconds and at least 1.
/// Throws StateError for an untrained model and ConfigError when the graph source
/// kind does not suit the model's application.
RuntimeEstimate predict_runtimes(const GcnModel& model, const graph::DesignGraph& graph);

}  // namespace edaplan::gcn
