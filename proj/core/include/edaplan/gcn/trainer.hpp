#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "edaplan/gcn/model.hpp"
#include "edaplan/graph/design_graph.hpp"
#include "edaplan/graph/features.hpp"
#include "edaplan/stage.hpp"

namespace edaplan::gcn {

/// One labeled design: runtimes in seconds on 1, 2, 4 and 8 vCPUs.
struct TrainSample {
  std::shared_ptr<const graph::DesignGraph> graph;
  graph::FeatureMatrix features;
  Stage application = Stage::Synthesis;
  std::array<double, kOutputs> runtimes_seconds{};

  static TrainSample make(std::shared_ptr<const graph::DesignGraph> graph, Stage application,
                          std::array<double, kOutputs> runtimes_seconds);
};

struct TrainOptions {
  std::size_t epochs = 200;
  /// Called after each epoch with (epoch index, mean loss).
  std::function<void(std::size_t, double)> on_epoch;
};

struct TrainResult {
  /// Mean per-sample loss of each epoch, measured before each sample's update.
  std::vector<double> loss_history;
};

/// Per-output mean and population standard deviation of the targets. A constant
/// output falls back to |mean| (or 1 for all-zero) so the scale still cancels.
TargetNorm compute_target_norm(const std::vector<TrainSample>& dataset);

/// Pure stochastic training: one Adam step per sample, samples reshuffled every
/// epoch from the model seed. Sets model.norm before the first epoch.
TrainResult train(GcnModel& model, const std::vector<TrainSample>& dataset, const TrainOptions& options = {});

}  // namespace edaplan::gcn
