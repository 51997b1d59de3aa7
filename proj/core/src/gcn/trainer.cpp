#include "edaplan/gcn/trainer.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "edaplan/errors.hpp"
#include "edaplan/gcn/adam.hpp"
#include "edaplan/gcn/network.hpp"

namespace edaplan::gcn {

TrainSample TrainSample::make(std::shared_ptr<const graph::DesignGraph> graph, Stage application,
                              std::array<double, kOutputs> runtimes_seconds) {
  if (!graph) throw ContractViolation("training sample without a graph");
  for (double t : runtimes_seconds) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ContractViolation("training runtimes must be positive");
  }
  TrainSample sample;
  sample.features = graph::build_features(*graph);
  sample.graph = std::move(graph);
  sample.application = application;
  sample.runtimes_seconds = runtimes_seconds;
  return sample;
}

TargetNorm compute_target_norm(const std::vector<TrainSample>& dataset) {
  if (dataset.empty()) throw ConfigError("cannot compute target statistics of an empty dataset");
  TargetNorm norm;
  const double n = static_cast<double>(dataset.size());
  for (std::size_t j = 0; j < kOutputs; ++j) {
    double sum = 0.0;
    for (const auto& s : dataset) sum += s.runtimes_seconds[j];
    const double mean = sum / n;
    double sq = 0.0;
    for (const auto& s : dataset) {
      const double d = s.runtimes_seconds[j] - mean;
      sq += d * d;
    }
    double stddev = std::sqrt(sq / n);
    if (!(stddev > 0.0)) stddev = mean != 0.0 ? std::abs(mean) : 1.0;
    norm.mean[j] = mean;
    norm.stddev[j] = stddev;
  }
  return norm;
}

TrainResult train(GcnModel& model, const std::vector<TrainSample>& dataset, const TrainOptions& options) {
  if (dataset.empty()) throw ConfigError("training dataset is empty");
  const graph::SourceKind source = expected_source(model.application);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset[i];
    if (s.application != model.application) {
      throw ConfigError("sample " + std::to_string(i) + " is labeled " + std::string(to_string(s.application)) +
                        " but the model is for " + std::string(to_string(model.application)));
    }
    if (!s.graph || s.graph->source_kind() != source) {
      throw ConfigError("sample " + std::to_string(i) + " graph is not a " + std::string(graph::to_string(source)) +
                        " graph as required for " + std::string(to_string(model.application)));
    }
    if (s.features.rows != s.graph->node_count()) {
      throw ContractViolation("sample " + std::to_string(i) + " feature rows do not match its graph");
    }
  }
  model.validate();
  const TargetNorm norm = compute_target_norm(dataset);
  model.norm = norm;

  struct Prepared {
    Neighborhood neighborhood;
    DenseMatrix features;
    std::array<double, kOutputs> target{};
  };
  std::vector<Prepared> prepared;
  prepared.reserve(dataset.size());
  for (const auto& s : dataset) {
    Prepared p{make_neighborhood(*s.graph, model.config.aggregation), to_matrix(s.features), {}};
    for (std::size_t j = 0; j < kOutputs; ++j) p.target[j] = norm.normalize(j, s.runtimes_seconds[j]);
    prepared.push_back(std::move(p));
  }

  // Shuffle stream is separate from the initialization stream of the same seed.
  SplitMix64 rng(model.seed ^ 0xA5A5A5A5A5A5A5A5ull);
  AdamState adam = AdamState::zeros_like(model.params);
  GcnParameters grads = model.params.zeros_like();
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  ForwardCache cache;
  BackwardWorkspace work;
  TrainResult result;
  result.loss_history.reserve(options.epochs);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    double total = 0.0;
    for (std::size_t idx : order) {
      const Prepared& p = prepared[idx];
      gcn_forward(model, p.neighborhood, p.features, cache);
      total += mse_loss_normalized(cache.normalized_output, p.target);
      gcn_backward(model, p.neighborhood, cache, p.target, grads, work);
      adam_step(model.params, grads, adam, model.config.adam);
    }
    const double mean_loss = total / static_cast<double>(order.size());
    if (!std::isfinite(mean_loss)) throw ContractViolation("training diverged: non-finite loss at epoch " +
                                                           std::to_string(epoch + 1));
    result.loss_history.push_back(mean_loss);
    if (options.on_epoch) options.on_epoch(epoch, mean_loss);
  }
  return result;
}

}  // namespace edaplan::gcn
