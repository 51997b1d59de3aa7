#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "edaplan/gcn/model.hpp"
#include "edaplan/graph/design_graph.hpp"
#include "edaplan/graph/features.hpp"

namespace edaplan::gcn {

/// Neighbor lists used for aggregation, fixed per (graph, aggregation mode).
struct Neighborhood {
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> list;

  std::span<const std::uint32_t> of(std::size_t v) const {
    return std::span(list).subspan(offsets[v], offsets[v + 1] - offsets[v]);
  }
  std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

Neighborhood make_neighborhood(const graph::DesignGraph& graph, Aggregation mode);

/// Intermediate values of one forward pass, kept for the backward pass.
struct ForwardCache {
  std::vector<DenseMatrix> activations;  // h^0 (features) .. h^K, each n x d_k
  std::vector<DenseMatrix> aggregates;   // mean neighbor rows of h^{k-1}, k = 1..K
  std::vector<DenseMatrix> preacts;      // pre-activation of layer k, k = 1..K
  DenseMatrix pooled;                    // 1 x d_K, sum over nodes of h^K
  DenseMatrix hidden_pre;                // 1 x hidden
  DenseMatrix hidden;                    // 1 x hidden
  std::array<double, kOutputs> normalized_output{};
};

struct ForwardResult {
  ForwardCache cache;
  /// Denormalized seconds when the model carries target statistics, otherwise
  /// the raw (normalized-space) head output.
  std::array<double, kOutputs> prediction{};

  const DenseMatrix& node_embeddings() const { return cache.activations.back(); }
  const DenseMatrix& pooled() const { return cache.pooled; }
};

DenseMatrix to_matrix(const graph::FeatureMatrix& features);

/// Graph convolutions, sum-pooling readout and the two-layer runtime head.
/// Neighbor means and the node sum are reduced in a content-sorted order, so
/// relabeling nodes or reordering edges leaves the prediction bit-identical.
ForwardResult gcn_forward(const GcnModel& model, const graph::DesignGraph& graph,
                          const graph::FeatureMatrix& features);
ForwardResult gcn_forward(const GcnModel& model, const Neighborhood& neighborhood, const DenseMatrix& features);
/// Same computation into an existing cache, reusing its buffers (training loop).
void gcn_forward(const GcnModel& model, const Neighborhood& neighborhood, const DenseMatrix& features,
                 ForwardCache& cache);

/// Mean squared error over the four outputs in normalized target space.
double mse_loss(std::span<const double> prediction_seconds, std::span<const double> target_seconds,
                const TargetNorm& norm);
/// Same loss when both sides are already normalized.
double mse_loss_normalized(std::span<const double> prediction, std::span<const double> target);

/// Scratch buffers for gcn_backward; reusing one across steps avoids reallocating.
struct BackwardWorkspace {
  DenseMatrix d_out, d_hidden, d_pooled, d_h, d_prev, d_agg, weight_t;
};

/// Reverse-mode gradients of mse_loss_normalized(cache output, normalized_target)
/// with respect to every parameter. `grads` is overwritten (shape of model.params).
void gcn_backward(const GcnModel& model, const Neighborhood& neighborhood, const ForwardCache& cache,
                  std::span<const double> normalized_target, GcnParameters& grads);
void gcn_backward(const GcnModel& model, const Neighborhood& neighborhood, const ForwardCache& cache,
                  std::span<const double> normalized_target, GcnParameters& grads, BackwardWorkspace& work);

/// Convenience wrapper: forward, then gradients for a target in seconds.
GcnParameters gcn_backward(const GcnModel& model, const graph::DesignGraph& graph,
                           const graph::FeatureMatrix& features, std::span<const double> target_seconds);

}  // namespace edaplan::gcn
