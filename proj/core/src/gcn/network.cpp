#include "edaplan/gcn/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "edaplan/errors.hpp"

namespace edaplan::gcn {

namespace {

bool row_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// out[v] = mean of h[u] for u in N(v), zero row when N(v) is empty.
void aggregate_mean(const Neighborhood& nb, const DenseMatrix& h, DenseMatrix& out,
                    std::vector<std::uint32_t>& scratch) {
  const std::size_t n = h.rows(), d = h.cols();
  out.resize(n, d);
  for (std::size_t v = 0; v < n; ++v) {
    const auto neighbors = nb.of(v);
    if (neighbors.empty()) continue;
    auto dst = out.row(v);
    if (neighbors.size() <= 2) {
      // Two-term sums are order-independent; no sort needed.
      for (std::uint32_t u : neighbors) {
        const auto src = h.row(u);
        for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
      }
    } else {
      scratch.assign(neighbors.begin(), neighbors.end());
      std::sort(scratch.begin(), scratch.end(),
                [&](std::uint32_t a, std::uint32_t b) { return row_less(h.row(a), h.row(b)); });
      for (std::uint32_t u : scratch) {
        const auto src = h.row(u);
        for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
      }
    }
    const double inv = static_cast<double>(neighbors.size());
    for (std::size_t c = 0; c < d; ++c) dst[c] /= inv;
  }
}

void apply_activation(Activation act, const DenseMatrix& pre, DenseMatrix& out) {
  out = pre;
  if (act == Activation::Relu) {
    for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  }
}

void activation_backward(Activation act, const DenseMatrix& pre, DenseMatrix& grad) {
  if (act != Activation::Relu) return;
  auto g = grad.values();
  auto z = pre.values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(z[i] > 0.0)) g[i] = 0.0;
  }
}

// 1 x cols outer-product accumulate: out (rows x cols) += column(a)^T * row(b)
void outer(std::span<const double> a, std::span<const double> b, DenseMatrix& out) {
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < b.size(); ++c) out(r, c) = a[r] * b[c];
  }
}

}  // namespace

Neighborhood make_neighborhood(const graph::DesignGraph& graph, Aggregation mode) {
  Neighborhood nb;
  const std::size_t n = graph.node_count();
  nb.offsets.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto idx = static_cast<graph::NodeIndex>(v);
    std::size_t degree = graph.in_neighbors(idx).size();
    if (mode == Aggregation::Undirected) degree += graph.out_neighbors(idx).size();
    nb.offsets[v + 1] = nb.offsets[v] + static_cast<std::uint32_t>(degree);
  }
  nb.list.reserve(nb.offsets.back());
  for (std::size_t v = 0; v < n; ++v) {
    const auto idx = static_cast<graph::NodeIndex>(v);
    for (auto u : graph.in_neighbors(idx)) nb.list.push_back(u);
    if (mode == Aggregation::Undirected) {
      for (auto u : graph.out_neighbors(idx)) nb.list.push_back(u);
    }
  }
  return nb;
}

DenseMatrix to_matrix(const graph::FeatureMatrix& features) {
  DenseMatrix m(features.rows, graph::FeatureMatrix::kCols);
  std::copy(features.data.begin(), features.data.end(), m.values().begin());
  return m;
}

void gcn_forward(const GcnModel& model, const Neighborhood& neighborhood, const DenseMatrix& features,
                 ForwardCache& cache) {
  const auto& dims = model.config.gcn_dims;
  if (features.cols() != dims.front()) {
    throw ContractViolation("feature width " + std::to_string(features.cols()) + " does not match model input " +
                            std::to_string(dims.front()));
  }
  if (features.rows() != neighborhood.node_count()) {
    throw ContractViolation("feature rows (" + std::to_string(features.rows()) + ") != node count (" +
                            std::to_string(neighborhood.node_count()) + ")");
  }
  const std::size_t layers = model.params.layers.size();
  cache.activations.resize(layers + 1);
  cache.aggregates.resize(layers);
  cache.preacts.resize(layers);
  cache.activations[0] = features;

  std::vector<std::uint32_t> scratch;
  for (std::size_t k = 0; k < layers; ++k) {
    const GcnLayer& layer = model.params.layers[k];
    aggregate_mean(neighborhood, cache.activations[k], cache.aggregates[k], scratch);
    gemm(cache.aggregates[k], layer.neighbor_weight, cache.preacts[k]);
    gemm(cache.activations[k], layer.self_weight, cache.preacts[k], /*accumulate=*/true);
    apply_activation(model.config.activation, cache.preacts[k], cache.activations[k + 1]);
  }

  // Sum-pooling in content order.
  const DenseMatrix& top = cache.activations.back();
  const std::size_t n = top.rows(), d = top.cols();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return row_less(top.row(a), top.row(b)); });
  cache.pooled.resize(1, d);
  auto pooled = cache.pooled.row(0);
  for (std::uint32_t v : order) {
    const auto src = top.row(v);
    for (std::size_t c = 0; c < d; ++c) pooled[c] += src[c];
  }

  cache.hidden_pre = model.params.hidden.bias;
  gemm(cache.pooled, model.params.hidden.weight, cache.hidden_pre, true);
  apply_activation(Activation::Relu, cache.hidden_pre, cache.hidden);
  DenseMatrix out = model.params.output.bias;
  gemm(cache.hidden, model.params.output.weight, out, true);
  out.check_finite("network output");
  for (std::size_t j = 0; j < kOutputs; ++j) cache.normalized_output[j] = out(0, j);
}

ForwardResult gcn_forward(const GcnModel& model, const Neighborhood& neighborhood, const DenseMatrix& features) {
  ForwardResult result;
  gcn_forward(model, neighborhood, features, result.cache);
  for (std::size_t j = 0; j < kOutputs; ++j) {
    const double z = result.cache.normalized_output[j];
    result.prediction[j] = model.norm ? model.norm->denormalize(j, z) : z;
  }
  return result;
}

ForwardResult gcn_forward(const GcnModel& model, const graph::DesignGraph& graph,
                          const graph::FeatureMatrix& features) {
  if (features.rows != graph.node_count()) {
    throw ContractViolation("feature rows (" + std::to_string(features.rows) + ") != node count (" +
                            std::to_string(graph.node_count()) + ")");
  }
  return gcn_forward(model, make_neighborhood(graph, model.config.aggregation), to_matrix(features));
}

double mse_loss_normalized(std::span<const double> prediction, std::span<const double> target) {
  if (prediction.size() != kOutputs || target.size() != kOutputs) {
    throw ContractViolation("mse_loss expects 4 predictions and 4 targets");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < kOutputs; ++j) {
    const double r = prediction[j] - target[j];
    sum += r * r;
  }
  return sum / static_cast<double>(kOutputs);
}

double mse_loss(std::span<const double> prediction_seconds, std::span<const double> target_seconds,
                const TargetNorm& norm) {
  if (prediction_seconds.size() != kOutputs || target_seconds.size() != kOutputs) {
    throw ContractViolation("mse_loss expects 4 predictions and 4 targets");
  }
  std::array<double, kOutputs> p{}, t{};
  for (std::size_t j = 0; j < kOutputs; ++j) {
    p[j] = norm.normalize(j, prediction_seconds[j]);
    t[j] = norm.normalize(j, target_seconds[j]);
  }
  return mse_loss_normalized(p, t);
}

void gcn_backward(const GcnModel& model, const Neighborhood& neighborhood, const ForwardCache& cache,
                  std::span<const double> normalized_target, GcnParameters& grads) {
  BackwardWorkspace work;
  gcn_backward(model, neighborhood, cache, normalized_target, grads, work);
}

void gcn_backward(const GcnModel& model, const Neighborhood& neighborhood, const ForwardCache& cache,
                  std::span<const double> normalized_target, GcnParameters& grads, BackwardWorkspace& work) {
  if (normalized_target.size() != kOutputs) throw ContractViolation("gcn_backward expects 4 targets");
  if (!grads.same_shape(model.params)) grads = model.params.zeros_like();

  // dL/dout for L = mean_j (out_j - t_j)^2
  work.d_out.resize(1, kOutputs);
  for (std::size_t j = 0; j < kOutputs; ++j) {
    work.d_out(0, j) = 2.0 * (cache.normalized_output[j] - normalized_target[j]) / static_cast<double>(kOutputs);
  }
  grads.output.bias = work.d_out;
  outer(cache.hidden.row(0), work.d_out.row(0), grads.output.weight);

  transpose_into(model.params.output.weight, work.weight_t);
  gemm(work.d_out, work.weight_t, work.d_hidden);
  activation_backward(Activation::Relu, cache.hidden_pre, work.d_hidden);
  grads.hidden.bias = work.d_hidden;
  outer(cache.pooled.row(0), work.d_hidden.row(0), grads.hidden.weight);

  transpose_into(model.params.hidden.weight, work.weight_t);
  gemm(work.d_hidden, work.weight_t, work.d_pooled);

  // Every node receives the pooled gradient.
  const std::size_t n = cache.activations.front().rows();
  const std::size_t layers = model.params.layers.size();
  work.d_h.resize(n, work.d_pooled.cols());
  const auto pooled_grad = work.d_pooled.row(0);
  for (std::size_t v = 0; v < n; ++v) std::copy(pooled_grad.begin(), pooled_grad.end(), work.d_h.row(v).begin());

  for (std::size_t k = layers; k-- > 0;) {
    const GcnLayer& layer = model.params.layers[k];
    DenseMatrix& d_z = work.d_h;
    activation_backward(model.config.activation, cache.preacts[k], d_z);
    gemm_tn(cache.aggregates[k], d_z, grads.layers[k].neighbor_weight);
    gemm_tn(cache.activations[k], d_z, grads.layers[k].self_weight);
    if (k == 0) break;

    transpose_into(layer.self_weight, work.weight_t);
    gemm(d_z, work.weight_t, work.d_prev);
    transpose_into(layer.neighbor_weight, work.weight_t);
    gemm(d_z, work.weight_t, work.d_agg);
    const std::size_t d = work.d_prev.cols();
    for (std::size_t v = 0; v < n; ++v) {
      const auto neighbors = neighborhood.of(v);
      if (neighbors.empty()) continue;
      const double inv = static_cast<double>(neighbors.size());
      const auto g = work.d_agg.row(v);
      for (std::uint32_t u : neighbors) {
        auto dst = work.d_prev.row(u);
        for (std::size_t c = 0; c < d; ++c) dst[c] += g[c] / inv;
      }
    }
    std::swap(work.d_h, work.d_prev);
  }
}

GcnParameters gcn_backward(const GcnModel& model, const graph::DesignGraph& graph,
                           const graph::FeatureMatrix& features, std::span<const double> target_seconds) {
  if (!model.norm) throw StateError("model has no target normalization; train it first");
  if (target_seconds.size() != kOutputs) throw ContractViolation("gcn_backward expects 4 targets");
  const Neighborhood nb = make_neighborhood(graph, model.config.aggregation);
  const ForwardResult fwd = gcn_forward(model, nb, to_matrix(features));
  std::array<double, kOutputs> target{};
  for (std::size_t j = 0; j < kOutputs; ++j) target[j] = model.norm->normalize(j, target_seconds[j]);
  GcnParameters grads = model.params.zeros_like();
  gcn_backward(model, nb, fwd.cache, target, grads);
  return grads;
}

}  // namespace edaplan::gcn
