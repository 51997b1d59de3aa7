#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "edaplan/gcn/dense_matrix.hpp"
#include "edaplan/graph/features.hpp"
#include "edaplan/stage.hpp"

namespace edaplan::gcn {

inline constexpr std::size_t kOutputs = kVcpuOptions.size();

enum class Activation : std::uint8_t { Relu = 0, Identity = 1 };

/// Which neighbors a node averages over. InNeighbors follows edge direction.
enum class Aggregation : std::uint8_t { InNeighbors = 0, Undirected = 1 };

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

struct GcnConfig {
  /// Input width then the width of each graph-convolution layer.
  std::vector<std::size_t> gcn_dims{graph::FeatureMatrix::kCols, 256, 128};
  std::size_t hidden_units = 128;
  Activation activation = Activation::Relu;
  Aggregation aggregation = Aggregation::InNeighbors;
  AdamConfig adam{};

  friend bool operator==(const GcnConfig&, const GcnConfig&) = default;
};

/// h_v' = act(mean_{u in N(v)} h_u * neighbor_weight + h_v * self_weight)
struct GcnLayer {
  DenseMatrix neighbor_weight;  // W_k, d_in x d_out
  DenseMatrix self_weight;      // B_k, d_in x d_out
  friend bool operator==(const GcnLayer&, const GcnLayer&) = default;
};

struct DenseLayer {
  DenseMatrix weight;  // in x out
  DenseMatrix bias;    // 1 x out
  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// All trainable tensors. Gradients and Adam moments reuse the same shape.
struct GcnParameters {
  std::vector<GcnLayer> layers;
  DenseLayer hidden;
  DenseLayer output;

  /// Visits every tensor in a fixed order (layers, hidden, output; weight before bias).
  template <typename F>
  void for_each_tensor(F&& f) {
    for (auto& layer : layers) {
      f(layer.neighbor_weight);
      f(layer.self_weight);
    }
    f(hidden.weight);
    f(hidden.bias);
    f(output.weight);
    f(output.bias);
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    for (const auto& layer : layers) {
      f(layer.neighbor_weight);
      f(layer.self_weight);
    }
    f(hidden.weight);
    f(hidden.bias);
    f(output.weight);
    f(output.bias);
  }

  std::size_t scalar_count() const;
  /// Same shapes, all zeros.
  GcnParameters zeros_like() const;
  bool same_shape(const GcnParameters& other) const;

  friend bool operator==(const GcnParameters&, const GcnParameters&) = default;
};

/// Per-output z-score statistics of the training targets (seconds).
struct TargetNorm {
  std::array<double, kOutputs> mean{};
  std::array<double, kOutputs> stddev{};

  double normalize(std::size_t j, double seconds) const { return (seconds - mean[j]) / stddev[j]; }
  double denormalize(std::size_t j, double z) const { return z * stddev[j] + mean[j]; }

  friend bool operator==(const TargetNorm&, const TargetNorm&) = default;
};

struct GcnModel {
  Stage application = Stage::Synthesis;
  std::uint64_t seed = 0;
  GcnConfig config;
  GcnParameters params;
  /// Absent until the model has been trained.
  std::optional<TargetNorm> norm;

  /// Xavier-uniform weights from `seed`, zero biases, no normalization yet.
  static GcnModel create(Stage application, std::uint64_t seed, GcnConfig config = {});

  /// Throws ContractViolation if shapes do not chain or a stddev is not positive.
  void validate() const;

  friend bool operator==(const GcnModel&, const GcnModel&) = default;
};

/// Synthesis models read AIGs; the physical stages read netlist graphs.
graph::SourceKind expected_source(Stage application) noexcept;

/// Deterministic 64-bit generator (splitmix64) for initialization and shuffling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

}  // namespace edaplan::gcn
