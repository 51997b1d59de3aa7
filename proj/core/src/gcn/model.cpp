#include "edaplan/gcn/model.hpp"

#include <cmath>
#include <string>

#include "edaplan/errors.hpp"

namespace edaplan::gcn {

namespace {

void xavier_uniform(DenseMatrix& m, SplitMix64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (double& v : m.values()) v = (2.0 * rng.uniform() - 1.0) * bound;
}

void require_shape(const DenseMatrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ContractViolation(what + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

std::size_t GcnParameters::scalar_count() const {
  std::size_t count = 0;
  for_each_tensor([&](const DenseMatrix& m) { count += m.size(); });
  return count;
}

GcnParameters GcnParameters::zeros_like() const {
  GcnParameters zeros = *this;
  zeros.for_each_tensor([](DenseMatrix& m) { m.set_zero(); });
  return zeros;
}

bool GcnParameters::same_shape(const GcnParameters& other) const {
  if (layers.size() != other.layers.size()) return false;
  std::vector<const DenseMatrix*> mine, theirs;
  for_each_tensor([&](const DenseMatrix& m) { mine.push_back(&m); });
  other.for_each_tensor([&](const DenseMatrix& m) { theirs.push_back(&m); });
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (!mine[i]->same_shape(*theirs[i])) return false;
  }
  return true;
}

GcnModel GcnModel::create(Stage application, std::uint64_t seed, GcnConfig config) {
  GcnModel model;
  model.application = application;
  model.seed = seed;
  model.config = std::move(config);
  const auto& dims = model.config.gcn_dims;
  if (dims.size() < 2 || dims.front() != graph::FeatureMatrix::kCols) {
    throw ContractViolation("gcn_dims must start with the feature width " +
                            std::to_string(graph::FeatureMatrix::kCols));
  }
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    GcnLayer layer{DenseMatrix(dims[k], dims[k + 1]), DenseMatrix(dims[k], dims[k + 1])};
    xavier_uniform(layer.neighbor_weight, rng);
    xavier_uniform(layer.self_weight, rng);
    model.params.layers.push_back(std::move(layer));
  }
  const std::size_t embed = dims.back();
  const std::size_t hidden = model.config.hidden_units;
  model.params.hidden = {DenseMatrix(embed, hidden), DenseMatrix(1, hidden)};
  model.params.output = {DenseMatrix(hidden, kOutputs), DenseMatrix(1, kOutputs)};
  xavier_uniform(model.params.hidden.weight, rng);
  xavier_uniform(model.params.output.weight, rng);
  model.validate();
  return model;
}

void GcnModel::validate() const {
  const auto& dims = config.gcn_dims;
  if (dims.size() != 3) {
    throw ContractViolation("expected 2 graph-convolution layers, got " +
                            std::to_string(dims.size() < 1 ? 0 : dims.size() - 1));
  }
  if (dims.front() != graph::FeatureMatrix::kCols) throw ContractViolation("first gcn dim must equal feature width");
  if (params.layers.size() + 1 != dims.size()) throw ContractViolation("layer count does not match gcn_dims");
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    const std::string tag = "layer " + std::to_string(k + 1);
    require_shape(params.layers[k].neighbor_weight, dims[k], dims[k + 1], tag + " neighbor weight");
    require_shape(params.layers[k].self_weight, dims[k], dims[k + 1], tag + " self weight");
  }
  require_shape(params.hidden.weight, dims.back(), config.hidden_units, "hidden weight");
  require_shape(params.hidden.bias, 1, config.hidden_units, "hidden bias");
  require_shape(params.output.weight, config.hidden_units, kOutputs, "output weight");
  require_shape(params.output.bias, 1, kOutputs, "output bias");
  if (norm) {
    for (std::size_t j = 0; j < kOutputs; ++j) {
      if (!(norm->stddev[j] > 0.0) || !std::isfinite(norm->stddev[j]) || !std::isfinite(norm->mean[j])) {
        throw ContractViolation("target normalization stddev must be positive and finite");
      }
    }
  }
}

graph::SourceKind expected_source(Stage application) noexcept {
  return application == Stage::Synthesis ? graph::SourceKind::Aig : graph::SourceKind::Netlist;
}

}  // namespace edaplan::gcn
