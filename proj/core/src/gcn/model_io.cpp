#include "edaplan/gcn/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "edaplan/errors.hpp"

namespace edaplan::gcn {

namespace {

constexpr char kMagic[8] = {'E', 'D', 'A', 'P', 'G', 'C', 'N', '\0'};

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Writer {
 public:
  void bytes(const void* data, std::size_t n) { out_.append(static_cast<const char*>(data), n); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void matrix(const DenseMatrix& m) {
    u64(m.rows());
    u64(m.cols());
    for (double v : m.values()) f64(v);
  }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  void need(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) throw LoadError(std::string("model file truncated while reading ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<std::uint8_t>(in_[pos_++])} << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<std::uint8_t>(in_[pos_++])} << (8 * i);
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
  DenseMatrix matrix(std::size_t rows, std::size_t cols, const char* what) {
    const std::uint64_t r = u64(what), c = u64(what);
    if (r != rows || c != cols) {
      throw LoadError(std::string("model file tensor '") + what + "' has shape " + std::to_string(r) + "x" +
                      std::to_string(c) + ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    need(rows * cols * 8, what);
    DenseMatrix m(rows, cols);
    for (double& v : m.values()) v = f64(what);
    return m;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const GcnModel& model) {
  model.validate();
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.application));
  w.u8(static_cast<std::uint8_t>(model.config.activation));
  w.u8(static_cast<std::uint8_t>(model.config.aggregation));
  w.u8(model.norm ? 1 : 0);
  w.u64(model.seed);
  w.u32(static_cast<std::uint32_t>(model.config.gcn_dims.size()));
  for (std::size_t d : model.config.gcn_dims) w.u64(d);
  w.u64(model.config.hidden_units);
  w.u64(kOutputs);
  w.f64(model.config.adam.learning_rate);
  w.f64(model.config.adam.beta1);
  w.f64(model.config.adam.beta2);
  w.f64(model.config.adam.epsilon);
  if (model.norm) {
    for (double v : model.norm->mean) w.f64(v);
    for (double v : model.norm->stddev) w.f64(v);
  }
  model.params.for_each_tensor([&](const DenseMatrix& m) { w.matrix(m); });
  const std::uint64_t checksum = fnv1a(w.str());
  w.u64(checksum);
  return std::move(w.str());
}

GcnModel deserialize_model(std::string_view bytes) {
  Reader r(bytes);
  r.need(sizeof kMagic, "magic");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) throw LoadError("not an edaplan model file (bad magic)");
  for (std::size_t i = 0; i < sizeof kMagic; ++i) r.u8("magic");
  const std::uint32_t version = r.u32("version");
  if (version > kModelFormatVersion) {
    throw VersionError("model file version " + std::to_string(version) + " is newer than supported version " +
                       std::to_string(kModelFormatVersion));
  }
  if (version == 0) throw LoadError("model file version 0 is invalid");
  if (bytes.size() < sizeof kMagic + 4 + 8) throw LoadError("model file truncated");
  const std::string_view body = bytes.substr(0, bytes.size() - 8);
  Reader tail(bytes.substr(bytes.size() - 8));
  if (fnv1a(body) != tail.u64("checksum")) throw LoadError("model file checksum mismatch (corrupt or truncated)");

  GcnModel model;
  const std::uint8_t app = r.u8("application");
  const std::uint8_t act = r.u8("activation");
  const std::uint8_t agg = r.u8("aggregation");
  const std::uint8_t has_norm = r.u8("norm flag");
  if (app > 3) throw LoadError("model file has unknown application tag " + std::to_string(app));
  if (act > 1) throw LoadError("model file has unknown activation tag " + std::to_string(act));
  if (agg > 1) throw LoadError("model file has unknown aggregation tag " + std::to_string(agg));
  if (has_norm > 1) throw LoadError("model file has invalid norm flag");
  model.application = static_cast<Stage>(app);
  model.config.activation = static_cast<Activation>(act);
  model.config.aggregation = static_cast<Aggregation>(agg);
  model.seed = r.u64("seed");
  const std::uint32_t ndims = r.u32("dims");
  if (ndims != 3) throw LoadError("model file declares " + std::to_string(ndims) + " gcn dims, expected 3");
  model.config.gcn_dims.assign(ndims, 0);
  for (auto& d : model.config.gcn_dims) {
    d = r.u64("dims");
    if (d == 0 || d > (1u << 16)) throw LoadError("model file has an implausible layer width");
  }
  model.config.hidden_units = r.u64("hidden units");
  if (model.config.hidden_units == 0 || model.config.hidden_units > (1u << 16)) {
    throw LoadError("model file has an implausible hidden width");
  }
  if (r.u64("outputs") != kOutputs) throw LoadError("model file output count is not 4");
  model.config.adam.learning_rate = r.f64("adam");
  model.config.adam.beta1 = r.f64("adam");
  model.config.adam.beta2 = r.f64("adam");
  model.config.adam.epsilon = r.f64("adam");
  if (has_norm) {
    TargetNorm norm;
    for (double& v : norm.mean) v = r.f64("norm");
    for (double& v : norm.stddev) v = r.f64("norm");
    model.norm = norm;
  }
  const auto& dims = model.config.gcn_dims;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    GcnLayer layer;
    layer.neighbor_weight = r.matrix(dims[k], dims[k + 1], "neighbor weight");
    layer.self_weight = r.matrix(dims[k], dims[k + 1], "self weight");
    model.params.layers.push_back(std::move(layer));
  }
  model.params.hidden.weight = r.matrix(dims.back(), model.config.hidden_units, "hidden weight");
  model.params.hidden.bias = r.matrix(1, model.config.hidden_units, "hidden bias");
  model.params.output.weight = r.matrix(model.config.hidden_units, kOutputs, "output weight");
  model.params.output.bias = r.matrix(1, kOutputs, "output bias");
  if (r.pos() != body.size()) throw LoadError("model file has trailing bytes");
  try {
    model.validate();
  } catch (const ContractViolation& e) {
    throw LoadError(std::string("model file is inconsistent: ") + e.what());
  }
  return model;
}

void save_model(const GcnModel& model, const std::filesystem::path& path) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw LoadError("failed writing '" + path.string() + "'");
}

GcnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model file '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace edaplan::gcn
