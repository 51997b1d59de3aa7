#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "edaplan/errors.hpp"
#include "edaplan/graph/features.hpp"

#ifndef EDAPLAN_SOURCE_DIR
#error "EDAPLAN_SOURCE_DIR must be defined by the build"
#endif

namespace edaplan::test_support {

namespace fs = std::filesystem;

mckp::MckpInstance table1_instance(std::int64_t capacity) {
  mckp::MckpInstance inst;
  inst.capacity = capacity;
  for (std::size_t i = 0; i < 4; ++i) {
    mckp::StageChoices sc;
    sc.stage = kAllStages[i];
    for (std::size_t k = 0; k < 4; ++k) sc.choices.push_back({kVcpuOptions[k], kTable1Runtimes[i][k], kTable1Costs[i][k]});
    inst.stages.push_back(sc);
  }
  return inst;
}

std::map<Stage, RuntimeEstimate> table1_estimates() {
  std::map<Stage, RuntimeEstimate> out;
  for (std::size_t i = 0; i < 4; ++i) out[kAllStages[i]].seconds = kTable1Runtimes[i];
  return out;
}

mckp::MckpInstance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> stages(1, 5), count(1, 4), runtime(1, 200);
  std::uniform_real_distribution<double> price(0.0, 10.0);
  mckp::MckpInstance inst;
  const int l = stages(rng);
  std::int64_t max_total = 0;
  for (int i = 0; i < l; ++i) {
    mckp::StageChoices sc;
    sc.stage = kAllStages[static_cast<std::size_t>(i) % 4];
    std::array<int, 4> sizes = kVcpuOptions;
    std::shuffle(sizes.begin(), sizes.end(), rng);
    const int n = count(rng);
    std::sort(sizes.begin(), sizes.begin() + n);
    std::int64_t slowest = 0;
    for (int j = 0; j < n; ++j) {
      double p = price(rng);
      while (p <= 0.0) p = price(rng);
      // Coarse prices make value ties (and therefore the tie-break) common.
      if (rng() % 3 == 0) p = std::ceil(p);
      const std::int64_t t = runtime(rng);
      slowest = std::max(slowest, t);
      sc.choices.push_back({sizes[static_cast<std::size_t>(j)], t, p});
    }
    max_total += slowest;
    inst.stages.push_back(sc);
  }
  inst.capacity = std::uniform_int_distribution<std::int64_t>(0, max_total + 10)(rng);
  return inst;
}

graph::DesignGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes, graph::SourceKind source) {
  using graph::NodeKind;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_nodes)(rng);
  const std::vector<NodeKind> kinds =
      source == graph::SourceKind::Aig
          ? std::vector<NodeKind>{NodeKind::PrimaryInput, NodeKind::PrimaryOutput, NodeKind::AndGate,
                                  NodeKind::Inverter, NodeKind::Constant}
          : std::vector<NodeKind>{NodeKind::PrimaryInput, NodeKind::PrimaryOutput, NodeKind::Cell};
  std::vector<graph::Node> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].id = "n" + std::to_string(i);
    nodes[i].kind = kinds[rng() % kinds.size()];
  }
  std::vector<graph::Edge> edges;
  if (n > 1) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(0, 2 * n)(rng);
    for (std::size_t k = 0; k < m; ++k) {
      auto a = static_cast<graph::NodeIndex>(rng() % n), b = static_cast<graph::NodeIndex>(rng() % n);
      if (a == b) continue;
      if (source == graph::SourceKind::Aig && a > b) std::swap(a, b);
      edges.push_back({a, b});
    }
  }
  return graph::DesignGraph("random", source, std::move(nodes), std::move(edges));
}

std::vector<graph::NodeIndex> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<graph::NodeIndex> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

void randomize_parameters(gcn::GcnParameters& params, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  params.for_each_tensor([&](gcn::DenseMatrix& m) {
    for (double& v : m.values()) v = u(rng);
  });
}

namespace {

// Row-major n x d matrix as a plain vector.
using Mat = std::vector<double>;

struct RefNet {
  std::size_t n = 0;
  std::size_t d0 = 0, d1 = 0, d2 = 0, dh = 0;
  std::vector<std::vector<std::uint32_t>> nbrs;
  Mat X, A1, Z1, H1, A2, Z2, H2;
  std::vector<double> P, Q, R;
  std::array<double, 4> O{};
  const gcn::GcnModel* model = nullptr;

  const gcn::DenseMatrix& W1() const { return model->params.layers[0].neighbor_weight; }
  const gcn::DenseMatrix& B1() const { return model->params.layers[0].self_weight; }
  const gcn::DenseMatrix& W2() const { return model->params.layers[1].neighbor_weight; }
  const gcn::DenseMatrix& B2() const { return model->params.layers[1].self_weight; }
  const gcn::DenseMatrix& Wh() const { return model->params.hidden.weight; }
  const gcn::DenseMatrix& bh() const { return model->params.hidden.bias; }
  const gcn::DenseMatrix& Wo() const { return model->params.output.weight; }
  const gcn::DenseMatrix& bo() const { return model->params.output.bias; }

  static double relu(double x) { return x > 0.0 ? x : 0.0; }

  // Mean over neighbors of column vector `col` (length n).
  std::vector<double> agg_column(const std::vector<double>& col) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      if (nbrs[v].empty()) continue;
      double s = 0.0;
      for (auto u : nbrs[v]) s += col[u];
      out[v] = s / static_cast<double>(nbrs[v].size());
    }
    return out;
  }

  Mat agg(const Mat& h, std::size_t d) const {
    Mat out(n * d, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      if (nbrs[v].empty()) continue;
      for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (auto u : nbrs[v]) s += h[u * d + c];
        out[v * d + c] = s / static_cast<double>(nbrs[v].size());
      }
    }
    return out;
  }

  Mat layer(const Mat& a, const Mat& h, const gcn::DenseMatrix& w, const gcn::DenseMatrix& b, std::size_t din,
            std::size_t dout) const {
    Mat z(n * dout, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t c = 0; c < dout; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < din; ++r) s += a[v * din + r] * w(r, c) + h[v * din + r] * b(r, c);
        z[v * dout + c] = s;
      }
    }
    return z;
  }

  void init(const gcn::GcnModel& m, const graph::DesignGraph& g) {
    model = &m;
    n = g.node_count();
    d0 = W1().rows();
    d1 = W1().cols();
    d2 = W2().cols();
    dh = Wh().cols();
    if (m.params.layers.size() != 2 || m.config.activation != gcn::Activation::Relu) {
      throw ContractViolation("reference network covers the two-layer ReLU model only");
    }
    nbrs.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
      const auto idx = static_cast<graph::NodeIndex>(v);
      for (auto u : g.in_neighbors(idx)) nbrs[v].push_back(u);
      if (m.config.aggregation == gcn::Aggregation::Undirected) {
        for (auto u : g.out_neighbors(idx)) nbrs[v].push_back(u);
      }
    }
    const auto f = graph::build_features(g);
    X = f.data;
    A1 = agg(X, d0);
    Z1 = layer(A1, X, W1(), B1(), d0, d1);
    H1 = Z1;
    for (double& x : H1) x = relu(x);
    A2 = agg(H1, d1);
    Z2 = layer(A2, H1, W2(), B2(), d1, d2);
    H2 = Z2;
    for (double& x : H2) x = relu(x);
    P.assign(d2, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t c = 0; c < d2; ++c) P[c] += H2[v * d2 + c];
    }
    Q = hidden_pre(P);
    R = Q;
    for (double& x : R) x = relu(x);
    O = output(R);
  }

  std::vector<double> hidden_pre(const std::vector<double>& p) const {
    std::vector<double> q(dh);
    for (std::size_t j = 0; j < dh; ++j) {
      double s = bh()(0, j);
      for (std::size_t c = 0; c < d2; ++c) s += p[c] * Wh()(c, j);
      q[j] = s;
    }
    return q;
  }

  std::array<double, 4> output(const std::vector<double>& r) const {
    std::array<double, 4> o{};
    for (std::size_t j = 0; j < 4; ++j) {
      double s = bo()(0, j);
      for (std::size_t c = 0; c < dh; ++c) s += r[c] * Wo()(c, j);
      o[j] = s;
    }
    return o;
  }
};

double loss_of(const std::array<double, 4>& o, const std::array<double, 4>& t) {
  double s = 0.0;
  for (std::size_t j = 0; j < 4; ++j) s += (o[j] - t[j]) * (o[j] - t[j]);
  return s / 4.0;
}

struct Probe {
  double loss = 0.0;
  std::vector<bool> mask;  // ReLU states of every pre-activation the probe recomputed
};

class Prober {
 public:
  Prober(const RefNet& net, const std::array<double, 4>& target) : net_(net), t_(target) {}

  Probe from_q(std::vector<double> q, Probe p) const {
    std::vector<double> r(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
      r[j] = RefNet::relu(q[j]);
      p.mask.push_back(q[j] > 0.0);
    }
    p.loss = loss_of(net_.output(r), t_);
    return p;
  }

  Probe output_weight(std::size_t r, std::size_t j, double d) const {
    auto o = net_.O;
    o[j] += d * net_.R[r];
    return {loss_of(o, t_), {}};
  }
  Probe output_bias(std::size_t j, double d) const {
    auto o = net_.O;
    o[j] += d;
    return {loss_of(o, t_), {}};
  }
  Probe hidden_weight(std::size_t r, std::size_t c, double d) const {
    auto q = net_.Q;
    q[c] += d * net_.P[r];
    return from_q(std::move(q), {});
  }
  Probe hidden_bias(std::size_t c, double d) const {
    auto q = net_.Q;
    q[c] += d;
    return from_q(std::move(q), {});
  }

  // Layer 2: a single pre-activation column changes by d * source column.
  Probe layer2(std::size_t r, std::size_t c, double d, bool neighbor) const {
    const std::size_t n = net_.n, d1 = net_.d1, d2 = net_.d2;
    Probe p;
    double pc = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double src = neighbor ? net_.A2[v * d1 + r] : net_.H1[v * d1 + r];
      const double z = net_.Z2[v * d2 + c] + d * src;
      p.mask.push_back(z > 0.0);
      pc += RefNet::relu(z);
    }
    auto q = net_.Q;
    const double dp = pc - net_.P[c];
    for (std::size_t j = 0; j < net_.dh; ++j) q[j] += dp * net_.Wh()(c, j);
    return from_q(std::move(q), std::move(p));
  }

  // Layer 1: one column of H1 changes, which feeds every layer-2 column.
  Probe layer1(std::size_t r, std::size_t c, double d, bool neighbor) const {
    const std::size_t n = net_.n, d0 = net_.d0, d1 = net_.d1, d2 = net_.d2;
    Probe p;
    std::vector<double> dh1(n);
    for (std::size_t v = 0; v < n; ++v) {
      const double src = neighbor ? net_.A1[v * d0 + r] : net_.X[v * d0 + r];
      const double z = net_.Z1[v * d1 + c] + d * src;
      p.mask.push_back(z > 0.0);
      dh1[v] = RefNet::relu(z) - net_.H1[v * d1 + c];
    }
    const auto da2 = net_.agg_column(dh1);
    std::vector<double> pooled(d2, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < d2; ++k) {
        const double z = net_.Z2[v * d2 + k] + da2[v] * net_.W2()(c, k) + dh1[v] * net_.B2()(c, k);
        p.mask.push_back(z > 0.0);
        pooled[k] += RefNet::relu(z);
      }
    }
    return from_q(net_.hidden_pre(pooled), std::move(p));
  }

 private:
  const RefNet& net_;
  std::array<double, 4> t_;
};

}  // namespace

std::array<double, 4> reference_forward(const gcn::GcnModel& model, const graph::DesignGraph& graph) {
  RefNet net;
  net.init(model, graph);
  return net.O;
}

GradCheckReport finite_difference_check(const gcn::GcnModel& model, const graph::DesignGraph& graph,
                                        const std::array<double, 4>& normalized_target,
                                        const gcn::GcnParameters& analytic, double step, double tolerance,
                                        double floor) {
  RefNet net;
  net.init(model, graph);
  const Prober probe(net, normalized_target);
  GradCheckReport report;

  auto check = [&](const char* tensor, std::size_t r, std::size_t c, double a, auto&& eval) {
    ++report.parameters;
    const Probe plus = eval(step), minus = eval(-step);
    if (plus.mask != minus.mask) {
      ++report.kinks;
      return;
    }
    ++report.compared;
    const double numeric = (plus.loss - minus.loss) / (2.0 * step);
    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      std::ostringstream os;
      os << tensor << '(' << r << ',' << c << ") analytic " << a << " numeric " << numeric;
      report.worst = os.str();
    }
    if (!(rel < tolerance)) ++report.failures;
  };

  const auto& l1 = analytic.layers[0];
  const auto& l2 = analytic.layers[1];
  for (std::size_t r = 0; r < net.d0; ++r) {
    for (std::size_t c = 0; c < net.d1; ++c) {
      check("W1", r, c, l1.neighbor_weight(r, c), [&](double d) { return probe.layer1(r, c, d, true); });
      check("B1", r, c, l1.self_weight(r, c), [&](double d) { return probe.layer1(r, c, d, false); });
    }
  }
  for (std::size_t r = 0; r < net.d1; ++r) {
    for (std::size_t c = 0; c < net.d2; ++c) {
      check("W2", r, c, l2.neighbor_weight(r, c), [&](double d) { return probe.layer2(r, c, d, true); });
      check("B2", r, c, l2.self_weight(r, c), [&](double d) { return probe.layer2(r, c, d, false); });
    }
  }
  for (std::size_t r = 0; r < net.d2; ++r) {
    for (std::size_t c = 0; c < net.dh; ++c) {
      check("Wh", r, c, analytic.hidden.weight(r, c), [&](double d) { return probe.hidden_weight(r, c, d); });
    }
  }
  for (std::size_t c = 0; c < net.dh; ++c) {
    check("bh", 0, c, analytic.hidden.bias(0, c), [&](double d) { return probe.hidden_bias(c, d); });
  }
  for (std::size_t r = 0; r < net.dh; ++r) {
    for (std::size_t j = 0; j < 4; ++j) {
      check("Wo", r, j, analytic.output.weight(r, j), [&](double d) { return probe.output_weight(r, j, d); });
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    check("bo", 0, j, analytic.output.bias(0, j), [&](double d) { return probe.output_bias(j, d); });
  }
  return report;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  const fs::path base = fs::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path candidate = base / ("edaplan-" + tag + "-" + std::to_string(rd()));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path source_dir() { return EDAPLAN_SOURCE_DIR; }

fs::path fixture(const std::string& name) { return source_dir() / "fixtures" / name; }

}  // namespace edaplan::test_support
