#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "edaplan/errors.hpp"
#include "edaplan/gcn/adam.hpp"
#include "edaplan/gcn/dataset.hpp"
#include "edaplan/gcn/model_io.hpp"
#include "edaplan/gcn/network.hpp"
#include "edaplan/gcn/predictor.hpp"
#include "edaplan/gcn/trainer.hpp"
#include "edaplan/graph/aiger.hpp"
#include "edaplan/graph/features.hpp"
#include "edaplan/graph/graph_io.hpp"
#include "edaplan/synth/oracle.hpp"
#include "support.hpp"

using namespace edaplan;
using namespace edaplan::gcn;
namespace ts = edaplan::test_support;

namespace {

graph::DesignGraph two_nodes() {
  return graph::DesignGraph("ab", graph::SourceKind::Netlist,
                            {{"a", graph::NodeKind::PrimaryInput}, {"b", graph::NodeKind::Cell}}, {{0, 1}});
}

GcnModel with_unit_norm(GcnModel m) {
  TargetNorm n;
  n.mean.fill(0.0);
  n.stddev.fill(1.0);
  m.norm = n;
  return m;
}

std::vector<TrainSample> synthetic_samples(Stage app, std::size_t count, std::uint64_t seed) {
  const auto ds = synth::gen_dataset(count, synth::default_oracle_params(app, seed), seed,
                                     synth::DatasetOptions{app, {synth::SizeClass::Small}, {}, true});
  return ds.samples(ds.train);
}

bool bit_equal(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return std::memcmp(a.data(), b.data(), sizeof(double) * 4) == 0;
}

}  // namespace

TEST(Forward, ZeroWeightsGiveBiasPrediction) {
  GcnModel m = GcnModel::create(Stage::Routing, 1);
  m.params.for_each_tensor([](DenseMatrix& t) { t.set_zero(); });
  for (std::size_t j = 0; j < 4; ++j) m.params.output.bias(0, j) = 0.25 * static_cast<double>(j + 1);
  TargetNorm norm;
  norm.mean = {100, 200, 300, 400};
  norm.stddev = {10, 20, 30, 40};
  m.norm = norm;
  const graph::DesignGraph g("one", graph::SourceKind::Netlist, {{"c", graph::NodeKind::Cell}}, {});
  const auto r = gcn_forward(m, g, graph::build_features(g));
  for (double v : r.node_embeddings().values()) EXPECT_EQ(v, 0.0);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(r.prediction[j], norm.denormalize(j, 0.25 * (j + 1)));
}

TEST(Forward, MeanOfSingleInNeighborIsExact) {
  GcnConfig cfg;
  cfg.gcn_dims = {8, 8, 8};
  cfg.hidden_units = 4;
  cfg.activation = Activation::Identity;
  GcnModel m = GcnModel::create(Stage::Placement, 3, cfg);
  auto& layer = m.params.layers[0];
  layer.self_weight.set_zero();
  layer.neighbor_weight.set_zero();
  for (std::size_t i = 0; i < 8; ++i) layer.neighbor_weight(i, i) = 1.0;
  const auto g = two_nodes();
  const auto f = graph::build_features(g);
  const auto r = gcn_forward(m, g, f);
  const auto& h1 = r.cache.activations[1];
  const auto hb = h1.row(1);
  const auto xa = f.row(0);
  EXPECT_TRUE(std::equal(hb.begin(), hb.end(), xa.begin()));
  // a has no in-neighbors: zero aggregate, zero self term.
  for (double v : h1.row(0)) EXPECT_EQ(v, 0.0);
}

TEST(Forward, DimensionMismatchIsContractViolation) {
  const GcnModel m = with_unit_norm(GcnModel::create(Stage::Placement, 1));
  const auto g = two_nodes();
  graph::FeatureMatrix f = graph::build_features(g);
  f.rows = 3;
  f.data.resize(24, 0.0);
  EXPECT_THROW((void)gcn_forward(m, g, f), ContractViolation);
}

TEST(Forward, MatchesStraightLoopReference) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    GcnModel m = GcnModel::create(Stage::Routing, static_cast<std::uint64_t>(trial));
    ts::randomize_parameters(m.params, rng, 0.2);
    const auto g = ts::random_graph(rng, 12, graph::SourceKind::Netlist);
    const auto lib = gcn_forward(m, g, graph::build_features(g)).cache.normalized_output;
    const auto ref = ts::reference_forward(m, g);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(lib[j], ref[j], 1e-12 * std::max(1.0, std::abs(ref[j])));
  }
}

TEST(Forward, PermutationInvariantBitwise) {
  std::mt19937_64 rng(8);
  const GcnModel m = with_unit_norm(GcnModel::create(Stage::Synthesis, 9));
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = ts::random_graph(rng, 40, graph::SourceKind::Aig);
    const auto p = g.permuted(ts::random_permutation(rng, g.node_count()));
    const auto a = gcn_forward(m, g, graph::build_features(g)).prediction;
    const auto b = gcn_forward(m, p, graph::build_features(p)).prediction;
    EXPECT_TRUE(bit_equal(a, b));
  }
}

TEST(Forward, IsolatedNodesStayFinite) {
  const GcnModel m = with_unit_norm(GcnModel::create(Stage::Sta, 2));
  std::vector<graph::Node> nodes;
  for (int i = 0; i < 5; ++i) nodes.push_back({"p" + std::to_string(i), graph::NodeKind::PrimaryInput});
  const graph::DesignGraph g("iso", graph::SourceKind::Netlist, nodes, {});
  for (double v : gcn_forward(m, g, graph::build_features(g)).prediction) EXPECT_TRUE(std::isfinite(v));
}

TEST(Forward, UndirectedAggregationDiffers) {
  GcnConfig cfg;
  cfg.aggregation = Aggregation::Undirected;
  GcnModel u = with_unit_norm(GcnModel::create(Stage::Routing, 4, cfg));
  GcnModel d = u;
  d.config.aggregation = Aggregation::InNeighbors;
  const auto g = two_nodes();
  const auto f = graph::build_features(g);
  EXPECT_NE(gcn_forward(u, g, f).prediction, gcn_forward(d, g, f).prediction);
  const auto ref = ts::reference_forward(u, g);
  const auto lib = gcn_forward(u, g, f).cache.normalized_output;
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(lib[j], ref[j], 1e-12);
}

TEST(Loss, Examples) {
  TargetNorm n;
  n.mean = {10, 20, 30, 40};
  n.stddev = {2, 4, 6, 8};
  const std::array<double, 4> t{12, 24, 36, 48};
  EXPECT_EQ(mse_loss(t, t, n), 0.0);
  const std::array<double, 4> p{14, 28, 42, 56};  // each one stddev above t
  EXPECT_DOUBLE_EQ(mse_loss(p, t, n), 1.0);
  EXPECT_EQ(mse_loss(p, t, n), mse_loss(t, p, n));
}

TEST(Backward, ZeroAtTarget) {
  const GcnModel m = with_unit_norm(GcnModel::create(Stage::Routing, 5));
  std::mt19937_64 rng(1);
  const auto g = ts::random_graph(rng, 8, graph::SourceKind::Netlist);
  const auto out = gcn_forward(m, g, graph::build_features(g)).prediction;
  const auto grads = gcn_backward(m, g, graph::build_features(g), out);
  grads.for_each_tensor([](const DenseMatrix& t) {
    for (double v : t.values()) EXPECT_EQ(v, 0.0);
  });
}

TEST(Backward, MatchesFiniteDifferences) {
  std::mt19937_64 rng(77);
  GcnModel m = GcnModel::create(Stage::Placement, 6);
  std::uniform_real_distribution<double> bias(-0.1, 0.1);
  m.params.hidden.bias.values()[0] = 0.05;
  for (double& b : m.params.hidden.bias.values()) b = bias(rng);
  for (double& b : m.params.output.bias.values()) b = bias(rng);
  graph::DesignGraph g("six", graph::SourceKind::Netlist,
                       {{"a", graph::NodeKind::PrimaryInput},
                        {"b", graph::NodeKind::PrimaryInput},
                        {"c", graph::NodeKind::Cell},
                        {"d", graph::NodeKind::Cell},
                        {"e", graph::NodeKind::Cell},
                        {"y", graph::NodeKind::PrimaryOutput}},
                       {{0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {2, 3}, {4, 5}, {4, 2}});
  const std::array<double, 4> target{1.5, -0.5, 0.75, 2.0};
  const auto nb = make_neighborhood(g, m.config.aggregation);
  const auto fwd = gcn_forward(m, nb, to_matrix(graph::build_features(g)));
  GcnParameters grads;
  gcn_backward(m, nb, fwd.cache, target, grads);
  const auto report = ts::finite_difference_check(m, g, target, grads);
  EXPECT_EQ(report.parameters, m.params.scalar_count());
  EXPECT_EQ(report.failures, 0u) << report.worst;
  EXPECT_LT(report.kinks, report.parameters / 100);
}

TEST(Backward, AbsentFeatureRowsGetZeroGradient) {
  // Netlist graph: no AndGate/Inverter/Constant nodes, so those one-hot
  // feature columns are zero everywhere and rows 2, 3, 5 of W1/B1 are unused.
  std::mt19937_64 rng(4);
  const GcnModel m = with_unit_norm(GcnModel::create(Stage::Sta, 8));
  const auto g = ts::random_graph(rng, 10, graph::SourceKind::Netlist);
  const std::array<double, 4> target{3, 1, -2, 0.5};
  const auto grads = gcn_backward(m, g, graph::build_features(g), target);
  for (std::size_t row : {2u, 3u, 5u}) {
    for (std::size_t c = 0; c < grads.layers[0].neighbor_weight.cols(); ++c) {
      EXPECT_EQ(grads.layers[0].neighbor_weight(row, c), 0.0);
      EXPECT_EQ(grads.layers[0].self_weight(row, c), 0.0);
    }
  }
}

TEST(Adam, ZeroGradientKeepsParameters) {
  GcnModel m = GcnModel::create(Stage::Routing, 1);
  const GcnParameters before = m.params;
  AdamState st = AdamState::zeros_like(m.params);
  adam_step(m.params, m.params.zeros_like(), st, m.config.adam);
  EXPECT_EQ(m.params, before);
  EXPECT_EQ(st.step, 1u);
}

TEST(Adam, FirstStepClosedForm) {
  GcnModel m = GcnModel::create(Stage::Routing, 1);
  m.params.for_each_tensor([](DenseMatrix& t) { t.set_zero(); });
  GcnParameters g = m.params.zeros_like();
  g.layers[0].neighbor_weight(0, 0) = 1.0;
  AdamState st;
  adam_step(m.params, g, st, m.config.adam);
  // m_hat = 1, v_hat = 1: delta = -lr * 1 / (1 + eps)
  EXPECT_NEAR(m.params.layers[0].neighbor_weight(0, 0), -1e-4 / (1.0 + 1e-8), 1e-18);
  EXPECT_EQ(m.params.layers[0].self_weight(0, 0), 0.0);
}

TEST(Adam, TwoStepsDifferFromOneDoubleStep) {
  GcnModel a = GcnModel::create(Stage::Routing, 2);
  GcnModel b = a;
  std::mt19937_64 rng(3);
  GcnParameters g = a.params.zeros_like();
  ts::randomize_parameters(g, rng, 1.0);
  AdamState sa, sb;
  adam_step(a.params, g, sa, a.config.adam);
  adam_step(a.params, g, sa, a.config.adam);
  AdamConfig doubled = b.config.adam;
  doubled.learning_rate *= 2;
  adam_step(b.params, g, sb, doubled);
  EXPECT_NE(a.params, b.params);
}

TEST(Adam, ShapeMismatchIsContractViolation) {
  GcnModel m = GcnModel::create(Stage::Routing, 2);
  AdamState st = AdamState::zeros_like(m.params);
  GcnParameters g = m.params.zeros_like();
  g.output.bias.resize(1, 3);
  EXPECT_THROW(adam_step(m.params, g, st, m.config.adam), ContractViolation);
}

TEST(Train, SingleSampleOverfits) {
  auto samples = synthetic_samples(Stage::Routing, 10, 1);
  samples.resize(1);
  GcnModel m = GcnModel::create(Stage::Routing, 1);
  TrainOptions opts;
  opts.epochs = 200;
  const auto r = train(m, samples, opts);
  ASSERT_EQ(r.loss_history.size(), 200u);
  EXPECT_LT(r.loss_history.back(), r.loss_history.front());
}

TEST(Train, DeterministicAndScaleInvariant) {
  const auto samples = synthetic_samples(Stage::Sta, 12, 2);
  auto doubled = samples;
  for (auto& s : doubled) {
    for (double& t : s.runtimes_seconds) t *= 2.0;
  }
  TrainOptions opts;
  opts.epochs = 3;
  GcnModel a = GcnModel::create(Stage::Sta, 5), b = a, c = a;
  const auto ra = train(a, samples, opts);
  const auto rb = train(b, samples, opts);
  const auto rc = train(c, doubled, opts);
  EXPECT_EQ(ra.loss_history, rb.loss_history);
  EXPECT_EQ(serialize_model(a), serialize_model(b));
  EXPECT_EQ(ra.loss_history, rc.loss_history);
}

TEST(Train, ConfigurationErrors) {
  GcnModel m = GcnModel::create(Stage::Routing, 1);
  EXPECT_THROW((void)train(m, {}, {}), ConfigError);
  auto routing = synthetic_samples(Stage::Routing, 10, 3);
  auto sta = synthetic_samples(Stage::Sta, 10, 3);
  routing.push_back(sta.front());
  EXPECT_THROW((void)train(m, routing, {}), ConfigError);
  GcnModel synth_model = GcnModel::create(Stage::Synthesis, 1);
  EXPECT_THROW((void)train(synth_model, sta, {}), ConfigError);
}

TEST(Predict, ClampedIntegersAndErrors) {
  auto samples = synthetic_samples(Stage::Placement, 12, 4);
  GcnModel m = GcnModel::create(Stage::Placement, 2);
  EXPECT_THROW((void)predict_runtimes(m, *samples.front().graph), StateError);
  TrainOptions opts;
  opts.epochs = 2;
  (void)train(m, samples, opts);
  for (const auto& s : samples) {
    for (auto v : predict_runtimes(m, *s.graph).seconds) EXPECT_GE(v, 1);
  }
  // Force a negative head output: clamp to 1 second.
  GcnModel neg = m;
  neg.params.output.weight.set_zero();
  neg.params.output.bias.values()[0] = -1e6;
  EXPECT_EQ(predict_runtimes(neg, *samples.front().graph).seconds[0], 1);
  const auto aig = graph::parse_aiger("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n");
  EXPECT_THROW((void)predict_runtimes(m, aig), ConfigError);
}

TEST(ModelIo, RoundTripBitExact) {
  auto samples = synthetic_samples(Stage::Synthesis, 10, 5);
  GcnModel m = GcnModel::create(Stage::Synthesis, 11);
  TrainOptions opts;
  opts.epochs = 1;
  (void)train(m, samples, opts);
  const std::string bytes = serialize_model(m);
  const GcnModel back = deserialize_model(bytes);
  EXPECT_EQ(back, m);
  EXPECT_EQ(serialize_model(back), bytes);
  const auto& g = *samples.front().graph;
  EXPECT_TRUE(bit_equal(gcn_forward(m, g, graph::build_features(g)).prediction,
                        gcn_forward(back, g, graph::build_features(g)).prediction));
  ts::TempDir dir("model");
  save_model(m, dir / "m.model");
  EXPECT_EQ(load_model(dir / "m.model"), m);
}

TEST(ModelIo, CorruptTruncatedAndFutureVersion) {
  const std::string bytes = serialize_model(with_unit_norm(GcnModel::create(Stage::Sta, 1)));
  for (std::size_t cut : {std::size_t{0}, std::size_t{7}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW((void)deserialize_model(std::string_view(bytes).substr(0, cut)), LoadError) << cut;
  }
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  EXPECT_THROW((void)deserialize_model(flipped), LoadError);
  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW((void)deserialize_model(magic), LoadError);
  std::string future = bytes;
  future[8] = static_cast<char>(kModelFormatVersion + 1);
  EXPECT_THROW((void)deserialize_model(future), VersionError);
  ts::TempDir dir("model");
  EXPECT_THROW((void)load_model(dir / "absent.model"), LoadError);
}

TEST(Dataset, ParseAndErrors) {
  const auto recs = parse_dataset(
      "{\"graph\":\"g/a.graph\",\"application\":\"routing\",\"runtimes\":{\"1\":10,\"2\":6,\"4\":4,\"8\":3}}\n\n", "/base");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].graph, std::filesystem::path("/base/g/a.graph"));
  EXPECT_EQ(recs[0].application, Stage::Routing);
  EXPECT_EQ(recs[0].runtimes[3], 3.0);
  try {
    (void)parse_dataset("\n{oops\n", "/");
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW((void)parse_dataset(R"({"graph":"a","application":"lunch","runtimes":{"1":1,"2":1,"4":1,"8":1}})", "/"),
               Error);
  EXPECT_THROW((void)parse_dataset(R"({"graph":"a","application":"sta","runtimes":{"1":1,"2":1,"4":1}})", "/"), Error);
  EXPECT_THROW((void)parse_dataset(R"({"graph":"a","application":"sta","runtimes":{"1":1,"2":0,"4":1,"8":1}})", "/"),
               Error);
}

TEST(Dataset, WriteReadRoundTrip) {
  ts::TempDir dir("dataset");
  const auto g = graph::parse_aiger("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n", "tiny");
  ts::write_file(dir / "graphs" / "tiny.graph", graph::dump_graph(g));
  std::vector<DatasetRecord> recs{{dir / "graphs" / "tiny.graph", Stage::Synthesis, {40, 25, 18, 16}}};
  write_dataset(dir / "d.jsonl", recs);
  const auto back = read_dataset(dir / "d.jsonl");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].runtimes, recs[0].runtimes);
  const auto samples = load_samples(back);
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_EQ(*samples[0].graph, g);
  EXPECT_THROW((void)load_samples(back, Stage::Routing), ConfigError);
}
