#include <gtest/gtest.h>

#include <random>

#include "edaplan/errors.hpp"
#include "edaplan/graph/aiger.hpp"
#include "edaplan/graph/features.hpp"
#include "edaplan/graph/graph_io.hpp"
#include "edaplan/graph/netlist.hpp"
#include "edaplan/graph/verilog.hpp"
#include "support.hpp"

using namespace edaplan;
using namespace edaplan::graph;
namespace ts = edaplan::test_support;

namespace {

constexpr const char* kOneAnd = "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n";
constexpr const char* kOneAndComplemented = "aag 3 2 0 1 1\n2\n4\n6\n6 3 4\n";

constexpr const char* kInverterJson = R"({
  "name": "inv",
  "cells": [{"id": "inv1", "type": "INV"}],
  "ports": [{"id": "a", "dir": "in"}, {"id": "y", "dir": "out"}],
  "nets": [{"driver": "a", "sinks": ["inv1"]}, {"driver": "inv1", "sinks": ["y"]}]
})";

constexpr const char* kInverterVerilog = R"(module inv (a, y);
  input a;
  output y;
  INV inv1 (.A(a), .Y(y));
endmodule
)";

std::size_t count_kind(const DesignGraph& g, NodeKind kind) {
  return graph_stats(g).kind_counts[static_cast<std::size_t>(kind)];
}

}  // namespace

TEST(Aiger, SingleAndGate) {
  const DesignGraph g = parse_aiger(kOneAnd);
  EXPECT_EQ(count_kind(g, NodeKind::PrimaryInput), 2u);
  EXPECT_EQ(count_kind(g, NodeKind::AndGate), 1u);
  EXPECT_EQ(count_kind(g, NodeKind::PrimaryOutput), 1u);
  EXPECT_EQ(count_kind(g, NodeKind::Inverter), 0u);
  // Two fan-in edges and one gate-to-output edge.
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.is_acyclic());
}

TEST(Aiger, ComplementedOperandAddsOneInverter) {
  const DesignGraph plain = parse_aiger(kOneAnd);
  const DesignGraph inv = parse_aiger(kOneAndComplemented);
  EXPECT_EQ(count_kind(inv, NodeKind::Inverter), 1u);
  EXPECT_EQ(inv.node_count(), plain.node_count() + 1);
  EXPECT_EQ(inv.edge_count(), plain.edge_count() + 1);
}

TEST(Aiger, EmptyHeaderGivesEmptyGraph) {
  const DesignGraph g = parse_aiger("aag 0 0 0 0 0\n");
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Aiger, ConstantAndSharedInverters) {
  // o0 = !i0 & 1, o1 = !i0. Literal 3 is used twice but inverted once; literal 1
  // is the complemented constant, so there are two distinct complemented literals.
  const DesignGraph g = parse_aiger("aag 2 1 0 2 1\n2\n4\n3\n4 3 1\n");
  EXPECT_EQ(count_kind(g, NodeKind::Constant), 1u);
  EXPECT_EQ(count_kind(g, NodeKind::Inverter), 2u);
  // I + A + O + distinct complemented literals + constant
  EXPECT_EQ(g.node_count(), 1u + 1u + 2u + 2u + 1u);
}

TEST(Aiger, ErrorsNameTheLine) {
  struct Case {
    const char* text;
    std::size_t line;
  };
  const Case cases[] = {
      {"aig 1 1 0 0 0\n2\n", 1},           // binary header / wrong magic
      {"aag 1 1 0\n", 1},                  // short header
      {"aag 3 2 1 1 1\n2\n4\n", 1},        // latches
      {"aag 3 2 0 1 1\n2\n4\n9\n6 2 4\n", 4},   // literal beyond 2M+1
      {"aag 3 2 0 1 1\n2\n4\n6\n6 2 8\n", 5},   // operand out of range
      {"aag 3 1 0 1 2\n2\n6\n4 6 2\n6 4 2\n", 4},  // cyclic definitions
  };
  for (const auto& c : cases) {
    try {
      (void)parse_aiger(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_GE(e.line(), 1u) << c.text;
      EXPECT_LE(e.line(), c.line + 1) << c.text << " -> " << e.what();
    }
  }
}

TEST(Aiger, WriteReadRoundTrip) {
  const Aiger a = read_aiger("aag 4 2 0 1 2\n2\n4\n9\n6 2 5\n8 6 3\ni0 x\ni1 y\no0 f\n");
  EXPECT_EQ(read_aiger(write_aiger(a)), a);
}

TEST(Netlist, MinimalInverter) {
  const Netlist n = parse_netlist_json(kInverterJson);
  EXPECT_EQ(n.cells.size(), 1u);
  EXPECT_EQ(n.ports.size(), 2u);
  EXPECT_EQ(n.nets.size(), 2u);
}

TEST(Netlist, EmptySinkNetAccepted) {
  const Netlist n = parse_netlist_json(R"({"name":"d","cells":[{"id":"c","type":"BUF"}],
    "ports":[{"id":"a","dir":"in"}],"nets":[{"driver":"a","sinks":["c"]},{"driver":"c","sinks":[]}]})");
  EXPECT_EQ(star_expand(n).edge_count(), 1u);
}

TEST(Netlist, ValidationErrors) {
  const char* bad[] = {
      // undeclared driver
      R"({"name":"d","cells":[],"ports":[{"id":"y","dir":"out"}],"nets":[{"driver":"ghost","sinks":["y"]}]})",
      // duplicate id
      R"({"name":"d","cells":[{"id":"a","type":"X"}],"ports":[{"id":"a","dir":"in"}],"nets":[]})",
      // undeclared sink
      R"({"name":"d","cells":[],"ports":[{"id":"a","dir":"in"}],"nets":[{"driver":"a","sinks":["q"]}]})",
      // net with two drivers
      R"({"name":"d","cells":[],"ports":[{"id":"a","dir":"in"}],"nets":[{"driver":["a","a"],"sinks":[]}]})",
      // schema: missing nets
      R"({"name":"d","cells":[],"ports":[]})",
      // bad direction
      R"({"name":"d","cells":[],"ports":[{"id":"a","dir":"inout"}],"nets":[]})",
      // output port driving a net
      R"({"name":"d","cells":[{"id":"c","type":"X"}],"ports":[{"id":"y","dir":"out"}],"nets":[{"driver":"y","sinks":["c"]}]})",
      // not JSON
      "{",
  };
  for (const char* text : bad) {
    EXPECT_THROW((void)parse_netlist_json(text), Error) << text;
  }
}

TEST(Netlist, SerializeRoundTrip) {
  const Netlist n = parse_netlist_json(kInverterJson);
  EXPECT_EQ(parse_netlist_json(serialize_netlist_json(n)), n);
}

TEST(Verilog, MatchesJsonNetlist) {
  const Netlist v = parse_verilog_subset(kInverterVerilog);
  const Netlist j = parse_netlist_json(kInverterJson);
  EXPECT_EQ(dump_graph(star_expand(v)), dump_graph(star_expand(j)));
  EXPECT_EQ(graph_stats(star_expand(v)), graph_stats(star_expand(j)));
}

TEST(Verilog, SharedWireBecomesOneNet) {
  const Netlist n = parse_verilog_subset(R"(module two (a, y);
  input a; output y; wire w;
  INV u1 (.A(a), .Y(w));
  INV u2 (.A(w), .Y(y));
endmodule)");
  std::size_t internal = 0;
  for (const Net& net : n.nets) {
    if (net.driver == "u1") {
      ++internal;
      ASSERT_EQ(net.sinks.size(), 1u);
      EXPECT_EQ(net.sinks[0], "u2");
    }
  }
  EXPECT_EQ(internal, 1u);
}

TEST(Verilog, UnsupportedConstructs) {
  const char* bad[] = {
      "module m (a); input a; always @(a) begin end endmodule",
      "module m (a); input [3:0] a; endmodule",
      "module m (a); input a; endmodule\nmodule n (b); input b; endmodule",
      "module m (a, y); input a; output y; assign y = a; endmodule",
  };
  for (const char* text : bad) {
    try {
      (void)parse_verilog_subset(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const UnsupportedConstruct& e) {
      EXPECT_GE(e.line(), 1u);
    }
  }
}

TEST(Verilog, CustomDriverPins) {
  VerilogOptions opts;
  opts.driver_pins = {"O"};
  const Netlist n = parse_verilog_subset("module m (a, y); input a; output y; BUF b (.I(a), .O(y)); endmodule", opts);
  EXPECT_EQ(star_expand(n).edge_count(), 2u);
}

TEST(StarExpand, OneEdgePerSink) {
  Netlist n;
  n.name = "fan";
  n.cells = {{"d", "BUF"}, {"a", "X"}, {"b", "X"}, {"c", "X"}};
  n.ports = {{"i", PortDirection::In}};
  n.nets = {{"i", {"d"}}, {"d", {"a", "b", "c"}}};
  const DesignGraph g = star_expand(n);
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_EQ(g.node_count(), 5u);
}

TEST(StarExpand, EdgeCountIsSumOfSinks) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Netlist n;
    n.name = "r";
    const int cells = 1 + static_cast<int>(rng() % 8);
    for (int c = 0; c < cells; ++c) n.cells.push_back({"c" + std::to_string(c), "X"});
    n.ports = {{"in", PortDirection::In}, {"out", PortDirection::Out}};
    std::size_t expected = 0;
    for (int d = -1; d < cells; ++d) {
      Net net;
      net.driver = d < 0 ? "in" : "c" + std::to_string(d);
      const int k = static_cast<int>(rng() % 4);
      for (int s = 0; s < k; ++s) {
        const int target = static_cast<int>(rng() % (cells + 1));
        std::string id = target == cells ? "out" : "c" + std::to_string(target);
        if (id == net.driver) continue;
        net.sinks.push_back(id);
      }
      expected += net.sinks.size();
      n.nets.push_back(net);
    }
    EXPECT_EQ(star_expand(n).edge_count(), expected);
  }
}

TEST(StarExpand, SinkCounts312GiveSixEdges) {
  Netlist n;
  n.name = "s";
  n.ports = {{"p", PortDirection::In}};
  n.cells = {{"a", "X"}, {"b", "X"}, {"c", "X"}, {"d", "X"}};
  n.nets = {{"p", {"a", "b", "c"}}, {"a", {"d"}}, {"b", {"c", "d"}}};
  EXPECT_EQ(star_expand(n).edge_count(), 6u);
}

TEST(Features, IsolatedInput) {
  const DesignGraph g("x", SourceKind::Netlist, {{"p", NodeKind::PrimaryInput}}, {});
  const auto f = build_features(g);
  const std::vector<double> expected{1, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(std::vector<double>(f.row(0).begin(), f.row(0).end()), expected);
}

TEST(Features, AndGateDegrees) {
  const DesignGraph g = parse_aiger("aag 3 2 0 1 1\n2\n4\n6\n6 2 4\n");
  const auto f = build_features(g);
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (g.node(static_cast<NodeIndex>(v)).kind != NodeKind::AndGate) continue;
    EXPECT_EQ(f.row(v)[2], 1.0);
    EXPECT_DOUBLE_EQ(f.row(v)[6], std::log(3.0));
    EXPECT_DOUBLE_EQ(f.row(v)[7], std::log(2.0));
  }
}

TEST(Features, PermutationEquivariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DesignGraph g = ts::random_graph(rng, 30, SourceKind::Netlist);
    const auto perm = ts::random_permutation(rng, g.node_count());
    const auto f = build_features(g);
    const auto fp = build_features(g.permuted(perm));
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const auto a = f.row(i), b = fp.row(perm[i]);
      EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      double hot = 0;
      for (std::size_t k = 0; k < kNodeKindCount; ++k) hot += f.row(i)[k];
      EXPECT_EQ(hot, 1.0);
    }
  }
}

TEST(Stats, OneAndAig) {
  const GraphStats s = graph_stats(parse_aiger(kOneAnd));
  EXPECT_EQ(s.node_count, 4u);
  EXPECT_EQ(s.edge_count, 3u);
  ASSERT_TRUE(s.depth.has_value());
  EXPECT_EQ(*s.depth, 2u);
}

TEST(Stats, EmptyAndCyclic) {
  const GraphStats empty = graph_stats(DesignGraph("e", SourceKind::Netlist, {}, {}));
  EXPECT_EQ(empty.node_count, 0u);
  EXPECT_EQ(empty.edge_count, 0u);
  EXPECT_EQ(empty.max_fanout, 0u);
  EXPECT_EQ(empty.depth.value_or(0), 0u);
  const DesignGraph cyc("c", SourceKind::Netlist, {{"a", NodeKind::Cell}, {"b", NodeKind::Cell}}, {{0, 1}, {1, 0}});
  EXPECT_FALSE(graph_stats(cyc).depth.has_value());
}

TEST(DesignGraph, RejectsInvalidStructure) {
  EXPECT_THROW(DesignGraph("s", SourceKind::Netlist, {{"a", NodeKind::Cell}}, {{0, 0}}), ValidationError);
  EXPECT_THROW(DesignGraph("s", SourceKind::Netlist, {{"a", NodeKind::Cell}}, {{0, 3}}), ValidationError);
  EXPECT_THROW(DesignGraph("s", SourceKind::Netlist, {{"a", NodeKind::AndGate}}, {}), ValidationError);
  EXPECT_THROW(DesignGraph("s", SourceKind::Aig, {{"a", NodeKind::Cell}}, {}), ValidationError);
}

TEST(DesignGraph, CachedDegreesMatchEdges) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const DesignGraph g = ts::random_graph(rng, 40, SourceKind::Aig);
    std::vector<std::uint32_t> in(g.node_count()), out(g.node_count());
    for (const Edge& e : g.edges()) {
      ++out[e.src];
      ++in[e.dst];
    }
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      EXPECT_EQ(g.node(static_cast<NodeIndex>(v)).in_degree, in[v]);
      EXPECT_EQ(g.node(static_cast<NodeIndex>(v)).out_degree, out[v]);
    }
    EXPECT_TRUE(g.is_acyclic());
  }
}

TEST(GraphDump, RoundTripAndDeterminism) {
  const DesignGraph g = parse_aiger("aag 4 2 0 1 2\n2\n4\n9\n6 2 5\n8 6 3\n");
  const std::string text = dump_graph(g);
  EXPECT_EQ(text, dump_graph(parse_aiger("aag 4 2 0 1 2\n2\n4\n9\n6 2 5\n8 6 3\n")));
  EXPECT_EQ(parse_graph_dump(text), g);
  DesignGraph odd("name with space%", SourceKind::Netlist, {{"id 1", NodeKind::Cell}, {"\tx", NodeKind::Cell}}, {{0, 1}});
  EXPECT_EQ(parse_graph_dump(dump_graph(odd)), odd);
}

TEST(GraphDump, MalformedInput) {
  EXPECT_THROW((void)parse_graph_dump("not a dump\n"), ParseError);
  EXPECT_THROW((void)parse_graph_dump("edaplan-graph 1\nname x\nsource aig\nnodes 1\n0 Cell c\nedges 0\n"), Error);
  EXPECT_THROW((void)parse_graph_dump("edaplan-graph 1\nname x\nsource netlist\nnodes 1\n0 Cell c\nedges 1\n0 5\n"), Error);
}

TEST(LoadDesign, DispatchByExtension) {
  ts::TempDir dir("graphio");
  ts::write_file(dir / "a.aag", kOneAnd);
  ts::write_file(dir / "n.json", kInverterJson);
  ts::write_file(dir / "n.v", kInverterVerilog);
  EXPECT_EQ(load_design(dir / "a.aag").source_kind(), SourceKind::Aig);
  EXPECT_EQ(graph_stats(load_design(dir / "n.json")), graph_stats(load_design(dir / "n.v")));
  ts::write_file(dir / "n.graph", dump_graph(load_design(dir / "n.json")));
  EXPECT_EQ(dump_graph(load_design(dir / "n.graph")), dump_graph(load_design(dir / "n.json")));
  EXPECT_THROW((void)load_design(dir / "missing.aag"), LoadError);
  ts::write_file(dir / "x.txt", "");
  EXPECT_THROW((void)load_design(dir / "x.txt"), Error);
}
