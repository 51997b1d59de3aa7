#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edaplan::graph {

enum class SourceKind { Aig, Netlist };

/// Node categories. The numeric value is the one-hot position in the feature vector.
enum class NodeKind : std::uint8_t {
  PrimaryInput = 0,
  PrimaryOutput = 1,
  AndGate = 2,
  Inverter = 3,
  Cell = 4,
  Constant = 5,
};

inline constexpr std::size_t kNodeKindCount = 6;

std::string_view to_string(SourceKind kind) noexcept;
std::string_view to_string(NodeKind kind) noexcept;
std::optional<SourceKind> parse_source_kind(std::string_view text) noexcept;
std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept;

using NodeIndex = std::uint32_t;

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Cell;
  std::uint32_t in_degree = 0;
  std::uint32_t out_degree = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeIndex src = 0;
  NodeIndex dst = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable directed graph of typed nodes; the input of the runtime model.
///
/// Construction validates endpoints, rejects self-loops, checks that node kinds
/// match the source kind, and caches per-node degrees and in/out adjacency.
class DesignGraph {
 public:
  DesignGraph() = default;
  DesignGraph(std::string name, SourceKind source, std::vector<Node> nodes, std::vector<Edge> edges);

  const std::string& name() const noexcept { return name_; }
  SourceKind source_kind() const noexcept { return source_; }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }

  /// Sources of the edges entering `v`, one entry per edge (multi-edges repeat).
  std::span<const NodeIndex> in_neighbors(NodeIndex v) const;
  /// Destinations of the edges leaving `v`, one entry per edge.
  std::span<const NodeIndex> out_neighbors(NodeIndex v) const;

  /// Kahn order, or nullopt when the graph has a cycle.
  std::optional<std::vector<NodeIndex>> topological_order() const;
  bool is_acyclic() const { return topological_order().has_value(); }

  /// Relabels nodes: old node i becomes new node perm[i]. Edge list order is kept.
  DesignGraph permuted(std::span<const NodeIndex> perm) const;

  friend bool operator==(const DesignGraph& a, const DesignGraph& b) {
    return a.name_ == b.name_ && a.source_ == b.source_ && a.nodes_ == b.nodes_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::string name_;
  SourceKind source_ = SourceKind::Netlist;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  // CSR adjacency.
  std::vector<std::uint32_t> in_offsets_;
  std::vector<NodeIndex> in_list_;
  std::vector<std::uint32_t> out_offsets_;
  std::vector<NodeIndex> out_list_;
};

/// Summary used for reporting and scale checks.
struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t kind_counts[kNodeKindCount] = {};
  std::size_t max_fanout = 0;
  /// Longest path in edges; nullopt when the graph is cyclic.
  std::optional<std::size_t> depth;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

GraphStats graph_stats(const DesignGraph& graph);

}  // namespace edaplan::graph
