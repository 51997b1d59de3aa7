#include "edaplan/graph/design_graph.hpp"

#include <algorithm>
#include <array>

#include "edaplan/errors.hpp"

namespace edaplan::graph {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kKindNames{
    "PrimaryInput", "PrimaryOutput", "AndGate", "Inverter", "Cell", "Constant"};

bool kind_allowed(NodeKind kind, SourceKind source) {
  switch (kind) {
    case NodeKind::AndGate:
    case NodeKind::Inverter:
    case NodeKind::Constant:
      return source == SourceKind::Aig;
    case NodeKind::Cell:
      return source == SourceKind::Netlist;
    default:
      return true;
  }
}

void build_csr(std::size_t n, std::span<const Edge> edges, bool incoming,
               std::vector<std::uint32_t>& offsets, std::vector<NodeIndex>& list) {
  offsets.assign(n + 1, 0);
  for (const Edge& e : edges) ++offsets[(incoming ? e.dst : e.src) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  list.assign(edges.size(), 0);
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : edges) {
    const NodeIndex key = incoming ? e.dst : e.src;
    list[cursor[key]++] = incoming ? e.src : e.dst;
  }
}

}  // namespace

std::string_view to_string(SourceKind kind) noexcept {
  return kind == SourceKind::Aig ? "aig" : "netlist";
}

std::string_view to_string(NodeKind kind) noexcept {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<SourceKind> parse_source_kind(std::string_view text) noexcept {
  if (text == "aig") return SourceKind::Aig;
  if (text == "netlist") return SourceKind::Netlist;
  return std::nullopt;
}

std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

DesignGraph::DesignGraph(std::string name, SourceKind source, std::vector<Node> nodes,
                         std::vector<Edge> edges)
    : name_(std::move(name)), source_(source), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!kind_allowed(nodes_[i].kind, source_)) {
      throw ValidationError("node '" + nodes_[i].id + "' of kind " +
                            std::string(to_string(nodes_[i].kind)) + " not allowed in " +
                            std::string(to_string(source_)) + " graph");
    }
    nodes_[i].in_degree = 0;
    nodes_[i].out_degree = 0;
  }
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.src >= n || e.dst >= n) {
      throw ValidationError("edge " + std::to_string(k) + " references a node index out of range");
    }
    if (e.src == e.dst) {
      throw ValidationError("edge " + std::to_string(k) + " is a self-loop on '" + nodes_[e.src].id +
                            "'");
    }
    ++nodes_[e.src].out_degree;
    ++nodes_[e.dst].in_degree;
  }
  build_csr(n, edges_, true, in_offsets_, in_list_);
  build_csr(n, edges_, false, out_offsets_, out_list_);
}

std::span<const NodeIndex> DesignGraph::in_neighbors(NodeIndex v) const {
  return std::span<const NodeIndex>(in_list_).subspan(in_offsets_.at(v),
                                                      in_offsets_.at(v + 1) - in_offsets_[v]);
}

std::span<const NodeIndex> DesignGraph::out_neighbors(NodeIndex v) const {
  return std::span<const NodeIndex>(out_list_).subspan(out_offsets_.at(v),
                                                       out_offsets_.at(v + 1) - out_offsets_[v]);
}

std::optional<std::vector<NodeIndex>> DesignGraph::topological_order() const {
  const std::size_t n = nodes_.size();
  std::vector<std::uint32_t> pending(n);
  std::vector<NodeIndex> order;
  order.reserve(n);
  for (NodeIndex v = 0; v < n; ++v) {
    pending[v] = nodes_[v].in_degree;
    if (pending[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (NodeIndex w : out_neighbors(order[head])) {
      if (--pending[w] == 0) order.push_back(w);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

DesignGraph DesignGraph::permuted(std::span<const NodeIndex> perm) const {
  const std::size_t n = nodes_.size();
  if (perm.size() != n) throw ContractViolation("permutation size does not match node count");
  std::vector<bool> seen(n, false);
  std::vector<Node> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || seen[perm[i]]) throw ContractViolation("not a permutation");
    seen[perm[i]] = true;
    nodes[perm[i]] = nodes_[i];
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const Edge& e : edges_) edges.push_back({perm[e.src], perm[e.dst]});
  return DesignGraph(name_, source_, std::move(nodes), std::move(edges));
}

GraphStats graph_stats(const DesignGraph& graph) {
  GraphStats stats;
  stats.node_count = graph.node_count();
  stats.edge_count = graph.edge_count();
  for (const Node& node : graph.nodes()) {
    ++stats.kind_counts[static_cast<std::size_t>(node.kind)];
    stats.max_fanout = std::max<std::size_t>(stats.max_fanout, node.out_degree);
  }
  auto order = graph.topological_order();
  if (!order) return stats;
  std::vector<std::size_t> level(graph.node_count(), 0);
  std::size_t depth = 0;
  for (NodeIndex v : *order) {
    for (NodeIndex w : graph.out_neighbors(v)) {
      level[w] = std::max(level[w], level[v] + 1);
      depth = std::max(depth, level[w]);
    }
  }
  stats.depth = depth;
  return stats;
}

}  // namespace edaplan::graph
