#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "edaplan/graph/aiger.hpp"
#include "edaplan/graph/design_graph.hpp"
#include "edaplan/graph/netlist.hpp"

namespace edaplan::synth {

enum class SizeClass { Small, Medium, Large };

std::string_view to_string(SizeClass size) noexcept;
std::optional<SizeClass> parse_size_class(std::string_view text) noexcept;

/// Inclusive node-count range a generated graph is drawn from.
struct SizeRange {
  std::size_t min_nodes;
  std::size_t max_nodes;
};
SizeRange size_range(SizeClass size) noexcept;

/// Class a graph of `node_count` nodes falls into, using the geometric
/// midpoints between 10^2, 10^3 and 10^4 as boundaries.
SizeClass classify_size(std::size_t node_count) noexcept;

struct GeneratorOptions {
  /// Probability that a fan-in is drawn from the most recent `window` drivers
  /// instead of uniformly; larger values give deeper, more local graphs.
  double locality = 0.7;
  std::size_t window = 16;
  /// AIG only: chance that an operand or output literal is complemented.
  double complement_probability = 0.25;
  /// Netlist only: maximum fan-in per cell (drawn uniformly in [1, max]).
  std::size_t max_cell_fanin = 3;
};

/// Random combinational AIG whose graph has roughly the drawn node count.
graph::Aiger gen_aig(std::uint64_t seed, SizeClass size, const GeneratorOptions& options = {});
/// Random netlist with exactly the drawn number of cells plus ports.
graph::Netlist gen_netlist(std::uint64_t seed, SizeClass size, const GeneratorOptions& options = {});

/// Deterministic per seed; AIG graphs come from gen_aig, netlist graphs from
/// star_expand(gen_netlist(...)).
graph::DesignGraph gen_graph(std::uint64_t seed, SizeClass size, graph::SourceKind kind,
                             const GeneratorOptions& options = {});

/// Name used for a generated design: "<prefix>_<16 hex digits of seed>".
std::string design_name(std::string_view prefix, std::uint64_t seed);

}  // namespace edaplan::synth
