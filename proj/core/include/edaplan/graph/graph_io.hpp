#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "edaplan/graph/design_graph.hpp"
#include "edaplan/graph/verilog.hpp"

namespace edaplan::graph {

/// Canonical text dump: a header, a node table in index order, then the edge
/// list in stored order. Identical graphs produce identical bytes.
///
///   edaplan-graph 1
///   name <id>
///   source aig|netlist
///   nodes <N>
///   <index> <kind> <id>
///   edges <E>
///   <src> <dst>
///
/// Ids are percent-escaped for whitespace, control characters and '%'.
std::string dump_graph(const DesignGraph& graph);
DesignGraph parse_graph_dump(std::string_view text);

/// Whole-file read; throws LoadError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Loads a design by extension: .aag (AIGER), .json (netlist), .v (Verilog
/// subset), .graph (canonical dump). Netlists are star-expanded.
DesignGraph load_design(const std::filesystem::path& path, const VerilogOptions& options = {});

/// Human-readable multi-line summary.
std::string format_stats(const GraphStats& stats);

}  // namespace edaplan::graph
