#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "edaplan/graph/netlist.hpp"

namespace edaplan::graph {

struct VerilogOptions {
  /// Pin names that mark a cell output. The first connection of an instance whose
  /// pin is in this list drives its net; every other connection is a sink.
  std::vector<std::string> driver_pins{"Y", "Z", "Q", "out"};
};

/// Parses one structural gate-level module: input/output/wire declarations and
/// cell instances with named single-bit connections. Anything else (buses,
/// assign/always blocks, parameters, a second module) raises UnsupportedConstruct
/// with its line and column.
Netlist parse_verilog_subset(std::string_view text, const VerilogOptions& options = {});

}  // namespace edaplan::graph
