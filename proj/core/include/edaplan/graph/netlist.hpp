#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "edaplan/graph/design_graph.hpp"

namespace edaplan::graph {

enum class PortDirection { In, Out };

struct CellInstance {
  std::string id;
  std::string type;
  friend bool operator==(const CellInstance&, const CellInstance&) = default;
};

struct Port {
  std::string id;
  PortDirection direction = PortDirection::In;
  friend bool operator==(const Port&, const Port&) = default;
};

/// One driver, any number of sinks (cell or port ids).
struct Net {
  std::string driver;
  std::vector<std::string> sinks;
  friend bool operator==(const Net&, const Net&) = default;
};

struct Netlist {
  std::string name;
  std::vector<CellInstance> cells;
  std::vector<Port> ports;
  std::vector<Net> nets;
  friend bool operator==(const Netlist&, const Netlist&) = default;
};

/// Checks id uniqueness across cells and ports, that every driver and sink is
/// declared, that input ports only drive and output ports only sink, and that
/// no net feeds its own driver. Throws ValidationError naming the element.
void validate(const Netlist& netlist);

/// Reads the netlist JSON exchange format:
/// {"name", "cells":[{"id","type"}], "ports":[{"id","dir":"in"|"out"}],
///  "nets":[{"driver", "sinks":[...]}]}
Netlist parse_netlist_json(std::string_view text);
std::string serialize_netlist_json(const Netlist& netlist);

/// Star model: ports then cells become nodes; a net with driver d and k sinks
/// contributes the k edges d -> sink, in net order then sink order.
DesignGraph star_expand(const Netlist& netlist);

}  // namespace edaplan::graph
