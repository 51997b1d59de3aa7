#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edaplan/graph/design_graph.hpp"

namespace edaplan::graph {

/// Combinational ASCII AIGER model (`aag M I 0 O A`). Literals follow the AIGER
/// convention: variable v has literals 2v and 2v+1 (complemented); 0/1 are constants.
struct Aiger {
  struct And {
    std::uint32_t lhs = 0;
    std::uint32_t rhs0 = 0;
    std::uint32_t rhs1 = 0;
    friend bool operator==(const And&, const And&) = default;
  };

  std::uint32_t max_var = 0;
  std::vector<std::uint32_t> inputs;
  std::vector<std::uint32_t> outputs;
  std::vector<And> ands;
  /// Symbol-table names; empty entries fall back to i<k> / o<k>.
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;

  friend bool operator==(const Aiger&, const Aiger&) = default;
};

/// Parses and validates ASCII AIGER text. Errors are ParseError with the offending line.
Aiger read_aiger(std::string_view text);

/// Serializes to `aag` text (with a symbol table when names are present).
std::string write_aiger(const Aiger& aig);

/// Builds the DAG: PrimaryInput/AndGate/PrimaryOutput nodes, one Constant node when
/// literal 0 or 1 is referenced, and one Inverter node per distinct complemented
/// literal. Edges run fan-in -> gate.
DesignGraph aiger_to_graph(const Aiger& aig, std::string name);

/// read_aiger followed by aiger_to_graph.
DesignGraph parse_aiger(std::string_view text, std::string name = "aig");

}  // namespace edaplan::graph
