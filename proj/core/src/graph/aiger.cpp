#include "edaplan/graph/aiger.hpp"

#include <charconv>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "edaplan/errors.hpp"

namespace edaplan::graph {

namespace {

// Line numbers follow the file layout: header, inputs, outputs, and-gates.
std::size_t input_line(const Aiger&, std::size_t k) { return 2 + k; }
std::size_t output_line(const Aiger& aig, std::size_t k) { return 2 + aig.inputs.size() + k; }
std::size_t and_line(const Aiger& aig, std::size_t k) {
  return 2 + aig.inputs.size() + aig.outputs.size() + k;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint32_t to_uint(std::string_view token, std::size_t line) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("expected unsigned integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

enum class VarDef : std::uint8_t { Undefined, Input, Gate };

struct VarTable {
  std::vector<VarDef> defs;
  std::vector<std::size_t> gate_of;  // var -> and index
};

VarTable validate(const Aiger& aig) {
  const std::uint64_t max_lit = 2ull * aig.max_var + 1;
  if (aig.max_var < aig.inputs.size() + aig.ands.size()) {
    throw ParseError("header M=" + std::to_string(aig.max_var) + " is smaller than I + L + A", 1);
  }
  VarTable table;
  table.defs.assign(aig.max_var + 1, VarDef::Undefined);
  table.gate_of.assign(aig.max_var + 1, 0);

  for (std::size_t k = 0; k < aig.inputs.size(); ++k) {
    const std::uint32_t lit = aig.inputs[k];
    if (lit > max_lit) throw ParseError("literal " + std::to_string(lit) + " out of range", input_line(aig, k));
    if (lit < 2 || (lit & 1u)) {
      throw ParseError("input literal must be even and non-constant", input_line(aig, k));
    }
    if (table.defs[lit / 2] != VarDef::Undefined) {
      throw ParseError("variable " + std::to_string(lit / 2) + " defined twice", input_line(aig, k));
    }
    table.defs[lit / 2] = VarDef::Input;
  }
  for (std::size_t k = 0; k < aig.ands.size(); ++k) {
    const auto& g = aig.ands[k];
    for (std::uint32_t lit : {g.lhs, g.rhs0, g.rhs1}) {
      if (lit > max_lit) {
        throw ParseError("literal " + std::to_string(lit) + " out of range [0, " +
                             std::to_string(max_lit) + "]",
                         and_line(aig, k));
      }
    }
    if (g.lhs < 2 || (g.lhs & 1u)) {
      throw ParseError("and-gate output literal must be even and non-constant", and_line(aig, k));
    }
    if (table.defs[g.lhs / 2] != VarDef::Undefined) {
      throw ParseError("variable " + std::to_string(g.lhs / 2) + " defined twice", and_line(aig, k));
    }
    table.defs[g.lhs / 2] = VarDef::Gate;
    table.gate_of[g.lhs / 2] = k;
  }
  for (std::size_t k = 0; k < aig.outputs.size(); ++k) {
    const std::uint32_t lit = aig.outputs[k];
    if (lit > max_lit) {
      throw ParseError("literal " + std::to_string(lit) + " out of range [0, " + std::to_string(max_lit) + "]",
                       output_line(aig, k));
    }
  }

  auto check_ref = [&](std::uint32_t lit, std::size_t line) {
    const std::uint32_t var = lit / 2;
    if (var != 0 && table.defs[var] == VarDef::Undefined) {
      throw ParseError("literal " + std::to_string(lit) + " references undefined variable " +
                           std::to_string(var),
                       line);
    }
  };
  for (std::size_t k = 0; k < aig.ands.size(); ++k) {
    check_ref(aig.ands[k].rhs0, and_line(aig, k));
    check_ref(aig.ands[k].rhs1, and_line(aig, k));
  }
  for (std::size_t k = 0; k < aig.outputs.size(); ++k) check_ref(aig.outputs[k], output_line(aig, k));

  // Cycle check over gate definitions (ASCII AIGER does not require topological order).
  enum class Mark : std::uint8_t { White, Grey, Black };
  std::vector<Mark> mark(aig.ands.size(), Mark::White);
  std::vector<std::pair<std::size_t, int>> stack;
  for (std::size_t root = 0; root < aig.ands.size(); ++root) {
    if (mark[root] != Mark::White) continue;
    stack.push_back({root, 0});
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [gate, next] = stack.back();
      if (next == 2) {
        mark[gate] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const std::uint32_t lit = next == 0 ? aig.ands[gate].rhs0 : aig.ands[gate].rhs1;
      ++next;
      const std::uint32_t var = lit / 2;
      if (table.defs[var] != VarDef::Gate) continue;
      const std::size_t child = table.gate_of[var];
      if (mark[child] == Mark::Grey) {
        throw ParseError("cyclic definition through variable " + std::to_string(var),
                         and_line(aig, child));
      }
      if (mark[child] == Mark::White) {
        mark[child] = Mark::Grey;
        stack.push_back({child, 0});
      }
    }
  }
  return table;
}

}  // namespace

Aiger read_aiger(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }
  if (lines.empty() || split_ws(lines[0]).empty()) throw ParseError("missing 'aag' header", 1);
  auto header = split_ws(lines[0]);
  if (header[0] == "aig") throw ParseError("binary AIGER is not supported; convert to ASCII 'aag'", 1);
  if (header[0] != "aag") throw ParseError("expected 'aag' header, got '" + std::string(header[0]) + "'", 1);
  if (header.size() != 6) {
    throw ParseError("header must be 'aag M I L O A' (AIGER 1.9 extensions are not supported)", 1);
  }
  Aiger aig;
  aig.max_var = to_uint(header[1], 1);
  const std::uint32_t num_inputs = to_uint(header[2], 1);
  const std::uint32_t num_latches = to_uint(header[3], 1);
  const std::uint32_t num_outputs = to_uint(header[4], 1);
  const std::uint32_t num_ands = to_uint(header[5], 1);
  if (num_latches != 0) throw ParseError("latches are not supported (combinational AIGs only)", 1);

  std::size_t cursor = 1;
  auto next_tokens = [&](std::size_t expected, const char* what) {
    if (cursor >= lines.size()) {
      throw ParseError(std::string("unexpected end of file while reading ") + what, cursor + 1);
    }
    auto tokens = split_ws(lines[cursor]);
    ++cursor;
    if (tokens.size() != expected) {
      throw ParseError(std::string("malformed ") + what + " line", cursor);
    }
    return tokens;
  };
  for (std::uint32_t k = 0; k < num_inputs; ++k) {
    auto tokens = next_tokens(1, "input");
    aig.inputs.push_back(to_uint(tokens[0], cursor));
  }
  for (std::uint32_t k = 0; k < num_outputs; ++k) {
    auto tokens = next_tokens(1, "output");
    aig.outputs.push_back(to_uint(tokens[0], cursor));
  }
  for (std::uint32_t k = 0; k < num_ands; ++k) {
    auto tokens = next_tokens(3, "and-gate");
    aig.ands.push_back({to_uint(tokens[0], cursor), to_uint(tokens[1], cursor), to_uint(tokens[2], cursor)});
  }

  // Optional symbol table, then optional comment section.
  aig.input_names.assign(num_inputs, "");
  aig.output_names.assign(num_outputs, "");
  for (; cursor < lines.size(); ++cursor) {
    std::string_view line = lines[cursor];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line == "c" || line.starts_with("c ")) break;
    const char tag = line[0];
    const std::size_t space = line.find(' ');
    if ((tag != 'i' && tag != 'o' && tag != 'l') || space == std::string_view::npos || space == 1) {
      throw ParseError("unexpected content after and-gates: '" + std::string(line) + "'", cursor + 1);
    }
    const std::uint32_t pos = to_uint(line.substr(1, space - 1), cursor + 1);
    std::string name(line.substr(space + 1));
    if (tag == 'l') throw ParseError("latch symbol in combinational AIG", cursor + 1);
    auto& names = tag == 'i' ? aig.input_names : aig.output_names;
    if (pos >= names.size()) throw ParseError("symbol index out of range", cursor + 1);
    names[pos] = std::move(name);
  }
  validate(aig);
  return aig;
}

std::string write_aiger(const Aiger& aig) {
  std::ostringstream out;
  out << "aag " << aig.max_var << ' ' << aig.inputs.size() << " 0 " << aig.outputs.size() << ' '
      << aig.ands.size() << '\n';
  for (auto lit : aig.inputs) out << lit << '\n';
  for (auto lit : aig.outputs) out << lit << '\n';
  for (const auto& g : aig.ands) out << g.lhs << ' ' << g.rhs0 << ' ' << g.rhs1 << '\n';
  for (std::size_t k = 0; k < aig.input_names.size(); ++k) {
    if (!aig.input_names[k].empty()) out << 'i' << k << ' ' << aig.input_names[k] << '\n';
  }
  for (std::size_t k = 0; k < aig.output_names.size(); ++k) {
    if (!aig.output_names[k].empty()) out << 'o' << k << ' ' << aig.output_names[k] << '\n';
  }
  return out.str();
}

DesignGraph aiger_to_graph(const Aiger& aig, std::string name) {
  validate(aig);

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  // var -> node index of its driver
  std::vector<NodeIndex> driver(aig.max_var + 1, 0);

  auto symbol = [](const std::vector<std::string>& names, std::size_t k, char prefix) {
    if (k < names.size() && !names[k].empty()) return names[k];
    return std::string(1, prefix) + std::to_string(k);
  };

  for (std::size_t k = 0; k < aig.inputs.size(); ++k) {
    driver[aig.inputs[k] / 2] = static_cast<NodeIndex>(nodes.size());
    nodes.push_back({symbol(aig.input_names, k, 'i'), NodeKind::PrimaryInput});
  }
  bool uses_constant = false;
  for (const auto& g : aig.ands) uses_constant |= g.rhs0 < 2 || g.rhs1 < 2;
  for (auto lit : aig.outputs) uses_constant |= lit < 2;
  if (uses_constant) {
    driver[0] = static_cast<NodeIndex>(nodes.size());
    nodes.push_back({"const0", NodeKind::Constant});
  }
  for (const auto& g : aig.ands) {
    driver[g.lhs / 2] = static_cast<NodeIndex>(nodes.size());
    nodes.push_back({"g" + std::to_string(g.lhs / 2), NodeKind::AndGate});
  }
  const std::size_t first_output = nodes.size();
  for (std::size_t k = 0; k < aig.outputs.size(); ++k) {
    nodes.push_back({symbol(aig.output_names, k, 'o'), NodeKind::PrimaryOutput});
  }

  std::unordered_map<std::uint32_t, NodeIndex> inverter_of;
  auto connect = [&](std::uint32_t lit, NodeIndex sink) {
    const NodeIndex src = driver[lit / 2];
    if ((lit & 1u) == 0) {
      edges.push_back({src, sink});
      return;
    }
    auto it = inverter_of.find(lit);
    if (it == inverter_of.end()) {
      const auto inv = static_cast<NodeIndex>(nodes.size());
      nodes.push_back({"not_" + nodes[src].id, NodeKind::Inverter});
      edges.push_back({src, inv});
      it = inverter_of.emplace(lit, inv).first;
    }
    edges.push_back({it->second, sink});
  };
  for (const auto& g : aig.ands) {
    const NodeIndex gate = driver[g.lhs / 2];
    connect(g.rhs0, gate);
    connect(g.rhs1, gate);
  }
  for (std::size_t k = 0; k < aig.outputs.size(); ++k) {
    connect(aig.outputs[k], static_cast<NodeIndex>(first_output + k));
  }
  return DesignGraph(std::move(name), SourceKind::Aig, std::move(nodes), std::move(edges));
}

DesignGraph parse_aiger(std::string_view text, std::string name) {
  return aiger_to_graph(read_aiger(text), std::move(name));
}

}  // namespace edaplan::graph
