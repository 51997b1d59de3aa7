#include "edaplan/synth/generator.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <unordered_set>
#include <vector>

#include "edaplan/gcn/model.hpp"

namespace edaplan::synth {

namespace {

using gcn::SplitMix64;

std::size_t draw_nodes(SplitMix64& rng, SizeClass size) {
  const SizeRange r = size_range(size);
  return r.min_nodes + static_cast<std::size_t>(rng.below(r.max_nodes - r.min_nodes + 1));
}

// Index in [0, count): recent entries with probability `locality`, else uniform.
std::size_t pick_driver(SplitMix64& rng, std::size_t count, const GeneratorOptions& options) {
  if (count > options.window && rng.uniform() < options.locality) {
    return count - 1 - static_cast<std::size_t>(rng.below(options.window));
  }
  return static_cast<std::size_t>(rng.below(count));
}

}  // namespace

std::string_view to_string(SizeClass size) noexcept {
  switch (size) {
    case SizeClass::Small: return "small";
    case SizeClass::Medium: return "medium";
    case SizeClass::Large: return "large";
  }
  return "small";
}

std::optional<SizeClass> parse_size_class(std::string_view text) noexcept {
  if (text == "small") return SizeClass::Small;
  if (text == "medium") return SizeClass::Medium;
  if (text == "large") return SizeClass::Large;
  return std::nullopt;
}

SizeRange size_range(SizeClass size) noexcept {
  switch (size) {
    case SizeClass::Small: return {40, 160};
    case SizeClass::Medium: return {500, 2000};
    case SizeClass::Large: return {8000, 12000};
  }
  return {40, 160};
}

SizeClass classify_size(std::size_t node_count) noexcept {
  if (node_count < 316) return SizeClass::Small;
  if (node_count < 3162) return SizeClass::Medium;
  return SizeClass::Large;
}

std::string design_name(std::string_view prefix, std::uint64_t seed) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(seed));
  return std::string(prefix) + "_" + hex;
}

graph::Aiger gen_aig(std::uint64_t seed, SizeClass size, const GeneratorOptions& options) {
  SplitMix64 rng(seed);
  const std::size_t target = draw_nodes(rng, size);
  const std::size_t num_inputs = std::max<std::size_t>(2, target / 10);
  const std::size_t num_outputs = std::max<std::size_t>(1, target * 8 / 100);

  graph::Aiger aig;
  for (std::size_t i = 0; i < num_inputs; ++i) aig.inputs.push_back(static_cast<std::uint32_t>(2 * (i + 1)));
  std::vector<std::uint32_t> vars;  // defined variables in creation order
  for (std::size_t i = 0; i < num_inputs; ++i) vars.push_back(static_cast<std::uint32_t>(i + 1));

  std::unordered_set<std::uint32_t> complemented;
  auto literal = [&](std::uint32_t var) {
    std::uint32_t lit = 2 * var;
    if (rng.uniform() < options.complement_probability) {
      lit |= 1u;
      complemented.insert(lit);
    }
    return lit;
  };

  // Every AND adds one node plus any new inverters; outputs are added last.
  while (num_inputs + aig.ands.size() + num_outputs + complemented.size() < target) {
    const std::size_t a = pick_driver(rng, vars.size(), options);
    std::size_t b = pick_driver(rng, vars.size(), options);
    if (b == a) b = (a + 1 + static_cast<std::size_t>(rng.below(vars.size() - 1))) % vars.size();
    const auto var = static_cast<std::uint32_t>(vars.size() + 1);
    aig.ands.push_back({2 * var, literal(vars[a]), literal(vars[b])});
    vars.push_back(var);
  }
  // Outputs favor the most recent gates so most of the logic is observable.
  for (std::size_t o = 0; o < num_outputs; ++o) {
    const std::size_t idx = vars.size() - 1 - static_cast<std::size_t>(rng.below(std::min(vars.size(), num_outputs * 2)));
    aig.outputs.push_back(literal(vars[idx]));
  }
  aig.max_var = static_cast<std::uint32_t>(vars.size());
  aig.input_names.assign(num_inputs, "");
  aig.output_names.assign(num_outputs, "");
  return aig;
}

graph::Netlist gen_netlist(std::uint64_t seed, SizeClass size, const GeneratorOptions& options) {
  static constexpr std::array<std::string_view, 3> kOneInput{"INV_X1", "BUF_X1", "DFF_X1"};
  static constexpr std::array<std::string_view, 3> kTwoInput{"NAND2_X1", "NOR2_X1", "XOR2_X1"};
  static constexpr std::array<std::string_view, 3> kThreeInput{"AOI21_X1", "OAI21_X1", "MUX2_X1"};

  SplitMix64 rng(seed);
  const std::size_t target = draw_nodes(rng, size);
  const std::size_t num_inputs = std::max<std::size_t>(1, target / 10);
  const std::size_t num_outputs = std::max<std::size_t>(1, target * 6 / 100);
  const std::size_t num_cells = target - num_inputs - num_outputs;

  graph::Netlist nl;
  nl.name = design_name("net", seed);
  std::vector<std::string> drivers;
  std::vector<std::vector<std::string>> sinks;
  for (std::size_t i = 0; i < num_inputs; ++i) {
    nl.ports.push_back({"in" + std::to_string(i), graph::PortDirection::In});
    drivers.push_back(nl.ports.back().id);
    sinks.emplace_back();
  }
  const std::size_t max_fanin = std::max<std::size_t>(1, options.max_cell_fanin);
  for (std::size_t c = 0; c < num_cells; ++c) {
    const std::size_t fanin = 1 + static_cast<std::size_t>(rng.below(std::min(max_fanin, drivers.size())));
    const std::string id = "u" + std::to_string(c);
    const auto& types = fanin == 1 ? kOneInput : fanin == 2 ? kTwoInput : kThreeInput;
    nl.cells.push_back({id, std::string(types[rng.below(types.size())])});
    std::vector<std::size_t> chosen;
    while (chosen.size() < fanin) {
      const std::size_t d = pick_driver(rng, drivers.size(), options);
      if (std::find(chosen.begin(), chosen.end(), d) == chosen.end()) chosen.push_back(d);
    }
    for (std::size_t d : chosen) sinks[d].push_back(id);
    drivers.push_back(id);
    sinks.emplace_back();
  }
  for (std::size_t o = 0; o < num_outputs; ++o) {
    const std::string id = "out" + std::to_string(o);
    nl.ports.push_back({id, graph::PortDirection::Out});
    const std::size_t d = drivers.size() - 1 - static_cast<std::size_t>(rng.below(std::min(drivers.size(), num_outputs * 2)));
    sinks[d].push_back(id);
  }
  for (std::size_t d = 0; d < drivers.size(); ++d) nl.nets.push_back({drivers[d], std::move(sinks[d])});
  return nl;
}

graph::DesignGraph gen_graph(std::uint64_t seed, SizeClass size, graph::SourceKind kind,
                             const GeneratorOptions& options) {
  if (kind == graph::SourceKind::Aig) return graph::aiger_to_graph(gen_aig(seed, size, options), design_name("aig", seed));
  return graph::star_expand(gen_netlist(seed, size, options));
}

}  // namespace edaplan::synth
