#include "edaplan/graph/netlist.hpp"

#include <unordered_map>

#include <json.hpp>

#include "edaplan/errors.hpp"

namespace edaplan::graph {

namespace {

using json = nlohmann::json;

enum class Entity { InPort, OutPort, Cell };

std::unordered_map<std::string, Entity> index_entities(const Netlist& netlist) {
  std::unordered_map<std::string, Entity> entities;
  for (std::size_t i = 0; i < netlist.ports.size(); ++i) {
    const Port& port = netlist.ports[i];
    if (port.id.empty()) throw ValidationError("ports[" + std::to_string(i) + "]: empty id");
    const Entity kind = port.direction == PortDirection::In ? Entity::InPort : Entity::OutPort;
    if (!entities.emplace(port.id, kind).second) {
      throw ValidationError("ports[" + std::to_string(i) + "]: duplicate id '" + port.id + "'");
    }
  }
  for (std::size_t i = 0; i < netlist.cells.size(); ++i) {
    const CellInstance& cell = netlist.cells[i];
    if (cell.id.empty()) throw ValidationError("cells[" + std::to_string(i) + "]: empty id");
    if (!entities.emplace(cell.id, Entity::Cell).second) {
      throw ValidationError("cells[" + std::to_string(i) + "]: duplicate id '" + cell.id + "'");
    }
  }
  return entities;
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing \"" + key + "\"");
  if (!it->is_string()) throw ValidationError(where + ": \"" + key + "\" must be a string");
  return it->get<std::string>();
}

const json& get_array(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing \"" + key + "\"");
  if (!it->is_array()) throw ValidationError(where + ": \"" + key + "\" must be an array");
  return *it;
}

}  // namespace

void validate(const Netlist& netlist) {
  const auto entities = index_entities(netlist);
  for (std::size_t i = 0; i < netlist.nets.size(); ++i) {
    const Net& net = netlist.nets[i];
    const std::string where = "nets[" + std::to_string(i) + "]";
    auto driver = entities.find(net.driver);
    if (driver == entities.end()) {
      throw ValidationError(where + ": driver '" + net.driver + "' is not a declared cell or port");
    }
    if (driver->second == Entity::OutPort) {
      throw ValidationError(where + ": output port '" + net.driver + "' cannot drive a net");
    }
    for (std::size_t k = 0; k < net.sinks.size(); ++k) {
      const std::string& sink = net.sinks[k];
      auto it = entities.find(sink);
      if (it == entities.end()) {
        throw ValidationError(where + ".sinks[" + std::to_string(k) + "]: '" + sink +
                              "' is not a declared cell or port");
      }
      if (it->second == Entity::InPort) {
        throw ValidationError(where + ".sinks[" + std::to_string(k) + "]: input port '" + sink +
                              "' cannot be a sink");
      }
      if (sink == net.driver) {
        throw ValidationError(where + ": '" + sink + "' drives itself");
      }
    }
  }
}

Netlist parse_netlist_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("netlist JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("netlist JSON: top level must be an object");

  Netlist netlist;
  netlist.name = get_string(doc, "name", "netlist");
  const json& cells = get_array(doc, "cells", "netlist");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string where = "cells[" + std::to_string(i) + "]";
    if (!cells[i].is_object()) throw ValidationError(where + ": must be an object");
    netlist.cells.push_back({get_string(cells[i], "id", where), get_string(cells[i], "type", where)});
  }
  const json& ports = get_array(doc, "ports", "netlist");
  for (std::size_t i = 0; i < ports.size(); ++i) {
    const std::string where = "ports[" + std::to_string(i) + "]";
    if (!ports[i].is_object()) throw ValidationError(where + ": must be an object");
    const std::string dir = get_string(ports[i], "dir", where);
    PortDirection direction;
    if (dir == "in") {
      direction = PortDirection::In;
    } else if (dir == "out") {
      direction = PortDirection::Out;
    } else {
      throw ValidationError(where + ": \"dir\" must be \"in\" or \"out\", got \"" + dir + "\"");
    }
    netlist.ports.push_back({get_string(ports[i], "id", where), direction});
  }
  const json& nets = get_array(doc, "nets", "netlist");
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const std::string where = "nets[" + std::to_string(i) + "]";
    if (!nets[i].is_object()) throw ValidationError(where + ": must be an object");
    auto driver = nets[i].find("driver");
    if (driver == nets[i].end() || driver->is_null()) {
      throw ValidationError(where + ": net has no driver (exactly one required)");
    }
    if (driver->is_array()) {
      throw ValidationError(where + ": net has " + std::to_string(driver->size()) +
                            " drivers (exactly one required)");
    }
    Net net;
    net.driver = get_string(nets[i], "driver", where);
    const json& sinks = get_array(nets[i], "sinks", where);
    for (std::size_t k = 0; k < sinks.size(); ++k) {
      if (!sinks[k].is_string()) {
        throw ValidationError(where + ".sinks[" + std::to_string(k) + "]: must be a string");
      }
      net.sinks.push_back(sinks[k].get<std::string>());
    }
    netlist.nets.push_back(std::move(net));
  }
  validate(netlist);
  return netlist;
}

std::string serialize_netlist_json(const Netlist& netlist) {
  json doc;
  doc["name"] = netlist.name;
  doc["cells"] = json::array();
  for (const auto& cell : netlist.cells) doc["cells"].push_back({{"id", cell.id}, {"type", cell.type}});
  doc["ports"] = json::array();
  for (const auto& port : netlist.ports) {
    doc["ports"].push_back({{"id", port.id}, {"dir", port.direction == PortDirection::In ? "in" : "out"}});
  }
  doc["nets"] = json::array();
  for (const auto& net : netlist.nets) doc["nets"].push_back({{"driver", net.driver}, {"sinks", net.sinks}});
  return doc.dump(2) + "\n";
}

DesignGraph star_expand(const Netlist& netlist) {
  validate(netlist);
  std::vector<Node> nodes;
  nodes.reserve(netlist.ports.size() + netlist.cells.size());
  std::unordered_map<std::string, NodeIndex> index;
  for (const Port& port : netlist.ports) {
    index.emplace(port.id, static_cast<NodeIndex>(nodes.size()));
    nodes.push_back({port.id, port.direction == PortDirection::In ? NodeKind::PrimaryInput
                                                                  : NodeKind::PrimaryOutput});
  }
  for (const CellInstance& cell : netlist.cells) {
    index.emplace(cell.id, static_cast<NodeIndex>(nodes.size()));
    nodes.push_back({cell.id, NodeKind::Cell});
  }
  std::vector<Edge> edges;
  for (const Net& net : netlist.nets) {
    const NodeIndex src = index.at(net.driver);
    for (const std::string& sink : net.sinks) edges.push_back({src, index.at(sink)});
  }
  return DesignGraph(netlist.name, SourceKind::Netlist, std::move(nodes), std::move(edges));
}

}  // namespace edaplan::graph
