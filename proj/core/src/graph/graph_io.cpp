#include "edaplan/graph/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "edaplan/errors.hpp"
#include "edaplan/graph/aiger.hpp"
#include "edaplan/graph/netlist.hpp"

namespace edaplan::graph {

namespace {

constexpr std::string_view kMagic = "edaplan-graph 1";

std::string escape(std::string_view id) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(id.size());
  for (unsigned char c : id) {
    if (c <= 0x20 || c == '%' || c == 0x7f) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string unescape(std::string_view text, std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out += text[i];
      continue;
    }
    unsigned value = 0;
    if (i + 2 >= text.size()) {
      throw ParseError("truncated escape sequence", line);
    }
    auto [ptr, ec] = std::from_chars(text.data() + i + 1, text.data() + i + 3, value, 16);
    if (ec != std::errc() || ptr != text.data() + i + 3) throw ParseError("bad escape sequence", line);
    out += static_cast<char>(value);
    i += 2;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next() {
    if (pos_ > text_.size()) throw ParseError("unexpected end of graph dump", line_ + 1);
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++line_;
    return line;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::uint64_t parse_count(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw ParseError("expected unsigned integer, got '" + std::string(token) + "'", line);
  }
  return value;
}

std::string_view after_keyword(std::string_view line, std::string_view keyword, std::size_t line_no) {
  if (!line.starts_with(keyword) || line.size() < keyword.size() + 1 || line[keyword.size()] != ' ') {
    throw ParseError("expected '" + std::string(keyword) + " <value>'", line_no);
  }
  return line.substr(keyword.size() + 1);
}

std::string extension_of(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

}  // namespace

std::string dump_graph(const DesignGraph& graph) {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "name " << escape(graph.name()) << '\n';
  out << "source " << to_string(graph.source_kind()) << '\n';
  out << "nodes " << graph.node_count() << '\n';
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const Node& node = graph.nodes()[i];
    out << i << ' ' << to_string(node.kind) << ' ' << escape(node.id) << '\n';
  }
  out << "edges " << graph.edge_count() << '\n';
  for (const Edge& e : graph.edges()) out << e.src << ' ' << e.dst << '\n';
  return out.str();
}

DesignGraph parse_graph_dump(std::string_view text) {
  LineReader reader(text);
  if (reader.next() != kMagic) throw ParseError("not an edaplan graph dump (bad magic line)", 1);
  std::string name = unescape(after_keyword(reader.next(), "name", reader.line()), reader.line());
  const auto source = parse_source_kind(after_keyword(reader.next(), "source", reader.line()));
  if (!source) throw ParseError("unknown source kind", reader.line());
  const std::uint64_t node_count = parse_count(after_keyword(reader.next(), "nodes", reader.line()), reader.line());

  std::vector<Node> nodes;
  nodes.reserve(node_count);
  for (std::uint64_t i = 0; i < node_count; ++i) {
    std::string_view line = reader.next();
    const std::size_t a = line.find(' ');
    const std::size_t b = a == std::string_view::npos ? a : line.find(' ', a + 1);
    if (b == std::string_view::npos) throw ParseError("expected '<index> <kind> <id>'", reader.line());
    if (parse_count(line.substr(0, a), reader.line()) != i) {
      throw ParseError("node rows must be listed in index order", reader.line());
    }
    const auto kind = parse_node_kind(line.substr(a + 1, b - a - 1));
    if (!kind) throw ParseError("unknown node kind", reader.line());
    nodes.push_back({unescape(line.substr(b + 1), reader.line()), *kind});
  }
  const std::uint64_t edge_count = parse_count(after_keyword(reader.next(), "edges", reader.line()), reader.line());
  std::vector<Edge> edges;
  edges.reserve(edge_count);
  for (std::uint64_t k = 0; k < edge_count; ++k) {
    std::string_view line = reader.next();
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos) throw ParseError("expected '<src> <dst>'", reader.line());
    const auto src = parse_count(line.substr(0, space), reader.line());
    const auto dst = parse_count(line.substr(space + 1), reader.line());
    if (src >= node_count || dst >= node_count) throw ParseError("edge endpoint out of range", reader.line());
    edges.push_back({static_cast<NodeIndex>(src), static_cast<NodeIndex>(dst)});
  }
  try {
    return DesignGraph(std::move(name), *source, std::move(nodes), std::move(edges));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), reader.line());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DesignGraph load_design(const std::filesystem::path& path, const VerilogOptions& options) {
  const std::string ext = extension_of(path);
  const std::string text = read_text_file(path);
  const std::string stem = path.stem().string();
  if (ext == ".aag") return parse_aiger(text, stem);
  if (ext == ".json") return star_expand(parse_netlist_json(text));
  if (ext == ".v") return star_expand(parse_verilog_subset(text, options));
  if (ext == ".graph") return parse_graph_dump(text);
  throw ConfigError("unrecognized design extension '" + ext + "' (expected .aag, .json, .v or .graph)");
}

std::string format_stats(const GraphStats& stats) {
  std::ostringstream out;
  out << "nodes: " << stats.node_count << '\n';
  out << "edges: " << stats.edge_count << '\n';
  for (std::size_t k = 0; k < kNodeKindCount; ++k) {
    out << "  " << to_string(static_cast<NodeKind>(k)) << ": " << stats.kind_counts[k] << '\n';
  }
  out << "max_fanout: " << stats.max_fanout << '\n';
  out << "depth: " << (stats.depth ? std::to_string(*stats.depth) : std::string("cyclic")) << '\n';
  return out.str();
}

}  // namespace edaplan::graph
