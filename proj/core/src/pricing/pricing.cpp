#include "edaplan/pricing/pricing.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "edaplan/errors.hpp"
#include "edaplan/graph/graph_io.hpp"

namespace edaplan::pricing {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw ValidationError("pricing row " + std::to_string(line) + ": " + message);
}

std::string format_price(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string_view to_string(VmFamily family) noexcept {
  return family == VmFamily::GeneralPurpose ? "GeneralPurpose" : "MemoryOptimized";
}

std::optional<VmFamily> parse_family(std::string_view text) noexcept {
  if (text == "GeneralPurpose" || text == "general-purpose") return VmFamily::GeneralPurpose;
  if (text == "MemoryOptimized" || text == "memory-optimized") return VmFamily::MemoryOptimized;
  return std::nullopt;
}

std::optional<double> PricingTable::find(VmFamily family, int vcpus) const {
  for (const auto& row : rows) {
    if (row.family == family && row.vcpus == vcpus) return row.price_per_hour;
  }
  return std::nullopt;
}

double PricingTable::price(VmFamily family, int vcpus) const {
  if (auto p = find(family, vcpus)) return *p;
  throw ConfigError("pricing table has no row for (" + std::string(to_string(family)) + ", " +
                    std::to_string(vcpus) + " vCPUs)");
}

PricingTable parse_pricing_csv(std::string_view text) {
  PricingTable table;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      if (body.starts_with("source:")) table.source = std::string(trim(body.substr(7)));
      continue;
    }
    const auto fields = split_commas(line);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "family" || fields[1] != "vcpus" || fields[2] != "price_per_hour" ||
          fields[3] != "currency") {
        fail(line_no, "expected header 'family,vcpus,price_per_hour,currency'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) fail(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    PriceRow row;
    const auto family = parse_family(fields[0]);
    if (!family) fail(line_no, "unknown family '" + std::string(fields[0]) + "'");
    row.family = *family;
    {
      const auto f = fields[1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row.vcpus);
      if (ec != std::errc() || ptr != f.data() + f.size()) fail(line_no, "vcpus '" + std::string(f) + "' is not an integer");
      if (!vcpu_index(row.vcpus)) fail(line_no, "vcpus must be one of 1, 2, 4, 8 (got " + std::string(f) + ")");
    }
    {
      const std::string f(fields[2]);
      std::size_t used = 0;
      try {
        row.price_per_hour = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != f.size()) fail(line_no, "price_per_hour '" + f + "' is not a number");
      if (!(row.price_per_hour > 0.0) || !std::isfinite(row.price_per_hour)) {
        fail(line_no, "price_per_hour must be positive (got " + f + ")");
      }
    }
    if (fields[3].empty()) fail(line_no, "currency is empty");
    if (table.currency.empty()) {
      table.currency = std::string(fields[3]);
    } else if (table.currency != fields[3]) {
      fail(line_no, "currency '" + std::string(fields[3]) + "' differs from '" + table.currency +
                        "' (single-currency tables only)");
    }
    if (table.find(row.family, row.vcpus)) {
      fail(line_no, "duplicate row for (" + std::string(to_string(row.family)) + ", " + std::to_string(row.vcpus) + ")");
    }
    table.rows.push_back(row);
  }
  if (!header_seen) throw ValidationError("pricing table is missing the header row");

  for (VmFamily family : {VmFamily::GeneralPurpose, VmFamily::MemoryOptimized}) {
    std::optional<std::pair<int, double>> prev;
    for (int vcpus : kVcpuOptions) {
      const auto p = table.find(family, vcpus);
      if (!p) continue;
      if (prev && *p < prev->second) {
        table.warnings.push_back(std::string(to_string(family)) + ": price at " + std::to_string(vcpus) +
                                 " vCPUs is lower than at " + std::to_string(prev->first));
      }
      prev = std::pair{vcpus, *p};
    }
  }
  return table;
}

PricingTable load_pricing(const std::filesystem::path& path) {
  return parse_pricing_csv(graph::read_text_file(path));
}

std::string serialize_pricing_csv(const PricingTable& table) {
  std::ostringstream out;
  if (!table.source.empty()) out << "# source: " << table.source << '\n';
  out << "family,vcpus,price_per_hour,currency\n";
  for (const auto& row : table.rows) {
    out << to_string(row.family) << ',' << row.vcpus << ',' << format_price(row.price_per_hour) << ','
        << table.currency << '\n';
  }
  return out.str();
}

VmFamily recommend_family(Stage stage) noexcept {
  switch (stage) {
    case Stage::Placement:
    case Stage::Routing:
      return VmFamily::MemoryOptimized;
    default:
      return VmFamily::GeneralPurpose;
  }
}

double job_cost(double runtime_seconds, double price_per_hour) {
  if (!(runtime_seconds > 0.0) || !(price_per_hour > 0.0) || !std::isfinite(runtime_seconds) ||
      !std::isfinite(price_per_hour)) {
    throw ContractViolation("job_cost needs a positive runtime and a positive hourly price");
  }
  return runtime_seconds / 3600.0 * price_per_hour;
}

}  // namespace edaplan::pricing
