#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edaplan/stage.hpp"

namespace edaplan::pricing {

enum class VmFamily { GeneralPurpose = 0, MemoryOptimized = 1 };

std::string_view to_string(VmFamily family) noexcept;
std::optional<VmFamily> parse_family(std::string_view text) noexcept;

struct PriceRow {
  VmFamily family = VmFamily::GeneralPurpose;
  int vcpus = 1;
  double price_per_hour = 0.0;

  friend bool operator==(const PriceRow&, const PriceRow&) = default;
};

/// Hourly prices keyed by (family, vCPUs), single currency.
struct PricingTable {
  std::vector<PriceRow> rows;  // in file order
  std::string currency;
  std::string source;  // provenance, from a "# source:" comment line
  /// Non-fatal findings such as a price that drops as vCPUs grow.
  std::vector<std::string> warnings;

  std::optional<double> find(VmFamily family, int vcpus) const;
  /// Throws ConfigError naming the missing (family, vcpus) row.
  double price(VmFamily family, int vcpus) const;
};

/// CSV with header `family,vcpus,price_per_hour,currency`. Lines starting with
/// '#' are comments; "# source: <text>" sets the provenance. Throws
/// ValidationError naming the 1-based row (file line) on bad content.
PricingTable parse_pricing_csv(std::string_view text);
PricingTable load_pricing(const std::filesystem::path& path);
std::string serialize_pricing_csv(const PricingTable& table);

/// Fixed stage-to-family mapping: Synthesis and STA on general-purpose
/// machines, Placement and Routing on memory-optimized ones.
VmFamily recommend_family(Stage stage) noexcept;

/// (runtime_seconds / 3600) * price_per_hour in full precision.
double job_cost(double runtime_seconds, double price_per_hour);

}  // namespace edaplan::pricing
