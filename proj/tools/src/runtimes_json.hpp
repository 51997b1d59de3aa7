#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edaplan/mckp/instance.hpp"
#include "edaplan/pricing/pricing.hpp"
#include "edaplan/runtime_estimate.hpp"
#include "edaplan/stage.hpp"

namespace edaplan::cli {

/// Literal runtimes (and optionally literal costs) for the optimizer:
/// {"source": "...", "stages": [{"stage": "synthesis",
///   "runtimes": {"1": 6100, "2": 4342, "4": 3449, "8": 3352},
///   "costs": {"1": 0.16, "2": 0.15, "4": 0.19, "8": 0.37}}, ...]}
struct StageRuntimes {
  Stage stage = Stage::Synthesis;
  RuntimeEstimate runtimes;
  std::optional<std::array<double, 4>> costs;
};

struct RuntimesFile {
  std::string source;
  std::vector<StageRuntimes> stages;  // canonical stage order
};

/// Throws ValidationError naming the offending element.
RuntimesFile parse_runtimes_json(std::string_view text);
RuntimesFile load_runtimes_json(const std::filesystem::path& path);

/// Literal costs where present, otherwise priced from `pricing` (ConfigError if
/// a stage needs prices and none were given).
mckp::MckpInstance instance_from_runtimes(const RuntimesFile& file, const pricing::PricingTable* pricing,
                                          std::int64_t deadline);

}  // namespace edaplan::cli
