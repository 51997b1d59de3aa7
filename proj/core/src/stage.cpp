#include "edaplan/stage.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace edaplan {

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::Synthesis:
      return "synthesis";
    case Stage::Placement:
      return "placement";
    case Stage::Routing:
      return "routing";
    case Stage::Sta:
      return "sta";
  }
  return "unknown";
}

std::optional<Stage> parse_stage(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Stage s : kAllStages) {
    if (lower == to_string(s)) return s;
  }
  if (lower == "synth") return Stage::Synthesis;
  if (lower == "place") return Stage::Placement;
  if (lower == "route") return Stage::Routing;
  return std::nullopt;
}

std::optional<std::size_t> vcpu_index(int vcpus) noexcept {
  for (std::size_t i = 0; i < kVcpuOptions.size(); ++i) {
    if (kVcpuOptions[i] == vcpus) return i;
  }
  return std::nullopt;
}

}  // namespace edaplan
