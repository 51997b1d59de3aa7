#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "edaplan/gcn/model.hpp"

namespace edaplan::gcn {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Versioned little-endian binary container; layout in docs/model-format.md.
std::string serialize_model(const GcnModel& model);
/// Throws LoadError for truncated or corrupt bytes, VersionError for unknown versions.
GcnModel deserialize_model(std::string_view bytes);

void save_model(const GcnModel& model, const std::filesystem::path& path);
GcnModel load_model(const std::filesystem::path& path);

}  // namespace edaplan::gcn
