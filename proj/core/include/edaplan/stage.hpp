#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace edaplan {

/// EDA flow stage; also the application a runtime model is trained for.
enum class Stage { Synthesis = 0, Placement = 1, Routing = 2, Sta = 3 };

inline constexpr std::array<Stage, 4> kAllStages{Stage::Synthesis, Stage::Placement,
                                                 Stage::Routing, Stage::Sta};

/// Machine sizes every runtime estimate is keyed by.
inline constexpr std::array<int, 4> kVcpuOptions{1, 2, 4, 8};

std::string_view to_string(Stage stage) noexcept;
std::optional<Stage> parse_stage(std::string_view text) noexcept;

/// Index of `vcpus` in kVcpuOptions, or nullopt for an unsupported size.
std::optional<std::size_t> vcpu_index(int vcpus) noexcept;

}  // namespace edaplan
