#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <optional>
#include <vector>

#include "edaplan/mckp/instance.hpp"

namespace edaplan::mckp {

enum class Objective {
  /// maximize the sum of 1/p_ij
  ReciprocalCost,
  /// maximize the sum of -p_ij, i.e. minimize total cost
  MinTotalCost,
};

std::string_view to_string(Objective objective) noexcept;
std::optional<Objective> parse_objective(std::string_view text) noexcept;

struct DeploymentPlan {
  bool feasible = false;
  std::vector<int> selection;             // chosen vcpus per stage, empty when infeasible
  std::vector<std::size_t> choice_index;  // index into each stage's choices
  std::int64_t total_runtime = 0;
  double total_cost = 0.0;
  double objective_value = -std::numeric_limits<double>::infinity();

  friend bool operator==(const DeploymentPlan&, const DeploymentPlan&) = default;
};

inline constexpr std::int64_t kMaxCapacity = 10'000'000;
inline constexpr std::uint64_t kMaxEnumeration = 1'000'000;
inline constexpr std::uint8_t kNoChoice = 0xFF;

/// z[i][c] = best value of stages 1..i within c seconds (-inf if none fits).
/// The capacity axis is truncated at the sum of the slowest runtimes, beyond
/// which every row is flat.
struct DpTable {
  std::size_t stage_count = 0;
  std::int64_t width = 0;  // number of capacity columns kept (C_eff + 1)
  std::vector<double> value;         // (stage_count + 1) * width
  std::vector<std::uint8_t> choice;  // stage_count * width; kNoChoice when infeasible

  double z(std::size_t i, std::int64_t c) const {
    return value[i * static_cast<std::size_t>(width) + static_cast<std::size_t>(std::min(c, width - 1))];
  }
  std::uint8_t pick(std::size_t stage, std::int64_t c) const {
    return choice[stage * static_cast<std::size_t>(width) + static_cast<std::size_t>(std::min(c, width - 1))];
  }
};

/// Per-choice objective value, computed once so every summation sees the same double.
double choice_value(const Choice& choice, Objective objective);

DpTable build_dp_table(const MckpInstance& instance, Objective objective);

/// Exact optimum by dynamic programming. Ties keep the lower-vCPU choice
/// (strict improvement while scanning choices in ascending vCPU order).
DeploymentPlan solve_dp(const MckpInstance& instance, Objective objective = Objective::ReciprocalCost);

/// Exhaustive enumeration with the same tie-break; ConfigError above kMaxEnumeration assignments.
DeploymentPlan brute_force_oracle(const MckpInstance& instance, Objective objective = Objective::ReciprocalCost);

/// s_k = t_1 / t_k for k in {1, 2, 4, 8}.
std::array<double, 4> compute_speedups(const RuntimeEstimate& estimate);

struct SavingsReport {
  double plan_cost = 0.0;
  std::int64_t plan_runtime = 0;
  double over_prov_cost = 0.0;
  std::int64_t over_prov_runtime = 0;
  double under_prov_cost = 0.0;
  std::int64_t under_prov_runtime = 0;
  double savings_vs_over_pct = 0.0;
  double savings_vs_under_pct = 0.0;
  /// (plan runtime - all-8 runtime) / all-8 runtime * 100
  double runtime_overhead_vs_over_pct = 0.0;
};

/// Baselines run every stage on 8 (over) or 1 (under) vCPUs. StateError for an
/// infeasible plan, ConfigError if a stage lacks the 1- or 8-vCPU choice.
SavingsReport compute_savings(const DeploymentPlan& plan, const MckpInstance& instance);

}  // namespace edaplan::mckp
