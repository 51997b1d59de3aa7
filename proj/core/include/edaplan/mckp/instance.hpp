#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "edaplan/pricing/pricing.hpp"
#include "edaplan/runtime_estimate.hpp"
#include "edaplan/stage.hpp"

namespace edaplan::mckp {

/// One machine configuration for a stage: t_ij seconds at cost p_ij.
struct Choice {
  int vcpus = 1;
  std::int64_t runtime = 1;
  double cost = 0.0;

  friend bool operator==(const Choice&, const Choice&) = default;
};

struct StageChoices {
  Stage stage = Stage::Synthesis;
  std::vector<Choice> choices;  // ascending, unique vcpus

  friend bool operator==(const StageChoices&, const StageChoices&) = default;
};

struct MckpInstance {
  std::vector<StageChoices> stages;
  std::int64_t capacity = 0;  // deadline C in seconds

  /// Throws ContractViolation on an empty stage, unsorted or duplicate vcpus,
  /// non-positive runtimes or costs, or a negative capacity.
  void validate() const;

  friend bool operator==(const MckpInstance&, const MckpInstance&) = default;
};

/// Costs from the stage's recommended family: p = (t / 3600) * hourly price.
/// ConfigError when a stage estimate or a price row is missing.
MckpInstance build_instance(const std::map<Stage, RuntimeEstimate>& estimates, const pricing::PricingTable& pricing,
                            std::int64_t deadline_seconds);

}  // namespace edaplan::mckp
