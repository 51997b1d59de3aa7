#include "edaplan/mckp/instance.hpp"

#include <cmath>
#include <string>

#include "edaplan/errors.hpp"

namespace edaplan::mckp {

void MckpInstance::validate() const {
  if (capacity < 0) throw ContractViolation("capacity must be non-negative");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& s = stages[i];
    const std::string where = "stage " + std::to_string(i + 1) + " (" + std::string(to_string(s.stage)) + ")";
    if (s.choices.empty()) throw ContractViolation(where + " has no choices");
    if (s.choices.size() > 254) throw ContractViolation(where + " has too many choices");
    for (std::size_t j = 0; j < s.choices.size(); ++j) {
      const Choice& c = s.choices[j];
      if (c.runtime <= 0) throw ContractViolation(where + ": runtime must be a positive integer");
      if (!(c.cost > 0.0) || !std::isfinite(c.cost)) throw ContractViolation(where + ": cost must be positive");
      if (j > 0 && s.choices[j - 1].vcpus >= c.vcpus) {
        throw ContractViolation(where + ": choices must have unique vcpus in ascending order");
      }
    }
  }
}

MckpInstance build_instance(const std::map<Stage, RuntimeEstimate>& estimates, const pricing::PricingTable& pricing,
                            std::int64_t deadline_seconds) {
  if (deadline_seconds < 0) throw ConfigError("deadline must be non-negative");
  MckpInstance instance;
  instance.capacity = deadline_seconds;
  for (Stage stage : kAllStages) {
    const auto it = estimates.find(stage);
    if (it == estimates.end()) throw ConfigError("no runtime estimate for stage " + std::string(to_string(stage)));
    const pricing::VmFamily family = pricing::recommend_family(stage);
    StageChoices sc{stage, {}};
    for (std::size_t k = 0; k < kVcpuOptions.size(); ++k) {
      const int vcpus = kVcpuOptions[k];
      const std::int64_t t = it->second.seconds[k];
      if (t <= 0) {
        throw ContractViolation("runtime estimate for " + std::string(to_string(stage)) + " must be positive");
      }
      sc.choices.push_back({vcpus, t, pricing::job_cost(static_cast<double>(t), pricing.price(family, vcpus))});
    }
    instance.stages.push_back(std::move(sc));
  }
  instance.validate();
  return instance;
}

}  // namespace edaplan::mckp
