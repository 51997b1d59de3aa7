#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "edaplan/errors.hpp"
#include "edaplan/stage.hpp"

namespace edaplan {

/// Whole-second runtimes of one job on 1, 2, 4 and 8 vCPUs (kVcpuOptions order).
struct RuntimeEstimate {
  std::array<std::int64_t, 4> seconds{};

  std::int64_t at_vcpus(int vcpus) const {
    const auto idx = vcpu_index(vcpus);
    if (!idx) throw ContractViolation("unsupported vCPU count " + std::to_string(vcpus));
    return seconds[*idx];
  }

  friend bool operator==(const RuntimeEstimate&, const RuntimeEstimate&) = default;
};

}  // namespace edaplan
