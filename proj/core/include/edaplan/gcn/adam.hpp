#pragma once

#include <cstdint>

#include "edaplan/gcn/model.hpp"

namespace edaplan::gcn {

/// First and second moment estimates, shaped like the parameters.
struct AdamState {
  GcnParameters m;
  GcnParameters v;
  std::uint64_t step = 0;

  static AdamState zeros_like(const GcnParameters& params);
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(GcnParameters& params, const GcnParameters& grads, AdamState& state, const AdamConfig& config);

}  // namespace edaplan::gcn
