#include "edaplan/gcn/adam.hpp"

#include <cmath>
#include <vector>

#include "edaplan/errors.hpp"

namespace edaplan::gcn {

AdamState AdamState::zeros_like(const GcnParameters& params) {
  return AdamState{params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(GcnParameters& params, const GcnParameters& grads, AdamState& state, const AdamConfig& config) {
  if (state.step == 0 && !state.m.same_shape(params)) state = AdamState::zeros_like(params);
  if (!grads.same_shape(params) || !state.m.same_shape(params) || !state.v.same_shape(params)) {
    throw ContractViolation("adam_step: gradient or moment shapes do not match the parameters");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  const double step_size = config.learning_rate / correction1;
  const double inv_sqrt_c2 = 1.0 / std::sqrt(correction2);

  // Locals: the parameter stores below could otherwise alias `config`.
  const double b1 = config.beta1, b2 = config.beta2, eps = config.epsilon;

  std::vector<DenseMatrix*> p;
  std::vector<const DenseMatrix*> g;
  std::vector<DenseMatrix*> m, v;
  params.for_each_tensor([&](DenseMatrix& x) { p.push_back(&x); });
  grads.for_each_tensor([&](const DenseMatrix& x) { g.push_back(&x); });
  state.m.for_each_tensor([&](DenseMatrix& x) { m.push_back(&x); });
  state.v.for_each_tensor([&](DenseMatrix& x) { v.push_back(&x); });

  for (std::size_t i = 0; i < p.size(); ++i) {
    double* __restrict pv = p[i]->values().data();
    const double* __restrict gv = g[i]->values().data();
    double* __restrict mv = m[i]->values().data();
    double* __restrict vv = v[i]->values().data();
    const std::size_t n = p[i]->size();
    for (std::size_t k = 0; k < n; ++k) {
      mv[k] = b1 * mv[k] + (1.0 - b1) * gv[k];
      vv[k] = b2 * vv[k] + (1.0 - b2) * gv[k] * gv[k];
      // lr * m_hat / (sqrt(v_hat) + eps) with the bias corrections folded in.
      pv[k] -= step_size * mv[k] / (std::sqrt(vv[k]) * inv_sqrt_c2 + eps);
    }
  }
}

}  // namespace edaplan::gcn
