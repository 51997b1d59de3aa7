#include "edaplan/mckp/solver.hpp"

#include <algorithm>
#include <string>

#include "edaplan/errors.hpp"

namespace edaplan::mckp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::int64_t effective_capacity(const MckpInstance& instance) {
  std::int64_t slowest = 0;
  for (const auto& s : instance.stages) {
    std::int64_t worst = 0;
    for (const auto& c : s.choices) worst = std::max(worst, c.runtime);
    slowest += worst;
  }
  const std::int64_t c_eff = std::min(instance.capacity, slowest);
  if (c_eff > kMaxCapacity) {
    throw ConfigError("deadline capacity " + std::to_string(c_eff) + " s exceeds the DP limit of " +
                      std::to_string(kMaxCapacity) + " s");
  }
  return c_eff;
}

// Fills `choice` for every stage; keeps every value row when `all_rows` is set,
// otherwise only z_0 and the final row.
DpTable run_dp(const MckpInstance& instance, Objective objective, bool all_rows) {
  instance.validate();
  const std::size_t l = instance.stages.size();
  DpTable table;
  table.stage_count = l;
  table.width = effective_capacity(instance) + 1;
  const auto w = static_cast<std::size_t>(table.width);
  table.choice.assign(l * w, kNoChoice);

  std::vector<double> prev(w, 0.0), cur(w);
  if (all_rows) {
    table.value.reserve((l + 1) * w);
    table.value.insert(table.value.end(), prev.begin(), prev.end());
  }
  for (std::size_t i = 0; i < l; ++i) {
    const auto& choices = instance.stages[i].choices;
    std::vector<double> values;
    for (const auto& c : choices) values.push_back(choice_value(c, objective));
    std::uint8_t* pick = table.choice.data() + i * w;
    std::fill(cur.begin(), cur.end(), kNegInf);
    for (std::size_t j = 0; j < choices.size(); ++j) {
      const auto t = static_cast<std::size_t>(choices[j].runtime);
      const double v = values[j];
      for (std::size_t c = t; c < w; ++c) {
        const double cand = prev[c - t] + v;
        if (cand > cur[c]) {
          cur[c] = cand;
          pick[c] = static_cast<std::uint8_t>(j);
        }
      }
    }
    std::swap(prev, cur);
    if (all_rows) table.value.insert(table.value.end(), prev.begin(), prev.end());
  }
  if (!all_rows) {
    // Keep the z_0 row of zeros plus the last row so z(l, c) still indexes correctly.
    table.value.assign((l + 1) * w, 0.0);
    std::copy(prev.begin(), prev.end(), table.value.begin() + static_cast<std::ptrdiff_t>(l * w));
  }
  return table;
}

DeploymentPlan make_plan(const MckpInstance& instance, const std::vector<std::size_t>& index, double value) {
  DeploymentPlan plan;
  plan.feasible = true;
  plan.choice_index = index;
  plan.objective_value = value;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Choice& c = instance.stages[i].choices[index[i]];
    plan.selection.push_back(c.vcpus);
    plan.total_runtime += c.runtime;
    plan.total_cost += c.cost;
  }
  return plan;
}

}  // namespace

std::string_view to_string(Objective objective) noexcept {
  return objective == Objective::ReciprocalCost ? "paper" : "min-cost";
}

std::optional<Objective> parse_objective(std::string_view text) noexcept {
  if (text == "paper") return Objective::ReciprocalCost;
  if (text == "min-cost") return Objective::MinTotalCost;
  return std::nullopt;
}

double choice_value(const Choice& choice, Objective objective) {
  return objective == Objective::ReciprocalCost ? 1.0 / choice.cost : -choice.cost;
}

DpTable build_dp_table(const MckpInstance& instance, Objective objective) {
  return run_dp(instance, objective, true);
}

DeploymentPlan solve_dp(const MckpInstance& instance, Objective objective) {
  const DpTable table = run_dp(instance, objective, false);
  const std::size_t l = table.stage_count;
  std::int64_t c = table.width - 1;
  const double best = table.z(l, c);
  if (best == kNegInf) return DeploymentPlan{};
  std::vector<std::size_t> index(l);
  for (std::size_t i = l; i-- > 0;) {
    const std::uint8_t j = table.pick(i, c);
    if (j == kNoChoice) throw ContractViolation("DP backtrack reached an infeasible cell");
    index[i] = j;
    c -= instance.stages[i].choices[j].runtime;
  }
  return make_plan(instance, index, best);
}

DeploymentPlan brute_force_oracle(const MckpInstance& instance, Objective objective) {
  instance.validate();
  const std::size_t l = instance.stages.size();
  std::uint64_t total = 1;
  for (const auto& s : instance.stages) {
    total *= s.choices.size();
    if (total > kMaxEnumeration) {
      throw ConfigError("instance has more than " + std::to_string(kMaxEnumeration) + " assignments to enumerate");
    }
  }
  std::vector<std::vector<double>> values(l);
  for (std::size_t i = 0; i < l; ++i) {
    for (const auto& c : instance.stages[i].choices) values[i].push_back(choice_value(c, objective));
  }
  // Stage 1 varies fastest, so the first optimum met is the smallest assignment
  // read from the last stage backwards: the order the DP backtrack prefers.
  std::vector<std::size_t> index(l, 0), best_index;
  double best = kNegInf;
  bool found = false;
  for (std::uint64_t n = 0; n < total; ++n) {
    std::int64_t runtime = 0;
    double value = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      runtime += instance.stages[i].choices[index[i]].runtime;
      value += values[i][index[i]];
    }
    if (runtime <= instance.capacity && (!found || value > best)) {
      best = value;
      best_index = index;
      found = true;
    }
    for (std::size_t i = 0; i < l; ++i) {
      if (++index[i] < instance.stages[i].choices.size()) break;
      index[i] = 0;
    }
  }
  if (!found) return DeploymentPlan{};
  return make_plan(instance, best_index, best);
}

std::array<double, 4> compute_speedups(const RuntimeEstimate& estimate) {
  for (auto t : estimate.seconds) {
    if (t <= 0) throw ContractViolation("speedups need positive runtimes");
  }
  std::array<double, 4> s{};
  const auto t1 = static_cast<double>(estimate.seconds[0]);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = t1 / static_cast<double>(estimate.seconds[k]);
  return s;
}

SavingsReport compute_savings(const DeploymentPlan& plan, const MckpInstance& instance) {
  if (!plan.feasible) throw StateError("savings are undefined for an infeasible plan");
  if (plan.choice_index.size() != instance.stages.size()) {
    throw ContractViolation("plan does not match the instance's stage count");
  }
  SavingsReport r;
  r.plan_cost = plan.total_cost;
  r.plan_runtime = plan.total_runtime;
  for (const auto& s : instance.stages) {
    auto find = [&](int vcpus) -> const Choice& {
      for (const auto& c : s.choices) {
        if (c.vcpus == vcpus) return c;
      }
      throw ConfigError("stage " + std::string(to_string(s.stage)) + " has no " + std::to_string(vcpus) +
                        "-vCPU choice for the provisioning baseline");
    };
    const Choice& over = find(8);
    const Choice& under = find(1);
    r.over_prov_cost += over.cost;
    r.over_prov_runtime += over.runtime;
    r.under_prov_cost += under.cost;
    r.under_prov_runtime += under.runtime;
  }
  r.savings_vs_over_pct = (r.over_prov_cost - r.plan_cost) / r.over_prov_cost * 100.0;
  r.savings_vs_under_pct = (r.under_prov_cost - r.plan_cost) / r.under_prov_cost * 100.0;
  r.runtime_overhead_vs_over_pct = static_cast<double>(r.plan_runtime - r.over_prov_runtime) /
                                   static_cast<double>(r.over_prov_runtime) * 100.0;
  return r;
}

}  // namespace edaplan::mckp
