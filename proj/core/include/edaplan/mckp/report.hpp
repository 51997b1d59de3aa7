#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edaplan/mckp/instance.hpp"
#include "edaplan/mckp/solver.hpp"

namespace edaplan::mckp {

/// A solved deadline: the row unit of the plan reports.
struct PlanRow {
  std::int64_t deadline = 0;
  DeploymentPlan plan;
  std::optional<SavingsReport> savings;  // present when the plan is feasible
};

/// Solves `instance` once per deadline (the instance capacity is replaced).
std::vector<PlanRow> solve_deadlines(const MckpInstance& instance, const std::vector<std::int64_t>& deadlines,
                                     Objective objective);

/// Text grid: stage/vCPU header, runtime and cost rows, then one row per
/// deadline with an 'x' under each selected configuration and the totals
/// ("NA" when infeasible). Costs are rounded to 2 decimals for display only.
std::string format_plan_table(const MckpInstance& instance, const std::vector<PlanRow>& rows);

/// Savings block for feasible rows.
std::string format_savings(const std::vector<PlanRow>& rows);

/// {"objective", "stages":[...], "plans":[{"deadline","feasible","selections",
///  "total_runtime","total_cost","objective_value","savings"}]}; full precision.
std::string plan_report_json(const MckpInstance& instance, const std::vector<PlanRow>& rows, Objective objective);

/// One line per deadline: deadline,feasible,<stage>_vcpus...,total_runtime,total_cost,...
std::string plan_report_csv(const MckpInstance& instance, const std::vector<PlanRow>& rows);

/// Bar chart comparing plan cost with the all-8 and all-1 baselines, one group per feasible row.
std::string savings_chart_svg(const std::vector<PlanRow>& rows);

}  // namespace edaplan::mckp
