#include "edaplan/mckp/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "edaplan/errors.hpp"

namespace edaplan::mckp {

namespace {

using nlohmann::json;

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

std::string pad_left(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }
std::string pad_right(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string stage_title(Stage s) {
  switch (s) {
    case Stage::Synthesis: return "Synthesis";
    case Stage::Placement: return "Placement";
    case Stage::Routing: return "Routing";
    case Stage::Sta: return "STA";
  }
  return "?";
}

json savings_json(const SavingsReport& s) {
  return {{"over_prov_cost", s.over_prov_cost},
          {"over_prov_runtime", s.over_prov_runtime},
          {"under_prov_cost", s.under_prov_cost},
          {"under_prov_runtime", s.under_prov_runtime},
          {"savings_vs_over_pct", s.savings_vs_over_pct},
          {"savings_vs_under_pct", s.savings_vs_under_pct},
          {"runtime_overhead_vs_over_pct", s.runtime_overhead_vs_over_pct}};
}

}  // namespace

std::vector<PlanRow> solve_deadlines(const MckpInstance& instance, const std::vector<std::int64_t>& deadlines,
                                     Objective objective) {
  std::vector<PlanRow> rows;
  for (std::int64_t d : deadlines) {
    MckpInstance copy = instance;
    copy.capacity = d;
    PlanRow row{d, solve_dp(copy, objective), std::nullopt};
    if (row.plan.feasible) row.savings = compute_savings(row.plan, copy);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_plan_table(const MckpInstance& instance, const std::vector<PlanRow>& rows) {
  std::size_t cell = 4;
  for (const auto& s : instance.stages) {
    for (const auto& c : s.choices) {
      cell = std::max({cell, std::to_string(c.runtime).size(), fixed(c.cost, 2).size()});
    }
  }
  std::size_t label = std::string("Runtime (sec.)").size();
  for (const auto& r : rows) label = std::max(label, ("Deadline " + std::to_string(r.deadline)).size());

  std::ostringstream out;
  auto line = [&](const std::string& head, auto&& cell_text, const std::string& runtime, const std::string& cost) {
    out << pad_right(head, label);
    for (std::size_t i = 0; i < instance.stages.size(); ++i) {
      out << " |";
      for (std::size_t j = 0; j < instance.stages[i].choices.size(); ++j) out << ' ' << pad_left(cell_text(i, j), cell);
    }
    out << " | " << pad_left(runtime, 13) << " | " << pad_left(cost, 8) << '\n';
  };

  out << pad_right("Task", label);
  for (const auto& s : instance.stages) {
    const std::size_t width = s.choices.size() * (cell + 1);
    out << " |" << pad_right(" " + stage_title(s.stage), width);
  }
  out << " | " << pad_left("Total Runtime", 13) << " | " << pad_left("Min Cost", 8) << '\n';
  line("vCPUs", [&](std::size_t i, std::size_t j) { return std::to_string(instance.stages[i].choices[j].vcpus); }, "",
       "");
  line("Runtime (sec.)",
       [&](std::size_t i, std::size_t j) { return std::to_string(instance.stages[i].choices[j].runtime); }, "", "");
  line("Cost", [&](std::size_t i, std::size_t j) { return fixed(instance.stages[i].choices[j].cost, 2); }, "", "");
  for (const auto& r : rows) {
    const auto mark = [&](std::size_t i, std::size_t j) {
      return r.plan.feasible && r.plan.choice_index[i] == j ? std::string("x") : std::string();
    };
    if (r.plan.feasible) {
      line("Deadline " + std::to_string(r.deadline), mark, std::to_string(r.plan.total_runtime),
           fixed(r.plan.total_cost, 2));
    } else {
      line("Deadline " + std::to_string(r.deadline), mark, "NA", "NA");
    }
  }
  return out.str();
}

std::string format_savings(const std::vector<PlanRow>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) {
    if (!r.savings) {
      out << "Deadline " << r.deadline << ": not achievable\n";
      continue;
    }
    const auto& s = *r.savings;
    out << "Deadline " << r.deadline << ": plan " << fixed(s.plan_cost, 2) << ", over-provisioning (all 8 vCPUs) "
        << fixed(s.over_prov_cost, 2) << " -> saves " << fixed(s.savings_vs_over_pct, 2)
        << "%, under-provisioning (all 1 vCPU) " << fixed(s.under_prov_cost, 2) << " -> saves "
        << fixed(s.savings_vs_under_pct, 2) << "%, runtime overhead vs all-8 " << fixed(s.runtime_overhead_vs_over_pct, 2)
        << "%\n";
  }
  return out.str();
}

std::string plan_report_json(const MckpInstance& instance, const std::vector<PlanRow>& rows, Objective objective) {
  json stages = json::array();
  for (const auto& s : instance.stages) {
    json choices = json::array();
    for (const auto& c : s.choices) choices.push_back({{"vcpus", c.vcpus}, {"runtime", c.runtime}, {"cost", c.cost}});
    stages.push_back({{"stage", std::string(to_string(s.stage))}, {"choices", choices}});
  }
  json plans = json::array();
  for (const auto& r : rows) {
    json p = {{"deadline", r.deadline}, {"feasible", r.plan.feasible}};
    if (r.plan.feasible) {
      json sel = json::object();
      for (std::size_t i = 0; i < instance.stages.size(); ++i) {
        sel[std::string(to_string(instance.stages[i].stage))] = r.plan.selection[i];
      }
      p["selections"] = sel;
      p["total_runtime"] = r.plan.total_runtime;
      p["total_cost"] = r.plan.total_cost;
      p["objective_value"] = r.plan.objective_value;
      p["savings"] = r.savings ? savings_json(*r.savings) : json(nullptr);
    } else {
      p["selections"] = nullptr;
      p["total_runtime"] = nullptr;
      p["total_cost"] = nullptr;
      p["objective_value"] = nullptr;
      p["savings"] = nullptr;
    }
    plans.push_back(std::move(p));
  }
  json report = {{"objective", std::string(to_string(objective))}, {"stages", stages}, {"plans", plans}};
  return report.dump(2) + "\n";
}

std::string plan_report_csv(const MckpInstance& instance, const std::vector<PlanRow>& rows) {
  std::ostringstream out;
  out << "deadline,feasible";
  for (const auto& s : instance.stages) out << ',' << to_string(s.stage) << "_vcpus";
  out << ",total_runtime,total_cost,over_prov_cost,under_prov_cost,savings_vs_over_pct,savings_vs_under_pct\n";
  out.precision(17);
  for (const auto& r : rows) {
    out << r.deadline << ',' << (r.plan.feasible ? "true" : "false");
    if (r.plan.feasible) {
      for (int v : r.plan.selection) out << ',' << v;
      out << ',' << r.plan.total_runtime << ',' << r.plan.total_cost << ',' << r.savings->over_prov_cost << ','
          << r.savings->under_prov_cost << ',' << r.savings->savings_vs_over_pct << ','
          << r.savings->savings_vs_under_pct;
    } else {
      for (std::size_t i = 0; i < instance.stages.size(); ++i) out << ",NA";
      out << ",NA,NA,NA,NA,NA,NA";
    }
    out << '\n';
  }
  return out.str();
}

std::string savings_chart_svg(const std::vector<PlanRow>& rows) {
  std::vector<const PlanRow*> feasible;
  for (const auto& r : rows) {
    if (r.savings) feasible.push_back(&r);
  }
  const double bar_w = 28, gap = 10, group_gap = 40, left = 60, top = 40, plot_h = 220;
  const double group_w = 3 * bar_w + 2 * gap;
  const double width = left + std::max<std::size_t>(1, feasible.size()) * (group_w + group_gap) + 20;
  const double height = top + plot_h + 70;
  double max_cost = 0.0;
  for (const auto* r : feasible) {
    max_cost = std::max({max_cost, r->savings->plan_cost, r->savings->over_prov_cost, r->savings->under_prov_cost});
  }
  if (!(max_cost > 0.0)) max_cost = 1.0;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "  <title>Deployment cost: plan vs over- and under-provisioning</title>\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
      << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << width - 10 << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n"
      << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n"
      << "  <text x=\"" << left << "\" y=\"" << top - 20 << "\">cost per deadline (max " << fixed(max_cost, 2)
      << ")</text>\n";
  const char* colors[3] = {"#2b8cbe", "#e34a33", "#74c476"};
  const char* names[3] = {"plan", "all 8 vCPUs", "all 1 vCPU"};
  for (std::size_t g = 0; g < feasible.size(); ++g) {
    const auto& s = *feasible[g]->savings;
    const double values[3] = {s.plan_cost, s.over_prov_cost, s.under_prov_cost};
    const double x0 = left + 20 + static_cast<double>(g) * (group_w + group_gap);
    for (int b = 0; b < 3; ++b) {
      const double h = values[b] / max_cost * plot_h;
      const double x = x0 + b * (bar_w + gap);
      out << "  <rect x=\"" << x << "\" y=\"" << top + plot_h - h << "\" width=\"" << bar_w << "\" height=\"" << h
          << "\" fill=\"" << colors[b] << "\"><title>" << names[b] << ": " << fixed(values[b], 4)
          << "</title></rect>\n";
      out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << top + plot_h - h - 4
          << "\" text-anchor=\"middle\">" << fixed(values[b], 2) << "</text>\n";
    }
    out << "  <text x=\"" << x0 + group_w / 2 << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">C="
        << feasible[g]->deadline << "</text>\n";
  }
  for (int b = 0; b < 3; ++b) {
    const double x = left + b * 110.0;
    out << "  <rect x=\"" << x << "\" y=\"" << top + plot_h + 34 << "\" width=\"10\" height=\"10\" fill=\""
        << colors[b] << "\"/>\n"
        << "  <text x=\"" << x + 14 << "\" y=\"" << top + plot_h + 43 << "\">" << names[b] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace edaplan::mckp
