#include "runtimes_json.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "edaplan/errors.hpp"
#include "edaplan/graph/graph_io.hpp"

namespace edaplan::cli {

namespace {

using nlohmann::json;

template <typename T>
std::array<T, 4> read_vcpu_map(const json& j, const std::string& where, bool integral) {
  if (!j.is_object()) throw ValidationError(where + " must be an object keyed by \"1\",\"2\",\"4\",\"8\"");
  if (j.size() != kVcpuOptions.size()) throw ValidationError(where + " needs exactly the keys \"1\",\"2\",\"4\",\"8\"");
  std::array<T, 4> out{};
  for (std::size_t k = 0; k < kVcpuOptions.size(); ++k) {
    const std::string key = std::to_string(kVcpuOptions[k]);
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError(where + " is missing key \"" + key + "\"");
    if (!it->is_number()) throw ValidationError(where + "[\"" + key + "\"] must be a number");
    const double v = it->get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(where + "[\"" + key + "\"] must be positive");
    if (integral && v != std::floor(v)) {
      throw ValidationError(where + "[\"" + key + "\"] must be whole seconds");
    }
    out[k] = static_cast<T>(v);
  }
  return out;
}

}  // namespace

RuntimesFile parse_runtimes_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("runtimes file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("runtimes file must be a JSON object");
  RuntimesFile file;
  if (auto it = j.find("source"); it != j.end() && it->is_string()) file.source = it->get<std::string>();
  const auto stages = j.find("stages");
  if (stages == j.end() || !stages->is_array() || stages->empty()) {
    throw ValidationError("runtimes file needs a non-empty 'stages' array");
  }
  for (std::size_t i = 0; i < stages->size(); ++i) {
    const json& s = (*stages)[i];
    const std::string where = "stages[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ValidationError(where + " must be an object");
    const auto name = s.find("stage");
    if (name == s.end() || !name->is_string()) throw ValidationError(where + ".stage must be a string");
    const auto stage = parse_stage(name->get<std::string>());
    if (!stage) throw ValidationError(where + ".stage '" + name->get<std::string>() + "' is not a known stage");
    for (const auto& existing : file.stages) {
      if (existing.stage == *stage) throw ValidationError(where + " repeats stage " + std::string(to_string(*stage)));
    }
    const auto rt = s.find("runtimes");
    if (rt == s.end()) throw ValidationError(where + ".runtimes is missing");
    StageRuntimes entry;
    entry.stage = *stage;
    entry.runtimes.seconds = read_vcpu_map<std::int64_t>(*rt, where + ".runtimes", true);
    if (const auto costs = s.find("costs"); costs != s.end()) {
      entry.costs = read_vcpu_map<double>(*costs, where + ".costs", false);
    }
    file.stages.push_back(std::move(entry));
  }
  std::sort(file.stages.begin(), file.stages.end(),
            [](const StageRuntimes& a, const StageRuntimes& b) { return a.stage < b.stage; });
  return file;
}

RuntimesFile load_runtimes_json(const std::filesystem::path& path) {
  return parse_runtimes_json(graph::read_text_file(path));
}

mckp::MckpInstance instance_from_runtimes(const RuntimesFile& file, const pricing::PricingTable* pricing,
                                          std::int64_t deadline) {
  if (deadline < 0) throw ConfigError("deadline must be non-negative");
  mckp::MckpInstance instance;
  instance.capacity = deadline;
  for (const auto& s : file.stages) {
    mckp::StageChoices sc{s.stage, {}};
    for (std::size_t k = 0; k < kVcpuOptions.size(); ++k) {
      const int vcpus = kVcpuOptions[k];
      const std::int64_t t = s.runtimes.seconds[k];
      double cost = 0.0;
      if (s.costs) {
        cost = (*s.costs)[k];
      } else if (pricing) {
        cost = pricing::job_cost(static_cast<double>(t), pricing->price(pricing::recommend_family(s.stage), vcpus));
      } else {
        throw ConfigError("stage " + std::string(to_string(s.stage)) +
                          " has no literal costs; pass --pricing to price it");
      }
      sc.choices.push_back({vcpus, t, cost});
    }
    instance.stages.push_back(std::move(sc));
  }
  instance.validate();
  return instance;
}

}  // namespace edaplan::cli
