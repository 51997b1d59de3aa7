#include "edaplan/gcn/dataset.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "edaplan/errors.hpp"
#include "edaplan/graph/graph_io.hpp"

namespace edaplan::gcn {

namespace {

using nlohmann::json;

DatasetRecord parse_record(const json& j, std::size_t line, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("dataset record must be a JSON object", line);
  DatasetRecord rec;
  const auto graph = j.find("graph");
  if (graph == j.end() || !graph->is_string() || graph->get<std::string>().empty()) {
    throw ValidationError("line " + std::to_string(line) + ": 'graph' must be a non-empty path string");
  }
  const std::filesystem::path p(graph->get<std::string>());
  rec.graph = p.is_absolute() ? p : base_dir / p;

  const auto app = j.find("application");
  if (app == j.end() || !app->is_string()) {
    throw ValidationError("line " + std::to_string(line) + ": 'application' must be a string");
  }
  const auto stage = parse_stage(app->get<std::string>());
  if (!stage) {
    throw ValidationError("line " + std::to_string(line) + ": unknown application '" + app->get<std::string>() + "'");
  }
  rec.application = *stage;

  const auto rt = j.find("runtimes");
  if (rt == j.end() || !rt->is_object()) {
    throw ValidationError("line " + std::to_string(line) + ": 'runtimes' must be an object keyed by \"1\",\"2\",\"4\",\"8\"");
  }
  if (rt->size() != kOutputs) {
    throw ValidationError("line " + std::to_string(line) + ": 'runtimes' needs exactly the keys \"1\",\"2\",\"4\",\"8\"");
  }
  for (std::size_t k = 0; k < kOutputs; ++k) {
    const std::string key = std::to_string(kVcpuOptions[k]);
    const auto v = rt->find(key);
    if (v == rt->end()) {
      throw ValidationError("line " + std::to_string(line) + ": 'runtimes' is missing key \"" + key + "\"");
    }
    if (!v->is_number() || !(v->get<double>() > 0.0) || !std::isfinite(v->get<double>())) {
      throw ValidationError("line " + std::to_string(line) + ": runtime for " + key + " vCPUs must be a positive number");
    }
    rec.runtimes[k] = v->get<double>();
  }
  return rec;
}

}  // namespace

std::vector<DatasetRecord> parse_dataset(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<DatasetRecord> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    records.push_back(parse_record(j, line_no, base_dir));
  }
  return records;
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  const std::string text = graph::read_text_file(path);
  return parse_dataset(text, path.parent_path());
}

std::string format_dataset_record(const DatasetRecord& record, const std::filesystem::path& base_dir) {
  std::filesystem::path p = record.graph;
  if (!base_dir.empty()) {
    const auto rel = p.lexically_relative(base_dir);
    if (!rel.empty() && *rel.begin() != "..") p = rel;
  }
  json runtimes = json::object();
  for (std::size_t k = 0; k < kOutputs; ++k) runtimes[std::to_string(kVcpuOptions[k])] = record.runtimes[k];
  json j = {{"graph", p.generic_string()}, {"application", std::string(to_string(record.application))},
            {"runtimes", runtimes}};
  return j.dump();
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw LoadError("cannot open '" + path.string() + "' for writing");
  for (const auto& rec : records) out << format_dataset_record(rec, path.parent_path()) << '\n';
  if (!out) throw LoadError("failed writing '" + path.string() + "'");
}

std::vector<TrainSample> load_samples(const std::vector<DatasetRecord>& records, std::optional<Stage> application) {
  std::vector<TrainSample> samples;
  // Graph files shared between records are parsed once.
  std::map<std::filesystem::path, std::shared_ptr<const graph::DesignGraph>> cache;
  for (const auto& rec : records) {
    if (application && rec.application != *application) continue;
    auto& g = cache[rec.graph];
    if (!g) g = std::make_shared<const graph::DesignGraph>(graph::load_design(rec.graph));
    samples.push_back(TrainSample::make(g, rec.application, rec.runtimes));
  }
  if (samples.empty()) {
    throw ConfigError(application ? "dataset has no samples for application '" + std::string(to_string(*application)) + "'"
                                  : std::string("dataset is empty"));
  }
  return samples;
}

}  // namespace edaplan::gcn
