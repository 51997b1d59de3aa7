#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edaplan/gcn/trainer.hpp"
#include "edaplan/stage.hpp"

namespace edaplan::gcn {

/// One line of a JSON-lines dataset:
///   {"graph": "graphs/d001.graph", "application": "routing",
///    "runtimes": {"1": 812, "2": 455, "4": 270, "8": 190}}
/// Relative graph paths are resolved against the dataset file's directory.
struct DatasetRecord {
  std::filesystem::path graph;
  Stage application = Stage::Synthesis;
  std::array<double, kOutputs> runtimes{};
};

/// Throws ParseError (with line number) or ValidationError on malformed records.
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);
std::vector<DatasetRecord> parse_dataset(std::string_view text, const std::filesystem::path& base_dir);

/// Writes records with graph paths relative to `path`'s directory when possible.
void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);
std::string format_dataset_record(const DatasetRecord& record, const std::filesystem::path& base_dir);

/// Loads every record's graph. With `application` set, records for other
/// applications are skipped; ConfigError if nothing remains.
std::vector<TrainSample> load_samples(const std::vector<DatasetRecord>& records,
                                      std::optional<Stage> application = std::nullopt);

}  // namespace edaplan::gcn
