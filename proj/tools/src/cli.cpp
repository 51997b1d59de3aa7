#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "edaplan/errors.hpp"
#include "edaplan/gcn/dataset.hpp"
#include "edaplan/gcn/model_io.hpp"
#include "edaplan/gcn/predictor.hpp"
#include "edaplan/gcn/trainer.hpp"
#include "edaplan/graph/graph_io.hpp"
#include "edaplan/mckp/report.hpp"
#include "edaplan/pricing/pricing.hpp"
#include "edaplan/synth/oracle.hpp"
#include "runtimes_json.hpp"

namespace edaplan::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  // shared
  std::string format = "table";
  std::uint64_t seed = 0;
  // parse
  std::string design;
  std::string dump;
  std::vector<std::string> driver_pins;
  // train
  std::string dataset;
  std::string application;
  std::size_t epochs = 200;
  std::string out;
  std::string history;
  std::string aggregation = "in";
  // predict / plan / optimize
  std::vector<std::string> models;
  std::string model_dir;
  std::vector<std::string> designs;
  std::string pricing;
  std::string runtimes;
  std::vector<std::int64_t> deadlines;
  std::string objective = "paper";
  std::string svg;
  // gen-data
  std::size_t graphs = 250;
  std::string sizes = "small";
  double noise = 0.05;
  std::string out_dir;
};

void ensure_parent(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot open '" + path.string() + "' for writing");
  file << text;
  if (!file) throw ConfigError("failed writing '" + path.string() + "'");
}

Stage require_stage(const std::string& text) {
  const auto stage = parse_stage(text);
  if (!stage) throw ConfigError("unknown application '" + text + "' (synthesis, placement, routing, sta)");
  return *stage;
}

graph::VerilogOptions verilog_options(const Options& o) {
  graph::VerilogOptions v;
  if (!o.driver_pins.empty()) v.driver_pins = o.driver_pins;
  return v;
}

json stats_json(const graph::DesignGraph& g) {
  const graph::GraphStats s = graph::graph_stats(g);
  json kinds = json::object();
  for (std::size_t k = 0; k < graph::kNodeKindCount; ++k) {
    kinds[std::string(graph::to_string(static_cast<graph::NodeKind>(k)))] = s.kind_counts[k];
  }
  return {{"name", g.name()},
          {"source", std::string(graph::to_string(g.source_kind()))},
          {"nodes", s.node_count},
          {"edges", s.edge_count},
          {"kinds", kinds},
          {"max_fanout", s.max_fanout},
          {"depth", s.depth ? json(*s.depth) : json("cyclic")}};
}

json estimate_json(const RuntimeEstimate& est) {
  json runtimes = json::object(), speedups = json::object();
  const auto s = mckp::compute_speedups(est);
  for (std::size_t k = 0; k < kVcpuOptions.size(); ++k) {
    runtimes[std::to_string(kVcpuOptions[k])] = est.seconds[k];
    speedups[std::to_string(kVcpuOptions[k])] = s[k];
  }
  return {{"runtimes", runtimes}, {"speedups", speedups}};
}

std::string estimate_table(Stage stage, const std::string& design, const RuntimeEstimate& est) {
  std::ostringstream out;
  const auto s = mckp::compute_speedups(est);
  out << to_string(stage) << " runtime estimate for " << design << '\n' << "  vCPUs  runtime(s)  speedup\n";
  for (std::size_t k = 0; k < kVcpuOptions.size(); ++k) {
    char line[64];
    std::snprintf(line, sizeof line, "  %5d  %10lld  %7.3f\n", kVcpuOptions[k], static_cast<long long>(est.seconds[k]),
                  s[k]);
    out << line;
  }
  return out.str();
}

int cmd_parse(const Options& o, std::ostream& out) {
  const graph::DesignGraph g = graph::load_design(o.design, verilog_options(o));
  if (!o.dump.empty()) {
    if (o.dump == "-") {
      out << graph::dump_graph(g);
      return kExitOk;
    }
    write_text(o.dump, graph::dump_graph(g));
  }
  if (o.format == "json") {
    out << stats_json(g).dump(2) << '\n';
  } else {
    out << "design: " << g.name() << " (" << graph::to_string(g.source_kind()) << ")\n"
        << graph::format_stats(graph::graph_stats(g));
  }
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, spdlog::logger& log) {
  const Stage app = require_stage(o.application);
  const auto records = gcn::read_dataset(o.dataset);
  if (records.empty()) throw ConfigError("dataset '" + o.dataset + "' is empty");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].application != app) {
      throw ConfigError("dataset record " + std::to_string(i + 1) + " is for " +
                        std::string(to_string(records[i].application)) + ", not " + std::string(to_string(app)));
    }
  }
  const auto samples = gcn::load_samples(records, app);
  gcn::GcnConfig config;
  if (o.aggregation == "undirected") config.aggregation = gcn::Aggregation::Undirected;
  gcn::GcnModel model = gcn::GcnModel::create(app, o.seed, config);
  gcn::TrainOptions options;
  options.epochs = o.epochs;
  options.on_epoch = [&](std::size_t epoch, double loss) { log.info("epoch {} loss {:.6f}", epoch + 1, loss); };
  log.info("training {} model on {} samples for {} epochs", to_string(app), samples.size(), o.epochs);
  const gcn::TrainResult result = gcn::train(model, samples, options);
  ensure_parent(o.out);
  gcn::save_model(model, o.out);

  const std::string history_path = o.history.empty() ? o.out + ".history.csv" : o.history;
  std::ostringstream csv;
  csv.precision(17);
  csv << "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_history.size(); ++e) csv << e + 1 << ',' << result.loss_history[e] << '\n';
  write_text(history_path, csv.str());

  out << "trained " << to_string(app) << " model on " << samples.size() << " samples for " << o.epochs << " epochs\n";
  if (!result.loss_history.empty()) {
    out << "loss: first epoch " << result.loss_history.front() << ", last epoch " << result.loss_history.back() << '\n';
  }
  out << "model: " << o.out << "\nhistory: " << history_path << '\n';
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  if (o.models.size() != 1) throw ConfigError("predict takes exactly one --model");
  const gcn::GcnModel model = gcn::load_model(o.models.front());
  const graph::DesignGraph g = graph::load_design(o.design, verilog_options(o));
  const RuntimeEstimate est = gcn::predict_runtimes(model, g);
  if (o.format == "json") {
    json j = estimate_json(est);
    j["application"] = std::string(to_string(model.application));
    j["design"] = g.name();
    out << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    const auto s = mckp::compute_speedups(est);
    out << "vcpus,runtime,speedup\n";
    out.precision(17);
    for (std::size_t k = 0; k < kVcpuOptions.size(); ++k) out << kVcpuOptions[k] << ',' << est.seconds[k] << ',' << s[k] << '\n';
  } else {
    out << estimate_table(model.application, g.name(), est);
  }
  return kExitOk;
}

/// Models keyed by application, from --model files and/or --model-dir/<stage>.model.
std::map<Stage, gcn::GcnModel> load_models(const Options& o, bool require_all) {
  std::map<Stage, gcn::GcnModel> models;
  for (const auto& path : o.models) {
    gcn::GcnModel m = gcn::load_model(path);
    const Stage app = m.application;
    if (!models.emplace(app, std::move(m)).second) {
      throw ConfigError("more than one model given for stage " + std::string(to_string(app)));
    }
  }
  if (!o.model_dir.empty()) {
    for (Stage stage : kAllStages) {
      if (models.count(stage)) continue;
      const fs::path path = fs::path(o.model_dir) / (std::string(to_string(stage)) + ".model");
      if (!fs::exists(path)) continue;
      gcn::GcnModel m = gcn::load_model(path);
      if (m.application != stage) {
        throw ConfigError("'" + path.string() + "' holds a " + std::string(to_string(m.application)) + " model");
      }
      models.emplace(stage, std::move(m));
    }
  }
  if (require_all) {
    for (Stage stage : kAllStages) {
      if (!models.count(stage)) {
        throw ConfigError("no model for stage " + std::string(to_string(stage)) +
                          (o.model_dir.empty() ? std::string()
                                               : " (expected " + (fs::path(o.model_dir) / (std::string(to_string(stage)) + ".model")).string() + ")"));
      }
    }
  }
  return models;
}

struct Predictions {
  std::map<Stage, RuntimeEstimate> estimates;
  std::map<Stage, std::string> designs;
};

Predictions predict_all(const Options& o) {
  if (o.designs.empty()) throw ConfigError("no design given (an AIG for synthesis and a netlist for the physical stages)");
  const auto models = load_models(o, true);
  std::optional<graph::DesignGraph> aig, netlist;
  for (const auto& path : o.designs) {
    graph::DesignGraph g = graph::load_design(path, verilog_options(o));
    auto& slot = g.source_kind() == graph::SourceKind::Aig ? aig : netlist;
    if (slot) throw ConfigError("more than one " + std::string(graph::to_string(g.source_kind())) + " design given");
    slot.emplace(std::move(g));
  }
  Predictions p;
  for (const auto& [stage, model] : models) {
    const auto& g = gcn::expected_source(stage) == graph::SourceKind::Aig ? aig : netlist;
    if (!g) {
      throw ConfigError("stage " + std::string(to_string(stage)) + " needs a " +
                        std::string(graph::to_string(gcn::expected_source(stage))) + " design");
    }
    p.estimates[stage] = gcn::predict_runtimes(model, *g);
    p.designs[stage] = g->name();
  }
  return p;
}

void emit_plan(const Options& o, const mckp::MckpInstance& instance, const Predictions* predictions,
               const std::string& provenance, std::ostream& out) {
  const auto objective = *mckp::parse_objective(o.objective);
  const auto rows = mckp::solve_deadlines(instance, o.deadlines, objective);
  if (!o.svg.empty()) write_text(o.svg, mckp::savings_chart_svg(rows));
  if (o.format == "json") {
    json report = json::parse(mckp::plan_report_json(instance, rows, objective));
    if (!provenance.empty()) report["cost_source"] = provenance;
    if (predictions) {
      json pj = json::object();
      for (const auto& [stage, est] : predictions->estimates) {
        json e = estimate_json(est);
        e["design"] = predictions->designs.at(stage);
        pj[std::string(to_string(stage))] = e;
      }
      report["predictions"] = pj;
    }
    out << report.dump(2) << '\n';
    return;
  }
  if (o.format == "csv") {
    out << mckp::plan_report_csv(instance, rows);
    return;
  }
  if (predictions) {
    for (const auto& [stage, est] : predictions->estimates) out << estimate_table(stage, predictions->designs.at(stage), est) << '\n';
  }
  out << "objective: " << mckp::to_string(objective);
  if (!provenance.empty()) out << "; costs: " << provenance;
  out << "\n\n" << mckp::format_plan_table(instance, rows) << '\n' << mckp::format_savings(rows);
}

std::optional<pricing::PricingTable> maybe_pricing(const Options& o, spdlog::logger& log) {
  if (o.pricing.empty()) return std::nullopt;
  pricing::PricingTable table = pricing::load_pricing(o.pricing);
  for (const auto& w : table.warnings) log.warn("pricing: {}", w);
  return table;
}

int cmd_optimize(const Options& o, std::ostream& out, spdlog::logger& log) {
  const auto table = maybe_pricing(o, log);
  if (!o.runtimes.empty()) {
    if (!o.models.empty() || !o.model_dir.empty()) throw ConfigError("use either --runtimes or --model, not both");
    const RuntimesFile file = load_runtimes_json(o.runtimes);
    const auto instance = instance_from_runtimes(file, table ? &*table : nullptr, 0);
    std::string provenance = file.source;
    if (table && !table->source.empty()) provenance += (provenance.empty() ? "" : "; ") + ("prices: " + table->source);
    emit_plan(o, instance, nullptr, provenance, out);
    return kExitOk;
  }
  if (!table) throw ConfigError("--pricing is required when runtimes come from models");
  const Predictions p = predict_all(o);
  const auto instance = mckp::build_instance(p.estimates, *table, 0);
  emit_plan(o, instance, &p, table->source, out);
  return kExitOk;
}

int cmd_plan(const Options& o, std::ostream& out, spdlog::logger& log) {
  const auto table = maybe_pricing(o, log);
  if (!table) throw ConfigError("--pricing is required");
  const Predictions p = predict_all(o);
  const auto instance = mckp::build_instance(p.estimates, *table, 0);
  emit_plan(o, instance, &p, table->source, out);
  return kExitOk;
}

int cmd_gen_data(const Options& o, std::ostream& out) {
  const Stage app = require_stage(o.application);
  synth::DatasetOptions options;
  options.application = app;
  options.sizes.clear();
  std::stringstream list(o.sizes);
  for (std::string item; std::getline(list, item, ',');) {
    const auto size = synth::parse_size_class(item);
    if (!size) throw ConfigError("unknown size class '" + item + "' (small, medium, large)");
    options.sizes.push_back(*size);
  }
  synth::OracleParams params = synth::default_oracle_params(app, o.seed);
  params.noise_rel = o.noise;
  const auto ds = synth::gen_dataset(o.graphs, params, o.seed, options);
  const auto written = synth::write_dataset_files(ds, o.out_dir);
  out << "generated " << ds.designs.size() << " " << to_string(app) << " designs (" << ds.train.size() << " train, "
      << ds.test.size() << " test, " << 4 * ds.designs.size() << " labeled runtimes)\n"
      << "train: " << written.train_jsonl.string() << "\ntest: " << written.test_jsonl.string() << '\n';
  return kExitOk;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
  auto log = std::make_shared<spdlog::logger>("eda_planner", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("EDA_PLANNER_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only accept it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") log->set_level(level);
  }
  return log;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Predict EDA stage runtimes from design graphs and pick per-stage cloud machines under a deadline",
               "eda_planner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "eda_planner 0.1.0");
  const auto formats = CLI::IsMember({"table", "json", "csv"});

  auto* parse = app.add_subcommand("parse", "Parse a design (.aag, .json, .v, .graph) and print graph statistics");
  parse->add_option("design", o.design, "Design file")->required()->check(CLI::ExistingFile);
  parse->add_option("--dump", o.dump, "Write the canonical graph dump to this path ('-' for stdout)");
  parse->add_option("--driver-pins", o.driver_pins, "Comma-separated Verilog pin names that drive a net (default Y Z Q out)")
      ->delimiter(',')
      ->allow_extra_args(false);
  parse->add_option("--format", o.format, "table or json")->check(CLI::IsMember({"table", "json"}));

  auto* train = app.add_subcommand("train", "Train a runtime model for one application");
  train->add_option("--dataset", o.dataset, "JSON-lines dataset")->required()->check(CLI::ExistingFile);
  train->add_option("--application", o.application, "synthesis, placement, routing or sta")->required();
  train->add_option("--epochs", o.epochs, "Training epochs")->check(CLI::PositiveNumber);
  train->add_option("--seed", o.seed, "Initialization and shuffle seed");
  train->add_option("--out", o.out, "Model file to write")->required();
  train->add_option("--history", o.history, "Loss-history CSV (default <out>.history.csv)");
  train->add_option("--aggregation", o.aggregation, "Neighbor set: in (edge direction) or undirected")
      ->check(CLI::IsMember({"in", "undirected"}));

  auto* predict = app.add_subcommand("predict", "Predict 1/2/4/8-vCPU runtimes of a design");
  predict->add_option("--model", o.models, "Model file")
      ->required()
      ->allow_extra_args(false)
      ->check(CLI::ExistingFile);
  predict->add_option("design", o.design, "Design file")->required()->check(CLI::ExistingFile);
  predict->add_option("--driver-pins", o.driver_pins, "Comma-separated Verilog pin names that drive a net")
      ->delimiter(',')
      ->allow_extra_args(false);
  predict->add_option("--format", o.format, "table, json or csv")->check(formats);

  auto add_plan_flags = [&](CLI::App* cmd) {
    cmd->add_option("--pricing", o.pricing, "Pricing CSV")->check(CLI::ExistingFile);
    cmd->add_option("--deadline", o.deadlines, "Total runtime deadline in seconds (repeatable)")
        ->required()
        ->allow_extra_args(false)
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--objective", o.objective, "paper (max sum 1/p) or min-cost")
        ->check(CLI::IsMember({"paper", "min-cost"}));
    cmd->add_option("--format", o.format, "table, json or csv")->check(formats);
    cmd->add_option("--emit-svg", o.svg, "Write a cost comparison bar chart");
    cmd->add_option("--model", o.models, "Model file (repeatable, one per stage)")
        ->allow_extra_args(false)
        ->check(CLI::ExistingFile);
    cmd->add_option("--model-dir", o.model_dir, "Directory with <stage>.model files")->check(CLI::ExistingDirectory);
    cmd->add_option("--driver-pins", o.driver_pins, "Comma-separated Verilog pin names that drive a net")
        ->delimiter(',')
        ->allow_extra_args(false);
    cmd->add_option("--seed", o.seed, "Unused by the solver; accepted for scripted runs");
  };
  auto* optimize = app.add_subcommand("optimize", "Choose machines per stage from literal or predicted runtimes");
  add_plan_flags(optimize);
  optimize->add_option("--runtimes", o.runtimes, "Runtimes JSON (optionally with literal costs)")
      ->check(CLI::ExistingFile);
  optimize->add_option("designs", o.designs, "Designs when runtimes come from models")->check(CLI::ExistingFile);

  auto* plan = app.add_subcommand("plan", "End to end: parse designs, predict, price and optimize");
  add_plan_flags(plan);
  plan->add_option("designs", o.designs, "An AIG (synthesis) and a netlist (physical stages)")
      ->required()
      ->check(CLI::ExistingFile);

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic labeled dataset");
  gen->add_option("--application", o.application, "synthesis, placement, routing or sta")->required();
  gen->add_option("--graphs", o.graphs, "Number of designs (>= 10)")->check(CLI::Range(10, 1000000));
  gen->add_option("--seed", o.seed, "Dataset seed");
  gen->add_option("--sizes", o.sizes, "Comma-separated size classes cycled over designs");
  gen->add_option("--noise", o.noise, "Relative runtime noise")->check(CLI::Range(0.0, 0.99));
  gen->add_option("--out-dir", o.out_dir, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto log = make_logger(err);
  try {
    if (*parse) return cmd_parse(o, out);
    if (*train) return cmd_train(o, out, *log);
    if (*predict) return cmd_predict(o, out);
    if (*optimize) return cmd_optimize(o, out, *log);
    if (*plan) return cmd_plan(o, out, *log);
    if (*gen) return cmd_gen_data(o, out);
  } catch (const ContractViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace edaplan::cli
