// gibbslab: equilibrium states of full shifts via truncated transfer
// operators, plus Monte Carlo experiments on their concentration properties.
//
// Subcommands: spectral, sample, run <experiment>, report.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gibbslab/errors.hpp"
#include "gibbslab/experiments.hpp"
#include "gibbslab/io.hpp"

namespace fs = std::filesystem;
using namespace gibbslab;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_flags_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  bool out_dir_set = false;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const std::exception&) {
    return json(text);  // bare strings allowed unquoted
  }
}

void apply_override(json& config, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw config_error("override '" + spec + "' is not key=value");
  const std::string key = spec.substr(0, eq);
  const json value = parse_override_value(spec.substr(eq + 1));
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw config_error("override '" + spec + "' has an empty key segment");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

json load_config(const CliOptions& opts) {
  json config = json::object();
  if (!opts.config_path.empty()) {
    config = read_json_file(opts.config_path);
    // a manifest reproduces its run
    if (config.is_object() && config.contains("command") && config.contains("config"))
      config = config["config"];
  }
  for (const std::string& ov : opts.overrides) apply_override(config, ov);
  if (opts.seed) config["seed"] = *opts.seed;
  if (opts.threads) config["threads"] = *opts.threads;
  return config;
}

ExperimentConfig experiment_config(const json& config) {
  check_keys(config,
             {"potential", "theta", "depth", "order", "seed", "threads", "out", "spectral",
              "experiment", "sample", "params"},
             "config");
  ExperimentConfig cfg;
  if (config.contains("potential")) cfg.potential = potential_from_json(config["potential"]);
  if (config.contains("theta")) cfg.potential.set_theta(config["theta"].get<double>());
  cfg.depth = config.value("depth", default_depth(cfg.potential.alphabet()));
  cfg.order = config.value("order", 4);
  cfg.seed = config.value("seed", std::uint64_t{1});
  cfg.threads = config.value("threads", 1);
  if (config.contains("spectral")) {
    check_keys(config["spectral"], {"tol", "max_iter"}, "spectral");
    cfg.spectral_tol = config["spectral"].value("tol", 1e-13);
    cfg.spectral_max_iter = config["spectral"].value("max_iter", 200000);
  }
  cfg.params = json::object();
  if (config.contains("experiment")) {
    json params = config["experiment"];
    if (!params.is_object()) throw config_error("experiment section must be a JSON object");
    params.erase("id");
    cfg.params = params;
  }
  return cfg;
}

fs::path resolve_out_dir(const CliOptions& opts, const json& config) {
  if (const char* env = std::getenv("GIBBSLAB_OUT"); env && *env) return fs::path(env);
  if (opts.out_dir_set) return fs::path(opts.out_dir);
  if (config.contains("out")) return fs::path(config["out"].get<std::string>());
  return fs::path(opts.out_dir);
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["timestamp"] = iso8601_now();
  write_json_file(out_dir / "manifest.json", manifest);
}

json resolved_config_json(const ExperimentConfig& cfg, const json& original) {
  json j = cfg.resolved();
  if (original.contains("experiment")) j["experiment"] = original["experiment"];
  if (original.contains("sample")) j["sample"] = original["sample"];
  return j;
}

int cmd_spectral(const CliOptions& opts) {
  const json config = load_config(opts);
  const ExperimentConfig cfg = experiment_config(config);
  const fs::path out_dir = resolve_out_dir(opts, config);
  fs::create_directories(out_dir);

  const TransferMatrix m = build_transfer(cfg.potential, cfg.depth);
  SpectralData s = spectral_solve(m, cfg.spectral_tol, cfg.spectral_max_iter);
  s.theta = cfg.potential.theta();

  json provenance = cfg.resolved();
  provenance["command"] = "spectral";
  json out = spectral_to_json(s);
  out["potential"] = potential_to_json(cfg.potential);
  write_json_file(out_dir / "spectral.json", out);
  write_mu_csv(out_dir / "mu.csv", s, provenance);
  write_manifest(out_dir, "spectral", resolved_config_json(cfg, config));
  std::cout << "lambda=" << format_double(s.lambda) << " pressure=" << format_double(s.pressure)
            << " residual=" << format_double(s.residual) << " depth=" << s.depth << "\n";
  return exit_ok;
}

int cmd_sample(const CliOptions& opts) {
  const json config = load_config(opts);
  const ExperimentConfig cfg = experiment_config(config);
  std::size_t count = 10, length = 1000;
  if (config.contains("sample")) {
    check_keys(config["sample"], {"count", "length"}, "sample");
    count = config["sample"].value("count", count);
    length = config["sample"].value("length", length);
  }
  const fs::path out_dir = resolve_out_dir(opts, config);
  fs::create_directories(out_dir);

  const TransferMatrix m = build_transfer(cfg.potential, cfg.depth);
  SpectralData s = spectral_solve(m, cfg.spectral_tol, cfg.spectral_max_iter);
  s.theta = cfg.potential.theta();
  const MarkovModel model = markov_from_equilibrium(s, cfg.order);

  std::vector<Trajectory> paths;
  paths.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    paths.push_back(sample_path(model, length, derive_stream(cfg.seed, i)));
  write_paths_text(out_dir / "paths.txt", paths, model.alphabet);
  write_manifest(out_dir, "sample", resolved_config_json(cfg, config));
  std::cout << "wrote " << count << " paths of length " << length << " (order " << cfg.order
            << ", seed " << cfg.seed << ")\n";
  return exit_ok;
}

int cmd_run(const std::string& id, const CliOptions& opts) {
  const json config = load_config(opts);
  ExperimentConfig cfg = experiment_config(config);
  const fs::path out_dir = resolve_out_dir(opts, config);
  fs::create_directories(out_dir);

  const ExperimentResult result = run_experiment(id, cfg);
  write_experiment_outputs(result, cfg, out_dir);
  json manifest_config = resolved_config_json(cfg, config);
  manifest_config["experiment"]["id"] = id;
  write_manifest(out_dir, "run " + id, manifest_config);
  std::cout << result.id << ": " << (result.flags_ok ? "all flags ok" : "FLAGS FAILED") << "\n";
  for (const auto& [key, value] : result.summary.items())
    std::cout << "  " << key << " = " << value.dump() << "\n";
  return result.flags_ok ? exit_ok : exit_flags_failed;
}

int cmd_report(const CliOptions& opts) {
  const json config = load_config(opts);
  const fs::path out_dir = resolve_out_dir(opts, config);
  if (!fs::exists(out_dir)) throw config_error("output directory " + out_dir.string() + " not found");
  std::size_t failures = 0, tables = 0;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(out_dir))
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    const CsvFile csv = read_table_csv(p);  // refuses unprovenanced tables
    ++tables;
    std::size_t bad = 0;
    for (std::size_t c = 0; c < csv.columns.size(); ++c) {
      if (csv.columns[c] != "ok" && csv.columns[c] != "flag") continue;
      for (const auto& row : csv.rows)
        if (row[c] == 0.0) ++bad;
    }
    failures += bad;
    std::cout << p.filename().string() << ": " << csv.rows.size() << " rows";
    if (bad) std::cout << ", " << bad << " failed flags";
    std::cout << "\n";
  }
  std::cout << tables << " tables, " << failures << " failed flags\n";
  return failures == 0 ? exit_ok : exit_flags_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium states of full shifts and their concentration properties"};
  app.require_subcommand(1);

  CliOptions opts;
  app.add_option("--config", opts.config_path, "JSON config (or manifest) path");
  auto* out_opt = app.add_option("--out", opts.out_dir, "output directory");
  app.add_option("--seed", opts.seed, "seed override");
  app.add_option("--threads", opts.threads, "worker cap for sample loops");
  app.add_option("--set", opts.overrides, "dotted-key config overrides (key=value)");

  auto* spectral = app.add_subcommand("spectral", "solve the truncated transfer operator");
  auto* sample = app.add_subcommand("sample", "sample trajectories from the markov approximation");
  auto* run = app.add_subcommand("run", "run a named experiment");
  std::string experiment_id;
  run->add_option("experiment", experiment_id, "experiment id")->required();
  auto* report = app.add_subcommand("report", "aggregate tables in the output directory");
  for (auto* sub : {spectral, sample, run, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? exit_config : exit_ok;
  }
  opts.out_dir_set = out_opt->count() > 0;

  try {
    if (spectral->parsed()) return cmd_spectral(opts);
    if (sample->parsed()) return cmd_sample(opts);
    if (run->parsed()) return cmd_run(experiment_id, opts);
    if (report->parsed()) return cmd_report(opts);
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << " (residual " << e.last_residual << ")\n";
    return exit_numeric;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  return exit_config;
}
