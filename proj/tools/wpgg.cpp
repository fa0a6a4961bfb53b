// Command-line front end: single runs, sweeps and meeting-probability tables.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wpgg/analytics.hpp"
#include "wpgg/config.hpp"
#include "wpgg/output.hpp"
#include "wpgg/sweep.hpp"

namespace {

struct CliError : std::runtime_error {
  CliError(std::string code, const std::string& message)
      : std::runtime_error(message), code(std::move(code)) {}
  std::string code;
};

int report(const std::string& code, const std::string& message,
           const std::vector<std::string>& problems = {}) {
  nlohmann::json line = {{"code", code}, {"message", message}};
  if (!problems.empty()) line["problems"] = problems;
  std::cerr << "error: " << line.dump() << "\n";
  return 2;
}

struct RunOptions {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::size_t parallelism = 1;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--config", opts.config, "YAML configuration file")->required();
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_option("--seed", opts.seed, "master seed (overrides the config)");
  cmd->add_option("--replicates", opts.replicates, "replicates per cell")->check(CLI::PositiveNumber);
  cmd->add_option("--parallelism", opts.parallelism, "worker threads")->check(CLI::PositiveNumber);
}

std::string fmt_summary(std::size_t runs, std::size_t failures, const std::string& out) {
  return std::to_string(runs) + " runs, " + std::to_string(failures) + " failed; outputs in " + out +
         "\n";
}

int execute(const RunOptions& opts, bool single) {
  wpgg::SweepSpec spec = wpgg::load_config(opts.config);
  if (opts.seed) spec.master_seed = *opts.seed;
  if (opts.replicates) spec.replicates = *opts.replicates;
  if (single && !spec.is_single_cell()) {
    throw CliError("multi_cell_config",
                   "run expects a single-cell config; use sweep for list-valued axes");
  }
  const wpgg::SweepResult result = wpgg::run_sweep(spec, opts.parallelism);
  if (result.runs.empty()) {
    throw CliError("all_runs_failed",
                   result.failures.empty() ? "no runs" : result.failures.front().message);
  }
  wpgg::emit_outputs(spec, result, opts.out);
  std::cout << fmt_summary(result.runs.size(), result.failures.size(), opts.out);
  return result.failures.empty() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Public-goods games on wireless neighbor graphs"};
  app.require_subcommand(1);

  RunOptions run_opts;
  RunOptions sweep_opts;
  add_run_options(app.add_subcommand("run", "simulate one parameter cell"), run_opts);
  add_run_options(app.add_subcommand("sweep", "simulate every cell of the config's axes"), sweep_opts);

  auto* analytics = app.add_subcommand("analytics", "closed-form and Monte-Carlo analytics");
  analytics->require_subcommand(1);
  auto* fig4 = analytics->add_subcommand("fig4", "old/new neighbor fractions against velocity");
  double rad = 75.0;
  double region = 500.0;
  std::vector<double> velocities;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string out;
  fig4->add_option("--rad", rad, "radio range")->required();
  fig4->add_option("--R", region, "region radius")->required();
  fig4->add_option("--v", velocities, "velocities")->required()->delimiter(',');
  fig4->add_option("--samples", samples, "Monte-Carlo samples per velocity");
  fig4->add_option("--seed", seed, "Monte-Carlo seed");
  fig4->add_option("--out", out, "write meeting.csv here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what());
  }

  try {
    if (app.got_subcommand("run")) return execute(run_opts, true);
    if (app.got_subcommand("sweep")) return execute(sweep_opts, false);

    const auto rows = wpgg::analytics::meeting_table(rad, region, velocities, samples, seed);
    const std::string csv = wpgg::meeting_csv(rows);
    if (out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream file(out, std::ios::binary);
      if (!(file << csv)) throw CliError("io", "cannot write '" + out + "'");
    }
    return 0;
  } catch (const wpgg::ConfigError& e) {
    return report("config", e.what(), e.problems());
  } catch (const CliError& e) {
    return report(e.code, e.what());
  } catch (const std::invalid_argument& e) {
    return report("invalid_argument", e.what());
  } catch (const std::exception& e) {
    return report("runtime", e.what());
  }
}
