#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpgg/config.hpp"
#include "wpgg/engine.hpp"

namespace wpgg {

/// One line of results.csv.
struct ResultRow {
  std::string run_id;
  std::size_t cell = 0;
  std::size_t replicate = 0;
  Scenario scenario = Scenario::FrameworkPGG;
  double r = 0.0;
  double eta = 0.0;
  double mean_degree = 0.0;  // <k> of the slot-0 graph
  double velocity = 0.0;
  std::size_t seeders = 0;  // 0 outside content_download
  std::size_t packets = 0;  // M; 0 for framework_pgg
  std::uint64_t seed = 0;
  std::size_t slots = 0;
  TerminationCause cause = TerminationCause::MaxSlots;
  double steady_coop_fraction = 0.0;
  std::size_t pending_final = 0;
  double delivered_fraction = 0.0;
};

struct RunRecord {
  ResultRow row;
  RunResult result;
};

struct RunFailure {
  std::size_t cell = 0;
  std::size_t replicate = 0;
  std::string cell_key;
  std::string message;
};

struct SweepResult {
  std::vector<Cell> cells;
  std::vector<RunRecord> runs;  // sorted by (cell, replicate)
  std::vector<RunFailure> failures;
};

/// Runs every cell x replicate on up to `parallelism` threads. The result is
/// independent of the thread count; a failing run is recorded and the other
/// runs proceed.
SweepResult run_sweep(const SweepSpec& spec, std::size_t parallelism = 1);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(n); 0 for n < 2
};

MeanSe mean_and_se(const std::vector<double>& values);

struct CellSummary {
  Cell cell;
  std::size_t runs = 0;
  MeanSe steady_coop_fraction;
  MeanSe delivered_fraction;
  MeanSe pending_final;
  MeanSe eta;
  MeanSe slots;
};

std::vector<CellSummary> summarize(const SweepResult& sweep);

/// Pooled per-node received-count ECDF of one cell over its successful
/// replicates; empty when the cell has no runs with packets.
std::vector<double> pooled_ecdf(const SweepResult& sweep, std::size_t cell);

}  // namespace wpgg
