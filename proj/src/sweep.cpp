#include "wpgg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include <fmt/format.h>

namespace wpgg {

namespace {

ResultRow make_row(const SweepSpec& spec, const Cell& cell, std::size_t replicate,
                   std::uint64_t seed, const RunResult& result) {
  ResultRow row;
  row.run_id = fmt::format("c{:04d}-r{:04d}", cell.index, replicate);
  row.cell = cell.index;
  row.replicate = replicate;
  row.scenario = spec.base.scenario;
  row.r = result.r;
  row.eta = result.eta;
  row.mean_degree = result.initial_mean_degree;
  row.velocity = cell.velocity;
  row.seeders = spec.base.scenario == Scenario::ContentDownload ? cell.seeders : 0;
  row.packets = result.packets;
  row.seed = seed;
  row.slots = result.slots;
  row.cause = result.cause;
  row.steady_coop_fraction = steady_state_fraction(result);
  row.pending_final = result.final_pending();
  row.delivered_fraction = result.delivered_fraction();
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, std::size_t parallelism) {
  spec.validate();
  SweepResult out;
  out.cells = expand_cells(spec);
  const std::size_t jobs = out.cells.size() * spec.replicates;

  std::vector<std::optional<RunRecord>> records(jobs);
  std::vector<std::optional<RunFailure>> failures(jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const Cell& cell = out.cells[job / spec.replicates];
      const std::size_t replicate = job % spec.replicates;
      try {
        SimConfig cfg = cell_config(spec, cell);
        cfg.seed = replicate_seed(spec, cell, replicate);
        RunResult result = run(cfg);
        ResultRow row = make_row(spec, cell, replicate, cfg.seed, result);
        records[job] = RunRecord{std::move(row), std::move(result)};
      } catch (const std::exception& e) {
        failures[job] = RunFailure{cell.index, replicate, cell.key, e.what()};
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(jobs, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t job = 0; job < jobs; ++job) {
    if (records[job]) out.runs.push_back(std::move(*records[job]));
    if (failures[job]) out.failures.push_back(std::move(*failures[job]));
  }
  return out;
}

MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

std::vector<CellSummary> summarize(const SweepResult& sweep) {
  std::vector<CellSummary> out;
  for (const auto& cell : sweep.cells) {
    std::vector<double> fc, delivered, pending, eta, slots;
    for (const auto& rec : sweep.runs) {
      if (rec.row.cell != cell.index) continue;
      fc.push_back(rec.row.steady_coop_fraction);
      delivered.push_back(rec.row.delivered_fraction);
      pending.push_back(static_cast<double>(rec.row.pending_final));
      eta.push_back(rec.row.eta);
      slots.push_back(static_cast<double>(rec.row.slots));
    }
    CellSummary s;
    s.cell = cell;
    s.runs = fc.size();
    s.steady_coop_fraction = mean_and_se(fc);
    s.delivered_fraction = mean_and_se(delivered);
    s.pending_final = mean_and_se(pending);
    s.eta = mean_and_se(eta);
    s.slots = mean_and_se(slots);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> pooled_ecdf(const SweepResult& sweep, std::size_t cell) {
  std::vector<std::size_t> histogram;
  std::size_t nodes = 0;
  for (const auto& rec : sweep.runs) {
    if (rec.row.cell != cell || rec.result.final_received.empty()) continue;
    histogram.resize(std::max(histogram.size(), rec.result.packets + 1), 0);
    for (std::size_t count : rec.result.final_received) ++histogram[count];
    nodes += rec.result.final_received.size();
  }
  std::vector<double> ecdf(histogram.size());
  std::size_t cumulative = 0;
  for (std::size_t k = 0; k < histogram.size(); ++k) {
    cumulative += histogram[k];
    ecdf[k] = static_cast<double>(cumulative) / static_cast<double>(nodes);
  }
  return ecdf;
}

}  // namespace wpgg
