#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wpgg/analytics.hpp"
#include "wpgg/config.hpp"
#include "wpgg/sweep.hpp"

namespace wpgg {

/// RFC-4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

std::string format_number(double v);

std::string results_csv(const SweepResult& sweep);
std::string timeseries_csv(const SweepResult& sweep);
std::string ecdf_csv(const SweepResult& sweep);
std::string meeting_csv(const std::vector<analytics::MeetingRow>& rows);
std::string summary_json(const SweepSpec& spec, const SweepResult& sweep);

struct OutputOptions {
  std::uint64_t meeting_samples = 100000;
};

/// Writes results.csv, timeseries.csv, ecdf.csv, meeting.csv and
/// summary.json into `out_dir` (created if missing). meeting.csv uses the
/// connectivity reach as rad, half the shorter arena side as R and the
/// velocity axis. Throws std::runtime_error when a file cannot be written.
void emit_outputs(const SweepSpec& spec, const SweepResult& sweep,
                  const std::filesystem::path& out_dir, const OutputOptions& options = {});

}  // namespace wpgg
