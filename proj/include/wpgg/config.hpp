#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wpgg/engine.hpp"

namespace wpgg {

/// Values swept over; every axis holds at least one value. Cells are the
/// Cartesian product in the order synergy x velocity x seeders x packets.
struct SweepAxes {
  bool normalized_synergy = false;  // `synergy` holds eta rather than r
  std::vector<double> synergy;
  std::vector<double> velocity;
  std::vector<std::size_t> seeders;
  std::vector<std::size_t> packets;
};

struct SweepSpec {
  SimConfig base;
  SweepAxes axes;
  std::size_t replicates = 1;
  std::uint64_t master_seed = 1;

  std::size_t cell_count() const;
  bool is_single_cell() const { return cell_count() == 1; }
  void validate() const;
};

/// One point of the sweep grid. `key` is a canonical text form of the
/// coordinates, used to derive replicate seeds.
struct Cell {
  std::size_t index = 0;
  double synergy = 0.0;
  double velocity = 0.0;
  std::size_t seeders = 0;
  std::size_t packets = 0;
  std::string key;
};

std::vector<Cell> expand_cells(const SweepSpec& spec);

/// Base config with the cell's coordinates applied (seed untouched).
SimConfig cell_config(const SweepSpec& spec, const Cell& cell);

/// Seed of replicate `replicate` in `cell`; independent of the other axes' values.
std::uint64_t replicate_seed(const SweepSpec& spec, const Cell& cell, std::size_t replicate);

/// Parse or validation failure; `problems` lists every issue found, each
/// prefixed with its line and key when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Parses a flat YAML mapping. Keys are the model parameter names
/// (number_of_nodes, number_of_seeders, buffer_size, alpha, beta, velocity,
/// zeta, r_inner, r_outer, initial_cooperator_ratio, noise_variance, ...).
/// `scenario` is required; synergy_factor, eta, velocity, number_of_seeders
/// and buffer_size accept a list to form a sweep axis. Unknown keys are
/// rejected.
SweepSpec parse_config(std::string_view text);
SweepSpec load_config(const std::filesystem::path& path);

/// Names of all accepted configuration keys.
const std::vector<std::string>& config_keys();

Scenario parse_scenario(std::string_view name);
GameVariant parse_game_variant(std::string_view name);
std::string to_string(GameVariant v);

}  // namespace wpgg
