#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wpgg/dissemination.hpp"
#include "wpgg/game.hpp"
#include "wpgg/spatial.hpp"

namespace wpgg {

enum class Scenario {
  FrameworkPGG,       // strategies only, no packets
  InfoDissemination,  // sources each originate one packet
  ContentDownload,    // seeders hold all M packets
};

enum class TerminationCause { AllSameStrategy, DisseminationComplete, MaxSlots };

std::string to_string(Scenario s);
std::string to_string(TerminationCause c);

struct SimConfig {
  Scenario scenario = Scenario::FrameworkPGG;
  std::size_t n_nodes = 300;
  ArenaConfig arena;
  MobilityModel mobility = StaticMobility{};
  ConnectivityModel connectivity = UnitDisk{75.0};
  GameParams game;
  /// When set, r is derived per run as eta * (<k> + 1) on the slot-0 graph.
  std::optional<double> eta;
  std::size_t n_sources = 50;
  std::size_t n_seeders = 30;
  std::size_t packets = 50;  // M for ContentDownload; equals n_sources otherwise
  double initial_coop_ratio = 0.5;
  std::size_t max_slots = 5000;
  /// Consecutive stalled slots required before an all-defector state next to
  /// frozen cooperators counts as AllSameStrategy.
  std::size_t settle_slots = 50;
  std::uint64_t seed = 1;

  /// Scenario defaults; ContentDownload uses the 400-node Lévy/QUDG setup.
  static SimConfig defaults(Scenario scenario);
  void validate() const;
  bool has_packets() const { return scenario != Scenario::FrameworkPGG; }
  double velocity() const;
};

struct RunResult {
  std::vector<double> coop_fraction;    // f_C after each slot
  std::vector<std::size_t> pending;     // pending packets after each slot
  std::vector<std::size_t> deliveries;  // new receptions in each slot
  TerminationCause cause = TerminationCause::MaxSlots;
  std::size_t slots = 0;
  double initial_mean_degree = 0.0;
  double r = 0.0;    // synergy factor actually used
  double eta = 0.0;  // r / (<k>_0 + 1)
  std::size_t packets = 0;
  std::size_t initial_pending = 0;
  std::vector<std::size_t> final_received;  // per node; empty without packets
  std::vector<double> accumulated_payoff;   // per node, sum over slots

  double final_coop_fraction() const { return coop_fraction.empty() ? 0.0 : coop_fraction.back(); }
  double delivered_fraction() const;
  std::size_t final_pending() const { return pending.empty() ? initial_pending : pending.back(); }

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Mutable state of one run, exposed for termination checks and tests.
struct World {
  const SimConfig* config = nullptr;
  std::vector<Position> positions;
  std::vector<LevyState> walkers;
  NeighborGraph graph;
  StrategyProfile strategies;
  std::vector<NodeBuffer> buffers;
  std::vector<std::uint8_t> seeder;
  std::vector<std::uint8_t> unfreeze_after_send;  // sources awaiting their first transmission
  PayoffVector payoffs;
  Usefulness usefulness;
  std::size_t packets = 0;
  std::size_t pending = 0;
  std::size_t slot = 0;         // slots completed
  std::size_t stalled_slots = 0;
};

/// AllSameStrategy, DisseminationComplete or MaxSlots once `world.slot`
/// slots have been processed; nothing while the run should continue.
/// Updates `world.stalled_slots`.
std::optional<TerminationCause> check_termination(World& world);

/// Per slot: mobility (from slot 1), graph, broadcast, payoffs, synchronous
/// update, metrics, termination. Deterministic in `config.seed`.
RunResult run(const SimConfig& config);

/// Mean f_C over the trailing window (default: 10% of slots, at least 10,
/// capped at the run length). A run absorbed in AllSameStrategy reports its
/// final fraction.
double steady_state_fraction(const RunResult& result,
                             std::optional<std::size_t> window = std::nullopt);

}  // namespace wpgg
