#include "wpgg/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wpgg {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::FrameworkPGG: return "framework_pgg";
    case Scenario::InfoDissemination: return "info_dissemination";
    case Scenario::ContentDownload: return "content_download";
  }
  return "unknown";
}

std::string to_string(TerminationCause c) {
  switch (c) {
    case TerminationCause::AllSameStrategy: return "all_same_strategy";
    case TerminationCause::DisseminationComplete: return "dissemination_complete";
    case TerminationCause::MaxSlots: return "max_slots";
  }
  return "unknown";
}

SimConfig SimConfig::defaults(Scenario scenario) {
  SimConfig cfg;
  cfg.scenario = scenario;
  switch (scenario) {
    case Scenario::FrameworkPGG:
      cfg.mobility = RandomDirection{0.0};
      cfg.game.variant = GameVariant::WirelessFramework;
      break;
    case Scenario::InfoDissemination:
      cfg.mobility = RandomDirection{0.0};
      cfg.game.variant = GameVariant::Dissemination;
      break;
    case Scenario::ContentDownload:
      cfg.n_nodes = 400;
      cfg.mobility = LevyWalk{LevyParams{}};
      cfg.connectivity = QuasiUnitDisk{};
      cfg.game.variant = GameVariant::Dissemination;
      cfg.game.sigma = 0.1;
      cfg.max_slots = 300;
      break;
  }
  return cfg;
}

double SimConfig::velocity() const {
  if (const auto* rd = std::get_if<RandomDirection>(&mobility)) return rd->velocity;
  if (const auto* lw = std::get_if<LevyWalk>(&mobility)) return lw->params.velocity;
  return 0.0;
}

void SimConfig::validate() const {
  if (n_nodes == 0) throw std::invalid_argument("number_of_nodes must be >= 1");
  arena.validate();
  wpgg::validate(mobility);
  wpgg::validate(connectivity);
  game.validate();
  if (eta && !(*eta >= 0.0)) throw std::invalid_argument("eta must be >= 0");
  if (!(initial_coop_ratio >= 0.0 && initial_coop_ratio <= 1.0)) {
    throw std::invalid_argument("initial_cooperator_ratio must lie in [0, 1]");
  }
  if (max_slots == 0) throw std::invalid_argument("max_slots must be >= 1");
  switch (scenario) {
    case Scenario::FrameworkPGG:
      if (game.variant == GameVariant::Dissemination) {
        throw std::invalid_argument("framework_pgg cannot use the dissemination game");
      }
      break;
    case Scenario::InfoDissemination:
      if (n_sources == 0 || n_sources > n_nodes) {
        throw std::invalid_argument("number_of_sources must lie in [1, number_of_nodes]");
      }
      break;
    case Scenario::ContentDownload:
      if (n_seeders == 0 || n_seeders > n_nodes) {
        throw std::invalid_argument("number_of_seeders must lie in [1, number_of_nodes]");
      }
      if (packets == 0) throw std::invalid_argument("buffer_size must be >= 1");
      break;
  }
  if (has_packets() && game.variant != GameVariant::Dissemination) {
    throw std::invalid_argument("packet scenarios require the dissemination game");
  }
}

double RunResult::delivered_fraction() const {
  if (packets == 0 || final_received.empty()) return 0.0;
  const double total = static_cast<double>(packets) * static_cast<double>(final_received.size());
  return 1.0 - static_cast<double>(final_pending()) / total;
}

std::optional<TerminationCause> check_termination(World& world) {
  const SimConfig& cfg = *world.config;
  const auto& s = world.strategies;
  if (cfg.has_packets() && world.pending == 0) return TerminationCause::DisseminationComplete;

  std::size_t free_nodes = 0;
  std::size_t free_coop = 0;
  bool frozen_coop = false;
  for (NodeId i = 0; i < s.size(); ++i) {
    if (s.frozen(i)) {
      frozen_coop = frozen_coop || s.cooperates(i);
      continue;
    }
    ++free_nodes;
    free_coop += s.cooperates(i) ? 1 : 0;
  }

  bool absorbed = false;
  bool stalling = false;
  if (free_nodes > 0) {
    if (!cfg.has_packets()) {
      absorbed = free_coop == 0 || free_coop == free_nodes;
    } else if (free_coop == 0 && !frozen_coop) {
      absorbed = true;
    } else if (free_coop == 0) {
      // All free nodes defect next to frozen cooperators: stalled once no
      // defector is still being served by a cooperator or sees one earning
      // more than itself.
      const auto& g = world.graph;
      bool active = false;
      for (NodeId i = 0; i < g.size() && !active; ++i) {
        if (s.frozen(i)) continue;
        const auto nb = g.neighbors(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
          if (!s.cooperates(nb[k])) continue;
          if (world.usefulness[g.offset(i) + k] || world.payoffs[nb[k]] > world.payoffs[i]) {
            active = true;
            break;
          }
        }
      }
      stalling = !active;
    }
  }
  world.stalled_slots = stalling ? world.stalled_slots + 1 : 0;
  absorbed = absorbed || (stalling && world.stalled_slots >= cfg.settle_slots);
  if (absorbed) return TerminationCause::AllSameStrategy;
  if (world.slot >= cfg.max_slots) return TerminationCause::MaxSlots;
  return std::nullopt;
}

namespace {

void move_nodes(World& world, Rng& rng) {
  const SimConfig& cfg = *world.config;
  if (const auto* rd = std::get_if<RandomDirection>(&cfg.mobility)) {
    for (auto& p : world.positions) p = step_random_direction(p, rd->velocity, rng, cfg.arena);
  } else if (const auto* lw = std::get_if<LevyWalk>(&cfg.mobility)) {
    for (std::size_t i = 0; i < world.positions.size(); ++i) {
      world.positions[i] = step_levy(world.walkers[i], world.positions[i], lw->params, rng, cfg.arena);
    }
  }
}

bool graph_is_fixed(const SimConfig& cfg) {
  const bool still = std::holds_alternative<StaticMobility>(cfg.mobility) || cfg.velocity() == 0.0;
  return still && std::holds_alternative<UnitDisk>(cfg.connectivity);
}

}  // namespace

RunResult run(const SimConfig& config) {
  config.validate();
  Rng rng(config.seed);
  World world;
  world.config = &config;
  world.positions = place_uniform(config.n_nodes, config.arena, rng);
  world.walkers.assign(config.n_nodes, LevyState{});

  switch (config.scenario) {
    case Scenario::FrameworkPGG: {
      world.strategies = StrategyProfile(config.n_nodes);
      for (NodeId i = 0; i < config.n_nodes; ++i) {
        if (rng.bernoulli(config.initial_coop_ratio)) world.strategies.set(i, Strategy::Cooperator);
      }
      break;
    }
    case Scenario::InfoDissemination: {
      auto setup = init_sources(config.n_nodes, config.n_sources, rng);
      world.packets = setup.packets;
      world.buffers = std::move(setup.buffers);
      world.strategies = std::move(setup.strategies);
      world.seeder = std::move(setup.seeder);
      world.unfreeze_after_send.assign(config.n_nodes, 0);
      for (NodeId s : setup.origins) world.unfreeze_after_send[s] = 1;
      break;
    }
    case Scenario::ContentDownload: {
      auto setup = init_seeders(config.n_nodes, config.n_seeders, config.packets,
                                config.initial_coop_ratio, rng);
      world.packets = setup.packets;
      world.buffers = std::move(setup.buffers);
      world.strategies = std::move(setup.strategies);
      world.seeder = std::move(setup.seeder);
      break;
    }
  }

  RunResult result;
  result.packets = world.packets;
  if (config.has_packets()) {
    world.pending = pending_packets(world.buffers, world.packets);
    result.initial_pending = world.pending;
  }
  result.accumulated_payoff.assign(config.n_nodes, 0.0);
  GameParams game = config.game;
  const bool fixed_graph = graph_is_fixed(config);

  for (std::size_t t = 0; t < config.max_slots; ++t) {
    if (t > 0) move_nodes(world, rng);
    if (t == 0 || !fixed_graph) world.graph = connect(world.positions, config.connectivity, config.arena, rng);
    if (t == 0) {
      result.initial_mean_degree = world.graph.mean_degree();
      if (config.eta) game.r = synergy_from_normalized(*config.eta, result.initial_mean_degree);
      result.r = game.r;
      result.eta = normalized_synergy(game.r, result.initial_mean_degree);
    }

    std::size_t delivered = 0;
    if (config.has_packets()) {
      auto outcome = broadcast_step(world.graph, world.strategies, world.buffers, world.seeder, rng);
      delivered = outcome.receptions.size();
      world.pending -= delivered;
      world.usefulness = std::move(outcome.usefulness);
      for (NodeId i = 0; i < config.n_nodes; ++i) {
        // Sources stay frozen through the update of the slot they first transmit in.
        if (!world.unfreeze_after_send.empty() && world.unfreeze_after_send[i] == 1 && outcome.sent[i]) {
          world.unfreeze_after_send[i] = 2;
        }
      }
    } else {
      world.usefulness.clear();
    }

    world.payoffs = compute_payoffs(world.graph, world.strategies, world.usefulness, game, rng);
    for (std::size_t i = 0; i < config.n_nodes; ++i) result.accumulated_payoff[i] += world.payoffs[i];
    world.strategies = strategy_update(world.graph, world.strategies, world.payoffs, game, rng);
    for (NodeId i = 0; i < world.unfreeze_after_send.size(); ++i) {
      if (world.unfreeze_after_send[i] == 2) {
        world.unfreeze_after_send[i] = 0;
        world.strategies.freeze(i, false);
      }
    }

    world.slot = t + 1;
    result.coop_fraction.push_back(world.strategies.cooperator_fraction());
    if (config.has_packets()) {
      result.pending.push_back(world.pending);
      result.deliveries.push_back(delivered);
    }
    if (auto cause = check_termination(world)) {
      result.cause = *cause;
      break;
    }
  }

  result.slots = world.slot;
  if (config.has_packets()) {
    result.final_received.reserve(config.n_nodes);
    for (const auto& b : world.buffers) result.final_received.push_back(b.received.count());
  }
  return result;
}

double steady_state_fraction(const RunResult& result, std::optional<std::size_t> window) {
  const std::size_t n = result.coop_fraction.size();
  if (n == 0) throw std::invalid_argument("run has no slots");
  if (result.cause == TerminationCause::AllSameStrategy) return result.coop_fraction.back();
  std::size_t w = window.value_or(std::min(n, std::max<std::size_t>(10, n / 10)));
  if (w == 0 || w > n) throw std::invalid_argument("window must lie in [1, slots elapsed]");
  const double sum = std::accumulate(result.coop_fraction.end() - static_cast<std::ptrdiff_t>(w),
                                     result.coop_fraction.end(), 0.0);
  return sum / static_cast<double>(w);
}

}  // namespace wpgg
