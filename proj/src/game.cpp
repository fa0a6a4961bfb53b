#include "wpgg/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpgg {

std::size_t StrategyProfile::cooperators() const {
  return static_cast<std::size_t>(
      std::count(values_.begin(), values_.end(), Strategy::Cooperator));
}

double StrategyProfile::cooperator_fraction() const {
  if (values_.empty()) return 0.0;
  return static_cast<double>(cooperators()) / static_cast<double>(values_.size());
}

void GameParams::validate() const {
  if (!(r >= 0.0)) throw std::invalid_argument("synergy factor r must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("cost c must be > 0");
  if (!(kappa > 0.0)) throw std::invalid_argument("selection intensity kappa must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
}

double fermi_probability(double pi_i, double pi_j, double kappa) {
  const double z = (pi_i - pi_j) / kappa;
  if (std::isnan(z)) return 0.5;
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double normalized_synergy(double r, double mean_degree) { return r / (mean_degree + 1.0); }

double synergy_from_normalized(double eta, double mean_degree) { return eta * (mean_degree + 1.0); }

double payoff_classical_fixed(std::size_t group_size, std::size_t cooperators, double r, double c,
                              bool is_cooperator) {
  if (group_size == 0 || cooperators > group_size) {
    throw std::invalid_argument("need 0 <= cooperators <= group_size and group_size >= 1");
  }
  const double share =
      r * (static_cast<double>(cooperators) / static_cast<double>(group_size)) * c;
  return is_cooperator ? share - c : share;
}

PayoffVector payoffs_classical_fixed(const NeighborGraph& graph, const StrategyProfile& profile,
                                     double r, double c) {
  const std::size_t n = graph.size();
  // Cooperators in each closed neighbourhood N_j ∪ {j}.
  std::vector<std::size_t> group_coop(n, 0);
  for (NodeId j = 0; j < n; ++j) {
    std::size_t count = profile.cooperates(j) ? 1 : 0;
    for (NodeId x : graph.neighbors(j)) count += profile.cooperates(x) ? 1 : 0;
    group_coop[j] = count;
  }
  PayoffVector out(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const bool coop = profile.cooperates(i);
    double total = payoff_classical_fixed(graph.degree(i) + 1, group_coop[i], r, c, coop);
    for (NodeId j : graph.neighbors(i)) {
      total += payoff_classical_fixed(graph.degree(j) + 1, group_coop[j], r, c, coop);
    }
    out[i] = total;
  }
  return out;
}

namespace {

// Pool of game j: sum over N_j ∪ {j} of c/(k_x+1) s_x.
double diversified_pool(const NeighborGraph& graph, const StrategyProfile& profile, NodeId j,
                        double c) {
  auto share = [&](NodeId x) {
    return profile.cooperates(x) ? c / static_cast<double>(graph.degree(x) + 1) : 0.0;
  };
  double pool = share(j);
  for (NodeId x : graph.neighbors(j)) pool += share(x);
  return pool;
}

}  // namespace

double payoff_classical_diversified(const NeighborGraph& graph, const StrategyProfile& profile,
                                    NodeId i, double r, double c) {
  const double own_cost =
      profile.cooperates(i) ? c / static_cast<double>(graph.degree(i) + 1) : 0.0;
  auto game = [&](NodeId j) {
    return r / static_cast<double>(graph.degree(j) + 1) * diversified_pool(graph, profile, j, c) -
           own_cost;
  };
  double total = game(i);
  for (NodeId j : graph.neighbors(i)) total += game(j);
  return total;
}

PayoffVector payoffs_classical_diversified(const NeighborGraph& graph,
                                           const StrategyProfile& profile, double r, double c) {
  const std::size_t n = graph.size();
  std::vector<double> game_share(n);
  for (NodeId j = 0; j < n; ++j) {
    game_share[j] =
        r / static_cast<double>(graph.degree(j) + 1) * diversified_pool(graph, profile, j, c);
  }
  PayoffVector out(n);
  for (NodeId i = 0; i < n; ++i) {
    double benefit = game_share[i];
    for (NodeId j : graph.neighbors(i)) benefit += game_share[j];
    // c/(k_i+1) in each of the k_i+1 games.
    out[i] = benefit - (profile.cooperates(i) ? c : 0.0);
  }
  return out;
}

PayoffVector payoff_wireless_framework(const NeighborGraph& graph, const StrategyProfile& profile,
                                       double r, double c, bool literal_double_sum) {
  const std::size_t n = graph.size();
  std::vector<double> contribution(n, 0.0);
  for (NodeId y = 0; y < n; ++y) {
    if (!profile.cooperates(y)) continue;
    contribution[y] = literal_double_sum ? c : c / static_cast<double>(graph.degree(y) + 1);
  }
  PayoffVector out(n);
  for (NodeId x = 0; x < n; ++x) {
    double pool = contribution[x];
    for (NodeId y : graph.neighbors(x)) pool += contribution[y];
    out[x] = r * pool - (profile.cooperates(x) ? c : 0.0);
  }
  return out;
}

double cooperator_cost(std::size_t neighbor_cooperators, double c) {
  return c / static_cast<double>(neighbor_cooperators + 1);
}

std::vector<std::size_t> neighbor_cooperator_counts(const NeighborGraph& graph,
                                                    const StrategyProfile& profile) {
  std::vector<std::size_t> counts(graph.size(), 0);
  for (NodeId i = 0; i < graph.size(); ++i) {
    for (NodeId j : graph.neighbors(i)) counts[i] += profile.cooperates(j) ? 1 : 0;
  }
  return counts;
}

namespace {

double benefit_with_counts(const NeighborGraph& graph, const Usefulness& usefulness,
                           const std::vector<std::size_t>& n_coop, NodeId i, double r, double c) {
  const auto nb = graph.neighbors(i);
  const std::size_t base = graph.offset(i);
  double pool = 0.0;
  for (std::size_t k = 0; k < nb.size(); ++k) {
    if (usefulness[base + k]) pool += c / static_cast<double>(n_coop[nb[k]] + 1);
  }
  return r / static_cast<double>(n_coop[i] + 1) * pool;
}

}  // namespace

double dissemination_benefit(const NeighborGraph& graph, const StrategyProfile& profile,
                             const Usefulness& usefulness, NodeId i, double r, double c) {
  if (usefulness.size() != graph.edge_slots()) {
    throw std::invalid_argument("usefulness must have one flag per directed edge");
  }
  return benefit_with_counts(graph, usefulness, neighbor_cooperator_counts(graph, profile), i, r,
                             c);
}

PayoffVector dissemination_payoffs(const NeighborGraph& graph, const StrategyProfile& profile,
                                   const Usefulness& usefulness, const GameParams& params,
                                   Rng& rng) {
  if (usefulness.size() != graph.edge_slots()) {
    throw std::invalid_argument("usefulness must have one flag per directed edge");
  }
  const auto n_coop = neighbor_cooperator_counts(graph, profile);
  PayoffVector out(graph.size());
  for (NodeId i = 0; i < graph.size(); ++i) {
    double pi = benefit_with_counts(graph, usefulness, n_coop, i, params.r, params.c);
    if (profile.cooperates(i)) pi -= cooperator_cost(n_coop[i], params.c);
    if (params.sigma > 0.0) pi += rng.normal(params.sigma);
    out[i] = pi;
  }
  return out;
}

PayoffVector compute_payoffs(const NeighborGraph& graph, const StrategyProfile& profile,
                             const Usefulness& usefulness, const GameParams& params, Rng& rng) {
  switch (params.variant) {
    case GameVariant::ClassicalFixed:
      return payoffs_classical_fixed(graph, profile, params.r, params.c);
    case GameVariant::ClassicalDiversified:
      return payoffs_classical_diversified(graph, profile, params.r, params.c);
    case GameVariant::WirelessFramework:
      return payoff_wireless_framework(graph, profile, params.r, params.c, params.literal_double_sum);
    case GameVariant::Dissemination:
      return dissemination_payoffs(graph, profile, usefulness, params, rng);
  }
  throw std::logic_error("unknown game variant");
}

StrategyProfile strategy_update(const NeighborGraph& graph, const StrategyProfile& profile,
                                const PayoffVector& payoffs, const GameParams& params, Rng& rng) {
  if (payoffs.size() != graph.size() || profile.size() != graph.size()) {
    throw std::invalid_argument("payoffs, strategies and graph disagree on node count");
  }
  StrategyProfile next = profile;
  for (NodeId i = 0; i < graph.size(); ++i) {
    if (profile.frozen(i)) continue;
    const auto nb = graph.neighbors(i);
    if (nb.empty()) continue;
    const NodeId j = nb[rng.index(nb.size())];
    if (params.gated_update && !(payoffs[j] > payoffs[i])) continue;
    if (profile[j] == profile[i]) continue;
    if (rng.uniform() < fermi_probability(payoffs[i], payoffs[j], params.kappa)) {
      next.set(i, profile[j]);
    }
  }
  return next;
}

}  // namespace wpgg
