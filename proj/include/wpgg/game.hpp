#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wpgg/rng.hpp"
#include "wpgg/spatial.hpp"

namespace wpgg {

enum class Strategy : std::uint8_t { Defector = 0, Cooperator = 1 };

/// Strategy of every node plus the frozen flag of seeders/sources, which
/// `strategy_update` never changes.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(std::size_t n, Strategy initial = Strategy::Defector)
      : values_(n, initial), frozen_(n, 0) {}

  std::size_t size() const { return values_.size(); }
  Strategy operator[](NodeId i) const { return values_[i]; }
  bool cooperates(NodeId i) const { return values_[i] == Strategy::Cooperator; }
  bool frozen(NodeId i) const { return frozen_[i] != 0; }

  void set(NodeId i, Strategy s) { values_[i] = s; }
  void freeze(NodeId i, bool on = true) { frozen_[i] = on ? 1 : 0; }

  std::size_t cooperators() const;
  double cooperator_fraction() const;
  std::span<const Strategy> values() const { return values_; }

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;

 private:
  std::vector<Strategy> values_;
  std::vector<std::uint8_t> frozen_;
};

enum class GameVariant {
  ClassicalFixed,        // fixed cost c into every game a cooperator joins
  ClassicalDiversified,  // total cost c split over the k+1 games
  WirelessFramework,     // single self-centred game, contribution c/(k+1)
  Dissemination,         // useful-cooperator benefit with contention costs
};

struct GameParams {
  double r = 3.0;      // synergy factor
  double c = 1.0;      // unit cost
  double kappa = 1.0;  // selection intensity
  double sigma = 0.0;  // payoff noise std
  GameVariant variant = GameVariant::WirelessFramework;
  bool gated_update = true;  // only imitate strictly richer neighbours
  bool literal_double_sum = false;  // evaluate the framework double sum as printed

  void validate() const;
};

using PayoffVector = std::vector<double>;

/// t_{j->i} flags stored per directed edge, at `graph.offset(i) + k` for the
/// k-th neighbour j of i.
using Usefulness = std::vector<std::uint8_t>;

/// Probability that i adopts j's strategy: 1 / (1 + exp((pi_i - pi_j) / kappa)).
/// Saturates to 0 or 1 instead of overflowing.
double fermi_probability(double pi_i, double pi_j, double kappa);

double normalized_synergy(double r, double mean_degree);
double synergy_from_normalized(double eta, double mean_degree);

double payoff_classical_fixed(std::size_t group_size, std::size_t cooperators, double r, double c,
                              bool is_cooperator);

/// Accumulated fixed-cost payoffs over all games centred on N_i ∪ {i}.
PayoffVector payoffs_classical_fixed(const NeighborGraph& graph, const StrategyProfile& profile,
                                     double r, double c);

double payoff_classical_diversified(const NeighborGraph& graph, const StrategyProfile& profile,
                                    NodeId i, double r, double c);
PayoffVector payoffs_classical_diversified(const NeighborGraph& graph,
                                           const StrategyProfile& profile, double r, double c);

/// pi_x = r * sum_{y in N_x ∪ x} c/(k_y+1) q_y - c q_x.
/// With `literal_double_sum` the inner sum over z is kept as printed, which
/// collapses to r * c * sum_y q_y - c q_x.
PayoffVector payoff_wireless_framework(const NeighborGraph& graph, const StrategyProfile& profile,
                                       double r, double c, bool literal_double_sum = false);

/// eta_i = c / (n_C + 1), n_C counting cooperating neighbours only.
double cooperator_cost(std::size_t neighbor_cooperators, double c);

std::vector<std::size_t> neighbor_cooperator_counts(const NeighborGraph& graph,
                                                    const StrategyProfile& profile);

/// b_i = r/(n_C_i+1) * sum_{j in N_i} c/(n_C_j+1) * t_{j->i}; self-usefulness is 0.
double dissemination_benefit(const NeighborGraph& graph, const StrategyProfile& profile,
                             const Usefulness& usefulness, NodeId i, double r, double c);

/// Benefit minus contention cost for cooperators, plus N(0, sigma) noise drawn
/// per node in index order when sigma > 0.
PayoffVector dissemination_payoffs(const NeighborGraph& graph, const StrategyProfile& profile,
                                   const Usefulness& usefulness, const GameParams& params,
                                   Rng& rng);

/// Dispatches on `params.variant`. `usefulness` is only read by the
/// dissemination variant and may be empty otherwise.
PayoffVector compute_payoffs(const NeighborGraph& graph, const StrategyProfile& profile,
                             const Usefulness& usefulness, const GameParams& params, Rng& rng);

/// Synchronous imitation step: each non-frozen node with neighbours picks one
/// uniformly and adopts its strategy with the Fermi probability. In gated mode
/// only a strictly higher neighbour payoff can trigger adoption.
StrategyProfile strategy_update(const NeighborGraph& graph, const StrategyProfile& profile,
                                const PayoffVector& payoffs, const GameParams& params, Rng& rng);

}  // namespace wpgg
