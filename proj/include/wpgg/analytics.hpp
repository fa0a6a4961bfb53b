#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpgg/rng.hpp"

namespace wpgg::analytics {

/// Per-node neighbourhood statistics used by the mean-field payoff estimates.
struct NodeStats {
  double coop_fraction = 0.0;    // x_i: share of neighbours that cooperate
  double useful_fraction = 0.0;  // u_i: share of those cooperators holding a new packet
  double degree = 0.0;           // k_i
  double received = 0.0;         // m_i
};

struct MeanFieldState {
  double coop_fraction = 0.0;  // x(t), network wide
  double mean_degree = 0.0;    // <k>
  std::vector<NodeStats> nodes;

  void validate() const;
};

double defector_payoff_estimate(const MeanFieldState& state, std::size_t i);
double cooperator_payoff_estimate(const MeanFieldState& state, std::size_t j);

/// Unnormalised propensity for defector i to copy cooperator j; may be negative.
double transition_propensity(const MeanFieldState& state, std::size_t i, std::size_t j);

/// Probability that neighbour j contributes to i's benefit given the packet
/// counts m_i, m_j and j's clustering coefficient.
double lemma1_q(double coop_fraction, double clustering_j, double degree_j, std::size_t received_i,
                std::size_t received_j);

struct MeetingGeometry {
  double velocity = 0.0;  // jump length per slot, m
  double rad = 75.0;      // transmission range, m
  double region = 500.0;  // radius R of the disk holding the nodes, m

  void validate() const;
};

enum class MeetingIntegrand {
  LawOfCosines,  // acos((v^2 + d^2 - rad^2) / (2 v d)) / pi
  AsPrinted,     // acos((v^2 + rad^2 + d^2) / (2 v d)) / pi
};

struct MeetingProbabilities {
  double p_old = 0.0;
  double p_new = 0.0;
  double error_estimate = 0.0;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nested tanh-sinh evaluation, split at the integrand's kinks, of the old/new meeting
/// probabilities, with the acos argument clamped to [-1, 1]. A zero velocity
/// is handled analytically (p_old = 1, p_new = 0). Throws QuadratureError when
/// the error estimate exceeds `tolerance`.
MeetingProbabilities meeting_probabilities_quadrature(
    const MeetingGeometry& geom, MeetingIntegrand integrand = MeetingIntegrand::LawOfCosines,
    double tolerance = 1e-6);

struct NeighborFractions {
  double f_old = 0.0;
  double f_new = 0.0;
};

/// Share of post-jump neighbours that were / were not neighbours before.
/// Throws std::domain_error when both weights vanish.
NeighborFractions neighbor_fractions(double p_old, double p_new, const MeetingGeometry& geom);

struct MeetingSample {
  NeighborFractions fractions;
  std::uint64_t old_neighbors = 0;
  std::uint64_t new_neighbors = 0;
};

/// Geometric simulation: each sample places a node uniformly on the disk,
/// then moves it and the reference node at the centre by one jump of length
/// v in independent uniform directions, and classifies post-jump neighbours.
MeetingSample meeting_monte_carlo(const MeetingGeometry& geom, std::uint64_t samples, Rng& rng);

struct MeetingRow {
  double velocity;
  double f_old;
  double f_new;
  std::string method;  // "quadrature" or "monte_carlo"
};

/// One quadrature row and one Monte-Carlo row per velocity.
std::vector<MeetingRow> meeting_table(double rad, double region, std::span<const double> velocities,
                                      std::uint64_t samples, std::uint64_t seed);

}  // namespace wpgg::analytics
