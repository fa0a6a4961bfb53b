#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "wpgg/rng.hpp"

namespace wpgg {

using NodeId = std::uint32_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

enum class Boundary { Torus, Reflect };

struct ArenaConfig {
  double width = 1000.0;
  double height = 1000.0;
  Boundary boundary = Boundary::Torus;

  void validate() const;
  bool contains(Position p) const;
};

/// Distance under the arena metric (minimum image on a torus).
double distance(Position a, Position b, const ArenaConfig& arena);

struct Displaced {
  Position position;
  double heading;  // heading after any reflections
};

/// Moves `from` by `length` along `heading` (radians) and applies the arena
/// boundary rule. Reflections mirror the heading as well as the position.
Displaced displace(Position from, double length, double heading, const ArenaConfig& arena);

std::vector<Position> place_uniform(std::size_t n, const ArenaConfig& arena, Rng& rng);

// ---------------------------------------------------------------- mobility

struct StaticMobility {};

struct RandomDirection {
  double velocity = 0.0;  // m per slot
};

struct LevyParams {
  double alpha = 0.9;
  double beta = 0.9;
  double velocity = 5.0;     // m per slot
  double flight_min = 1.0;   // m
  double flight_max = 1000.0;  // m
  double pause_max = 10.0;   // slots

  void validate() const;
};

struct LevyWalk {
  LevyParams params;
};

using MobilityModel = std::variant<StaticMobility, RandomDirection, LevyWalk>;

void validate(const MobilityModel& model);

/// Per-node walker state for the Lévy walk.
struct LevyState {
  double remaining = 0.0;  // flight displacement still to cover, m
  double heading = 0.0;
  int pause = 0;           // slots left to wait before the next flight
};

/// Inverse-CDF sample of a power law with exponent `exponent` truncated to
/// [lo, hi]; `u` is uniform on [0, 1). Returns `lo` when lo == hi.
double sample_truncated_pareto(double exponent, double lo, double hi, double u);

Position step_random_direction(Position pos, double velocity, Rng& rng, const ArenaConfig& arena);

/// Advances one walker by one slot.
Position step_levy(LevyState& state, Position pos, const LevyParams& params, Rng& rng,
                   const ArenaConfig& arena);

// ------------------------------------------------------------ connectivity

/// Symmetric, irreflexive neighbor graph in compressed adjacency form.
/// Neighbor lists are sorted; per-edge data can be stored in arrays of
/// size `edge_slots()` addressed by `offset(i) + k`.
class NeighborGraph {
 public:
  NeighborGraph() = default;
  explicit NeighborGraph(std::size_t n) : offsets_(n + 1, 0) {}

  /// Builds from undirected pairs; duplicates are merged, self-loops rejected.
  static NeighborGraph from_edges(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t offset(NodeId i) const { return offsets_[i]; }
  std::size_t edge_slots() const { return adjacency_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  std::span<const NodeId> neighbors(NodeId i) const {
    return {adjacency_.data() + offsets_[i], degree(i)};
  }
  bool has_edge(NodeId i, NodeId j) const;
  double mean_degree() const;

  friend bool operator==(const NeighborGraph&, const NeighborGraph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
};

struct UnitDisk {
  double rad = 75.0;
};

enum class QudgBand {
  Monotone,   // ((R_outer - x) / (R_outer - R_inner))^zeta
  AsPrinted,  // 1 - ((R_outer - x) / (R_outer - R_inner))^zeta
};

struct QuasiUnitDisk {
  double r_inner = 40.0;
  double r_outer = 75.0;
  double zeta = 0.3;
  QudgBand band = QudgBand::Monotone;
};

using ConnectivityModel = std::variant<UnitDisk, QuasiUnitDisk>;

void validate(const ConnectivityModel& model);

/// Largest distance at which an edge is possible.
double reach(const ConnectivityModel& model);

double connection_probability(double distance, const QuasiUnitDisk& params);

/// The uniform draw deciding whether pair (i, j) connects, for a given
/// per-slot salt. Symmetric in (i, j).
double pair_coin(std::uint64_t salt, NodeId i, NodeId j);

NeighborGraph connect_unit_disk(std::span<const Position> positions, double rad,
                                const ArenaConfig& arena);

/// Draws one salt from `rng`; each pair's coin is then a pure function of
/// (salt, i, j), so the result does not depend on enumeration order.
NeighborGraph connect_quasi_unit_disk(std::span<const Position> positions,
                                      const QuasiUnitDisk& params, const ArenaConfig& arena,
                                      Rng& rng);

NeighborGraph connect(std::span<const Position> positions, const ConnectivityModel& model,
                      const ArenaConfig& arena, Rng& rng);

/// Local clustering coefficient; 0 when degree <= 1.
double clustering_coefficient(const NeighborGraph& graph, NodeId node);

}  // namespace wpgg
