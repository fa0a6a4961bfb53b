#include "wpgg/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wpgg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double v, double extent) {
  double m = std::fmod(v, extent);
  if (m < 0.0) m += extent;
  if (m >= extent) m = 0.0;  // fmod rounding on the upper edge
  return m;
}

// Folds v into [0, extent]; returns true when an odd number of walls was hit.
bool fold(double& v, double extent) {
  const double period = 2.0 * extent;
  double m = std::fmod(v, period);
  if (m < 0.0) m += period;
  bool flipped = false;
  if (m > extent) {
    m = period - m;
    flipped = true;
  }
  v = std::clamp(m, 0.0, extent);
  return flipped;
}

template <typename Visit>
void for_each_pair_brute(std::span<const Position> positions, double max_distance,
                         const ArenaConfig& arena, Visit&& visit) {
  const auto n = static_cast<NodeId>(positions.size());
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double d = distance(positions[i], positions[j], arena);
      if (d <= max_distance) visit(i, j, d);
    }
  }
}

// Spatial hash over cells at least `max_distance` wide. Visits every pair
// within `max_distance` exactly once, with i < j.
template <typename Visit>
void for_each_pair_within(std::span<const Position> positions, double max_distance,
                          const ArenaConfig& arena, Visit&& visit) {
  const std::size_t n = positions.size();
  const auto cap = static_cast<long>(2.0 * std::ceil(std::sqrt(static_cast<double>(n)))) + 1;
  const long nx = std::min(cap, static_cast<long>(std::floor(arena.width / max_distance)));
  const long ny = std::min(cap, static_cast<long>(std::floor(arena.height / max_distance)));
  if (nx < 3 || ny < 3) {
    for_each_pair_brute(positions, max_distance, arena, visit);
    return;
  }
  const double cw = arena.width / static_cast<double>(nx);
  const double ch = arena.height / static_cast<double>(ny);

  auto cell_of = [&](Position p) {
    const long cx = std::clamp(static_cast<long>(p.x / cw), 0L, nx - 1);
    const long cy = std::clamp(static_cast<long>(p.y / ch), 0L, ny - 1);
    return std::pair{cx, cy};
  };

  // Counting sort of node ids into cells.
  std::vector<std::size_t> start(static_cast<std::size_t>(nx * ny) + 1, 0);
  std::vector<std::size_t> cell_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [cx, cy] = cell_of(positions[i]);
    cell_index[i] = static_cast<std::size_t>(cy * nx + cx);
    ++start[cell_index[i] + 1];
  }
  for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
  std::vector<NodeId> members(n);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members[fill[cell_index[i]]++] = static_cast<NodeId>(i);
  }

  const bool torus = arena.boundary == Boundary::Torus;
  for (std::size_t i = 0; i < n; ++i) {
    auto [cx, cy] = cell_of(positions[i]);
    for (long dy = -1; dy <= 1; ++dy) {
      long y = cy + dy;
      if (torus) {
        y = (y + ny) % ny;
      } else if (y < 0 || y >= ny) {
        continue;
      }
      for (long dx = -1; dx <= 1; ++dx) {
        long x = cx + dx;
        if (torus) {
          x = (x + nx) % nx;
        } else if (x < 0 || x >= nx) {
          continue;
        }
        const auto c = static_cast<std::size_t>(y * nx + x);
        for (std::size_t s = start[c]; s < start[c + 1]; ++s) {
          const NodeId j = members[s];
          if (j <= i) continue;
          const double d = distance(positions[i], positions[j], arena);
          if (d <= max_distance) visit(static_cast<NodeId>(i), j, d);
        }
      }
    }
  }
}

}  // namespace

void ArenaConfig::validate() const {
  if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height)) {
    throw std::invalid_argument("arena must have positive finite width and height");
  }
}

bool ArenaConfig::contains(Position p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  if (boundary == Boundary::Torus) return p.x >= 0.0 && p.x < width && p.y >= 0.0 && p.y < height;
  return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
}

double distance(Position a, Position b, const ArenaConfig& arena) {
  double dx = std::abs(a.x - b.x);
  double dy = std::abs(a.y - b.y);
  if (arena.boundary == Boundary::Torus) {
    dx = std::min(dx, arena.width - dx);
    dy = std::min(dy, arena.height - dy);
  }
  return std::hypot(dx, dy);
}

Displaced displace(Position from, double length, double heading, const ArenaConfig& arena) {
  Position to{from.x + length * std::cos(heading), from.y + length * std::sin(heading)};
  if (arena.boundary == Boundary::Torus) {
    return {{wrap(to.x, arena.width), wrap(to.y, arena.height)}, heading};
  }
  const bool flip_x = fold(to.x, arena.width);
  const bool flip_y = fold(to.y, arena.height);
  double h = heading;
  if (flip_x) h = std::numbers::pi - h;
  if (flip_y) h = -h;
  return {to, wrap(h, kTwoPi)};
}

std::vector<Position> place_uniform(std::size_t n, const ArenaConfig& arena, Rng& rng) {
  arena.validate();
  if (n == 0) throw std::invalid_argument("place_uniform needs at least one node");
  std::vector<Position> out(n);
  for (auto& p : out) {
    p.x = rng.uniform() * arena.width;
    p.y = rng.uniform() * arena.height;
  }
  return out;
}

void LevyParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("levy alpha must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("levy beta must be > 0");
  if (!(velocity >= 0.0)) throw std::invalid_argument("levy velocity must be >= 0");
  if (!(flight_min > 0.0) || !(flight_min <= flight_max)) {
    throw std::invalid_argument("levy flight lengths need 0 < flight_min <= flight_max");
  }
  if (!(pause_max >= 0.0)) throw std::invalid_argument("levy pause_max must be >= 0");
}

void validate(const MobilityModel& model) {
  if (const auto* rd = std::get_if<RandomDirection>(&model); rd && !(rd->velocity >= 0.0)) {
    throw std::invalid_argument("velocity must be >= 0");
  }
  if (const auto* lw = std::get_if<LevyWalk>(&model)) lw->params.validate();
}

double sample_truncated_pareto(double exponent, double lo, double hi, double u) {
  if (lo >= hi) return lo;
  const double tail = 1.0 - std::pow(lo / hi, exponent);
  const double x = lo * std::pow(1.0 - u * tail, -1.0 / exponent);
  return std::clamp(x, lo, hi);
}

Position step_random_direction(Position pos, double velocity, Rng& rng, const ArenaConfig& arena) {
  const double heading = kTwoPi * rng.uniform();
  return displace(pos, velocity, heading, arena).position;
}

Position step_levy(LevyState& state, Position pos, const LevyParams& params, Rng& rng,
                   const ArenaConfig& arena) {
  if (state.pause > 0) {
    --state.pause;
    return pos;
  }
  if (state.remaining <= 0.0) {
    state.remaining =
        sample_truncated_pareto(params.alpha, params.flight_min, params.flight_max, rng.uniform());
    state.heading = kTwoPi * rng.uniform();
  }
  const double step = std::min(params.velocity, state.remaining);
  if (step <= 0.0) return pos;
  const auto moved = displace(pos, step, state.heading, arena);
  state.heading = moved.heading;
  state.remaining -= step;
  if (state.remaining <= 0.0) {
    state.remaining = 0.0;
    // Pauses are whole slots, truncated from the continuous draw.
    if (params.pause_max >= 1.0) {
      state.pause = static_cast<int>(
          std::floor(sample_truncated_pareto(params.beta, 1.0, params.pause_max, rng.uniform())));
    }
  }
  return moved.position;
}

NeighborGraph NeighborGraph::from_edges(std::size_t n,
                                        std::vector<std::pair<NodeId, NodeId>> edges) {
  for (auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
    if (a >= n || b >= n) throw std::out_of_range("edge endpoint out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  NeighborGraph g(n);
  for (auto [a, b] : edges) {
    ++g.offsets_[a + 1];
    ++g.offsets_[b + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) g.offsets_[i] += g.offsets_[i - 1];
  g.adjacency_.resize(2 * edges.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [a, b] : edges) {
    g.adjacency_[fill[a]++] = b;
    g.adjacency_[fill[b]++] = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }
  return g;
}

bool NeighborGraph::has_edge(NodeId i, NodeId j) const {
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

double NeighborGraph::mean_degree() const {
  if (size() == 0) return 0.0;
  return static_cast<double>(adjacency_.size()) / static_cast<double>(size());
}

void validate(const ConnectivityModel& model) {
  if (const auto* ud = std::get_if<UnitDisk>(&model)) {
    if (!(ud->rad > 0.0)) throw std::invalid_argument("radio range must be > 0");
    return;
  }
  const auto& q = std::get<QuasiUnitDisk>(model);
  if (!(q.r_inner > 0.0) || !(q.r_inner < q.r_outer)) {
    throw std::invalid_argument("quasi unit disk needs 0 < r_inner < r_outer");
  }
  if (!(q.zeta > 0.0)) throw std::invalid_argument("zeta must be > 0");
}

double reach(const ConnectivityModel& model) {
  if (const auto* ud = std::get_if<UnitDisk>(&model)) return ud->rad;
  return std::get<QuasiUnitDisk>(model).r_outer;
}

double connection_probability(double x, const QuasiUnitDisk& params) {
  if (x < params.r_inner) return 1.0;
  if (x > params.r_outer) return 0.0;
  const double frac = (params.r_outer - x) / (params.r_outer - params.r_inner);
  const double p = std::pow(frac, params.zeta);
  return params.band == QudgBand::Monotone ? p : 1.0 - p;
}

double pair_coin(std::uint64_t salt, NodeId i, NodeId j) {
  if (i > j) std::swap(i, j);
  const std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | j;
  return bits_to_unit(splitmix64(salt ^ splitmix64(key)));
}

NeighborGraph connect_unit_disk(std::span<const Position> positions, double rad,
                                const ArenaConfig& arena) {
  if (!(rad > 0.0)) throw std::invalid_argument("radio range must be > 0");
  std::vector<std::pair<NodeId, NodeId>> edges;
  for_each_pair_within(positions, rad, arena,
                       [&](NodeId i, NodeId j, double) { edges.emplace_back(i, j); });
  return NeighborGraph::from_edges(positions.size(), std::move(edges));
}

NeighborGraph connect_quasi_unit_disk(std::span<const Position> positions,
                                      const QuasiUnitDisk& params, const ArenaConfig& arena,
                                      Rng& rng) {
  validate(ConnectivityModel{params});
  const std::uint64_t salt = rng.bits();
  std::vector<std::pair<NodeId, NodeId>> edges;
  for_each_pair_within(positions, params.r_outer, arena, [&](NodeId i, NodeId j, double d) {
    if (pair_coin(salt, i, j) < connection_probability(d, params)) edges.emplace_back(i, j);
  });
  return NeighborGraph::from_edges(positions.size(), std::move(edges));
}

NeighborGraph connect(std::span<const Position> positions, const ConnectivityModel& model,
                      const ArenaConfig& arena, Rng& rng) {
  if (const auto* ud = std::get_if<UnitDisk>(&model)) {
    return connect_unit_disk(positions, ud->rad, arena);
  }
  return connect_quasi_unit_disk(positions, std::get<QuasiUnitDisk>(model), arena, rng);
}

double clustering_coefficient(const NeighborGraph& graph, NodeId node) {
  const auto nb = graph.neighbors(node);
  const std::size_t k = nb.size();
  if (k <= 1) return 0.0;
  std::size_t links = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (graph.has_edge(nb[a], nb[b])) ++links;
    }
  }
  return static_cast<double>(links) / (static_cast<double>(k * (k - 1)) / 2.0);
}

}  // namespace wpgg
