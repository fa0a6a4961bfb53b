#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wpgg/game.hpp"
#include "wpgg/rng.hpp"
#include "wpgg/spatial.hpp"

namespace wpgg {

using PacketId = std::uint32_t;

/// Subset of the packet universe [0, M), stored as a bitset.
class PacketSet {
 public:
  PacketSet() = default;
  explicit PacketSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::size_t universe() const { return universe_; }
  bool contains(PacketId p) const { return (words_[p / 64] >> (p % 64)) & 1U; }
  /// Returns true when `p` was not present before.
  bool insert(PacketId p);
  void fill();
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  /// True when this set holds at least one packet absent from `other`.
  bool has_packet_missing_from(const PacketSet& other) const;
  bool is_subset_of(const PacketSet& other) const;
  std::vector<PacketId> elements() const;
  std::vector<PacketId> elements_not_in(const PacketSet& other) const;

  friend bool operator==(const PacketSet&, const PacketSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct NodeBuffer {
  PacketSet received;
  PacketSet transmitted;

  NodeBuffer() = default;
  explicit NodeBuffer(std::size_t packets) : received(packets), transmitted(packets) {}
  friend bool operator==(const NodeBuffer&, const NodeBuffer&) = default;
};

/// Initial packet and strategy state for a dissemination run.
struct DisseminationSetup {
  std::size_t packets = 0;          // M
  std::vector<NodeBuffer> buffers;
  StrategyProfile strategies;
  std::vector<std::uint8_t> seeder;  // seeders broadcast uniformly over all M
  std::vector<NodeId> origins;       // source or seeder ids, ascending
};

/// Picks `n_sources` distinct nodes; source k holds packet k and starts as a
/// frozen cooperator. Everyone else is an empty-buffered defector.
DisseminationSetup init_sources(std::size_t n_nodes, std::size_t n_sources, Rng& rng);

/// Seeders hold all M packets and are frozen cooperators; other nodes start
/// empty and cooperate with probability `initial_coop_ratio`.
DisseminationSetup init_seeders(std::size_t n_nodes, std::size_t n_seeders, std::size_t packets,
                                double initial_coop_ratio, Rng& rng);

/// Uniform over received \ transmitted, falling back to a uniform
/// retransmission from received; nothing when the buffer is empty.
std::optional<PacketId> choose_packet(const NodeBuffer& buffer, Rng& rng);

struct Reception {
  NodeId receiver;
  NodeId sender;
  PacketId packet;
};

struct BroadcastOutcome {
  Usefulness usefulness;                           // pre-slot t_{j->i}
  std::vector<std::optional<PacketId>> sent;       // per node
  std::vector<Reception> receptions;               // new packets only
};

/// One slot of broadcasting. Usefulness and packet choices use the buffers
/// as they were before this slot; receptions are then applied in place.
BroadcastOutcome broadcast_step(const NeighborGraph& graph, const StrategyProfile& strategies,
                                std::vector<NodeBuffer>& buffers,
                                std::span<const std::uint8_t> seeder, Rng& rng);

struct CoverageMetrics {
  std::vector<std::size_t> received_counts;
  std::vector<double> ecdf;  // ecdf[m] = fraction of nodes holding <= m packets, m = 0..M
  std::size_t pending = 0;   // sum over nodes of (M - |received|)
  double delivered_fraction = 0.0;
};

CoverageMetrics coverage_metrics(std::span<const NodeBuffer> buffers, std::size_t packets);

std::size_t pending_packets(std::span<const NodeBuffer> buffers, std::size_t packets);

}  // namespace wpgg
