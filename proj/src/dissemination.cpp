#include "wpgg/dissemination.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace wpgg {

bool PacketSet::insert(PacketId p) {
  if (p >= universe_) throw std::out_of_range("packet id " + std::to_string(p) + " out of range");
  auto& word = words_[p / 64];
  const std::uint64_t mask = std::uint64_t{1} << (p % 64);
  const bool fresh = (word & mask) == 0;
  word |= mask;
  return fresh;
}

void PacketSet::fill() {
  std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
  if (universe_ % 64 != 0 && !words_.empty()) {
    words_.back() = (std::uint64_t{1} << (universe_ % 64)) - 1;
  }
}

std::size_t PacketSet::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool PacketSet::has_packet_missing_from(const PacketSet& other) const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] & ~other.words_[k]) return true;
  }
  return false;
}

bool PacketSet::is_subset_of(const PacketSet& other) const {
  return !has_packet_missing_from(other);
}

std::vector<PacketId> PacketSet::elements() const {
  std::vector<PacketId> out;
  for (PacketId p = 0; p < universe_; ++p) {
    if (contains(p)) out.push_back(p);
  }
  return out;
}

std::vector<PacketId> PacketSet::elements_not_in(const PacketSet& other) const {
  std::vector<PacketId> out;
  for (PacketId p = 0; p < universe_; ++p) {
    if (contains(p) && !other.contains(p)) out.push_back(p);
  }
  return out;
}

namespace {

// First `k` entries of a partial Fisher-Yates shuffle of [0, n), sorted.
std::vector<NodeId> sample_nodes(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t pick = i + rng.index(n - i);
    std::swap(ids[i], ids[pick]);
  }
  ids.resize(k);
  return ids;
}

}  // namespace

DisseminationSetup init_sources(std::size_t n_nodes, std::size_t n_sources, Rng& rng) {
  if (n_sources > n_nodes) throw std::invalid_argument("more sources than nodes");
  if (n_sources == 0) throw std::invalid_argument("need at least one source");
  DisseminationSetup setup;
  setup.packets = n_sources;
  setup.buffers.assign(n_nodes, NodeBuffer(n_sources));
  setup.strategies = StrategyProfile(n_nodes, Strategy::Defector);
  setup.seeder.assign(n_nodes, 0);
  const auto chosen = sample_nodes(n_nodes, n_sources, rng);
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    setup.buffers[chosen[k]].received.insert(static_cast<PacketId>(k));
    setup.strategies.set(chosen[k], Strategy::Cooperator);
    setup.strategies.freeze(chosen[k]);
  }
  setup.origins = chosen;
  std::sort(setup.origins.begin(), setup.origins.end());
  return setup;
}

DisseminationSetup init_seeders(std::size_t n_nodes, std::size_t n_seeders, std::size_t packets,
                                double initial_coop_ratio, Rng& rng) {
  if (n_seeders > n_nodes) throw std::invalid_argument("more seeders than nodes");
  if (packets == 0) throw std::invalid_argument("need at least one packet");
  if (!(initial_coop_ratio >= 0.0 && initial_coop_ratio <= 1.0)) {
    throw std::invalid_argument("initial cooperator ratio must lie in [0, 1]");
  }
  DisseminationSetup setup;
  setup.packets = packets;
  setup.buffers.assign(n_nodes, NodeBuffer(packets));
  setup.strategies = StrategyProfile(n_nodes, Strategy::Defector);
  setup.seeder.assign(n_nodes, 0);
  setup.origins = sample_nodes(n_nodes, n_seeders, rng);
  std::sort(setup.origins.begin(), setup.origins.end());
  for (NodeId s : setup.origins) {
    setup.seeder[s] = 1;
    setup.buffers[s].received.fill();
    setup.strategies.set(s, Strategy::Cooperator);
    setup.strategies.freeze(s);
  }
  for (NodeId i = 0; i < n_nodes; ++i) {
    if (setup.seeder[i]) continue;
    if (rng.bernoulli(initial_coop_ratio)) setup.strategies.set(i, Strategy::Cooperator);
  }
  return setup;
}

std::optional<PacketId> choose_packet(const NodeBuffer& buffer, Rng& rng) {
  auto fresh = buffer.received.elements_not_in(buffer.transmitted);
  if (!fresh.empty()) return fresh[rng.index(fresh.size())];
  auto all = buffer.received.elements();
  if (!all.empty()) return all[rng.index(all.size())];
  return std::nullopt;
}

BroadcastOutcome broadcast_step(const NeighborGraph& graph, const StrategyProfile& strategies,
                                std::vector<NodeBuffer>& buffers,
                                std::span<const std::uint8_t> seeder, Rng& rng) {
  const std::size_t n = graph.size();
  if (buffers.size() != n || strategies.size() != n || seeder.size() != n) {
    throw std::invalid_argument("broadcast_step inputs disagree on node count");
  }
  BroadcastOutcome out;
  out.usefulness.assign(graph.edge_slots(), 0);
  for (NodeId i = 0; i < n; ++i) {
    const auto nb = graph.neighbors(i);
    const std::size_t base = graph.offset(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const NodeId j = nb[k];
      out.usefulness[base + k] =
          strategies.cooperates(j) && buffers[j].received.has_packet_missing_from(buffers[i].received)
              ? 1
              : 0;
    }
  }

  out.sent.assign(n, std::nullopt);
  for (NodeId j = 0; j < n; ++j) {
    if (!strategies.cooperates(j)) continue;
    auto& buf = buffers[j];
    std::optional<PacketId> pick;
    if (seeder[j]) {
      const std::size_t m = buf.received.universe();
      if (m > 0) pick = static_cast<PacketId>(rng.index(m));
    } else {
      pick = choose_packet(buf, rng);
    }
    if (pick) {
      buf.transmitted.insert(*pick);
      out.sent[j] = pick;
    }
  }

  for (NodeId j = 0; j < n; ++j) {
    if (!out.sent[j]) continue;
    for (NodeId i : graph.neighbors(j)) {
      if (buffers[i].received.insert(*out.sent[j])) out.receptions.push_back({i, j, *out.sent[j]});
    }
  }
  return out;
}

std::size_t pending_packets(std::span<const NodeBuffer> buffers, std::size_t packets) {
  std::size_t pending = 0;
  for (const auto& b : buffers) pending += packets - b.received.count();
  return pending;
}

CoverageMetrics coverage_metrics(std::span<const NodeBuffer> buffers, std::size_t packets) {
  CoverageMetrics m;
  m.received_counts.reserve(buffers.size());
  std::vector<std::size_t> histogram(packets + 1, 0);
  for (const auto& b : buffers) {
    const std::size_t count = b.received.count();
    m.received_counts.push_back(count);
    ++histogram[count];
    m.pending += packets - count;
  }
  m.ecdf.resize(packets + 1);
  std::size_t cumulative = 0;
  const double n = static_cast<double>(buffers.size());
  for (std::size_t k = 0; k <= packets; ++k) {
    cumulative += histogram[k];
    m.ecdf[k] = buffers.empty() ? 1.0 : static_cast<double>(cumulative) / n;
  }
  const double total = n * static_cast<double>(packets);
  m.delivered_fraction = total > 0.0 ? 1.0 - static_cast<double>(m.pending) / total : 1.0;
  return m;
}

}  // namespace wpgg
