#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>

#include "doctest.h"
#include "wpgg/dissemination.hpp"

using namespace wpgg;

namespace {

NodeBuffer buffer_with(std::size_t universe, std::initializer_list<PacketId> received,
                       std::initializer_list<PacketId> transmitted) {
  NodeBuffer b(universe);
  for (auto p : received) b.received.insert(p);
  for (auto p : transmitted) b.transmitted.insert(p);
  return b;
}

std::size_t total_received(const std::vector<NodeBuffer>& buffers) {
  std::size_t n = 0;
  for (const auto& b : buffers) n += b.received.count();
  return n;
}

/// Hop distance from `origin` to every node; SIZE_MAX when unreachable.
std::vector<std::size_t> hops(const NeighborGraph& g, NodeId origin) {
  std::vector<std::size_t> d(g.size(), SIZE_MAX);
  std::deque<NodeId> queue{origin};
  d[origin] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (NodeId w : g.neighbors(v)) {
      if (d[w] == SIZE_MAX) {
        d[w] = d[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return d;
}

}  // namespace

TEST_SUITE("dissemination") {
  TEST_CASE("packet sets") {
    PacketSet s(130);
    CHECK(s.empty());
    CHECK(s.insert(129));
    CHECK_FALSE(s.insert(129));
    CHECK(s.insert(0));
    CHECK(s.count() == 2);
    CHECK(s.elements() == std::vector<PacketId>{0, 129});
    PacketSet full(130);
    full.fill();
    CHECK(full.count() == 130);
    CHECK(s.is_subset_of(full));
    CHECK(full.has_packet_missing_from(s));
    CHECK_FALSE(s.has_packet_missing_from(full));
    CHECK(full.elements_not_in(s).size() == 128);
    CHECK_THROWS_AS(s.insert(130), std::out_of_range);
  }

  TEST_CASE("source initialisation") {
    Rng rng(3);
    SUBCASE("one source holds packet 0") {
      const auto setup = init_sources(10, 1, rng);
      std::size_t holders = 0;
      for (const auto& b : setup.buffers) holders += b.received.contains(0);
      CHECK(holders == 1);
      CHECK(setup.packets == 1);
    }
    SUBCASE("fifty sources") {
      const auto setup = init_sources(300, 50, rng);
      CHECK(total_received(setup.buffers) == 50);
      CHECK(setup.origins.size() == 50);
      CHECK(std::is_sorted(setup.origins.begin(), setup.origins.end()));
      std::vector<std::uint8_t> is_source(300, 0);
      for (NodeId s : setup.origins) is_source[s] = 1;
      PacketSet seen(50);
      for (NodeId i = 0; i < 300; ++i) {
        if (is_source[i]) {
          CHECK(setup.strategies.cooperates(i));
          CHECK(setup.strategies.frozen(i));
          CHECK(setup.buffers[i].received.count() == 1);
          for (auto p : setup.buffers[i].received.elements()) CHECK(seen.insert(p));
        } else {
          CHECK(setup.buffers[i].received.empty());
          CHECK_FALSE(setup.strategies.cooperates(i));
          CHECK_FALSE(setup.strategies.frozen(i));
        }
      }
    }
    CHECK_THROWS(init_sources(5, 6, rng));
    CHECK_THROWS(init_sources(5, 0, rng));
  }

  TEST_CASE("seeder initialisation") {
    Rng rng(5);
    SUBCASE("thirty full buffers") {
      const auto setup = init_seeders(400, 30, 100, 0.5, rng);
      std::size_t full = 0;
      for (const auto& b : setup.buffers) full += b.received.count() == 100;
      CHECK(full == 30);
      for (NodeId s : setup.origins) {
        CHECK(setup.seeder[s] == 1);
        CHECK(setup.strategies.frozen(s));
        CHECK(setup.strategies.cooperates(s));
      }
    }
    SUBCASE("ratio zero leaves everyone else defecting") {
      const auto setup = init_seeders(400, 30, 50, 0.0, rng);
      CHECK(setup.strategies.cooperators() == 30);
    }
    SUBCASE("ratio one half is binomial") {
      for (int trial = 0; trial < 20; ++trial) {
        const auto setup = init_seeders(400, 30, 50, 0.5, rng);
        const double coop = static_cast<double>(setup.strategies.cooperators()) - 30.0;
        CHECK(std::abs(coop - 185.0) <= 3.0 * std::sqrt(370 * 0.25));
      }
    }
    CHECK_THROWS(init_seeders(10, 11, 5, 0.5, rng));
    CHECK_THROWS(init_seeders(10, 2, 0, 0.5, rng));
    CHECK_THROWS(init_seeders(10, 2, 5, 1.5, rng));
  }

  TEST_CASE("packet choice") {
    Rng rng(7);
    CHECK(choose_packet(buffer_with(10, {1, 2, 3}, {1, 2}), rng) == PacketId{3});
    CHECK(choose_packet(buffer_with(10, {7}, {7}), rng) == PacketId{7});
    CHECK_FALSE(choose_packet(NodeBuffer(10), rng).has_value());

    std::vector<int> counts(4, 0);
    const auto b = buffer_with(10, {2, 4, 6, 8}, {});
    for (int k = 0; k < 8000; ++k) {
      const auto p = *choose_packet(b, rng);
      CHECK(p % 2 == 0);
      ++counts[p / 2 - 1];
    }
    for (int c : counts) CHECK(std::abs(c - 2000) < 4 * std::sqrt(8000 * 0.25 * 0.75));
  }

  TEST_CASE("broadcast") {
    Rng rng(11);
    const auto star = NeighborGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    std::vector<std::uint8_t> no_seeders(4, 0);

    SUBCASE("cooperating centre reaches every leaf") {
      StrategyProfile p(4);
      p.set(0, Strategy::Cooperator);
      std::vector<NodeBuffer> buffers(4, NodeBuffer(10));
      buffers[0].received.insert(5);
      const auto out = broadcast_step(star, p, buffers, no_seeders, rng);
      for (NodeId leaf = 1; leaf < 4; ++leaf) {
        CHECK(buffers[leaf].received.contains(5));
        CHECK(out.usefulness[star.offset(leaf)] == 1);
      }
      CHECK(out.sent[0] == PacketId{5});
      CHECK(buffers[0].transmitted.contains(5));
      CHECK(out.receptions.size() == 3);
    }
    SUBCASE("defector with a full buffer sends nothing") {
      StrategyProfile p(4);
      std::vector<NodeBuffer> buffers(4, NodeBuffer(10));
      buffers[0].received.fill();
      const auto out = broadcast_step(star, p, buffers, no_seeders, rng);
      CHECK_FALSE(out.sent[0].has_value());
      CHECK(out.receptions.empty());
      for (auto t : out.usefulness) CHECK(t == 0);
    }
    SUBCASE("cooperator holding a subset is not useful") {
      StrategyProfile p(4);
      p.set(1, Strategy::Cooperator);
      std::vector<NodeBuffer> buffers(4, NodeBuffer(10));
      buffers[1].received.insert(2);
      buffers[0].received.insert(2);
      buffers[0].received.insert(3);
      const auto out = broadcast_step(star, p, buffers, no_seeders, rng);
      const auto nb0 = star.neighbors(0);
      for (std::size_t k = 0; k < nb0.size(); ++k) CHECK(out.usefulness[star.offset(0) + k] == 0);
      CHECK(out.receptions.empty());
    }
    SUBCASE("usefulness uses the pre-slot buffers") {
      // 0 and 1 cooperate with distinct packets; both learn something this
      // slot, yet both flags reflect the state before receptions.
      const auto pair = NeighborGraph::from_edges(2, {{0, 1}});
      StrategyProfile p(2, Strategy::Cooperator);
      std::vector<NodeBuffer> buffers(2, NodeBuffer(4));
      buffers[0].received.insert(0);
      buffers[1].received.insert(1);
      std::vector<std::uint8_t> none(2, 0);
      const auto out = broadcast_step(pair, p, buffers, none, rng);
      CHECK(out.usefulness[pair.offset(0)] == 1);
      CHECK(out.usefulness[pair.offset(1)] == 1);
      CHECK(buffers[0].received.count() == 2);
      CHECK(buffers[1].received.count() == 2);
    }
    SUBCASE("seeders draw from the whole universe") {
      const auto pair = NeighborGraph::from_edges(2, {{0, 1}});
      StrategyProfile p(2);
      p.set(0, Strategy::Cooperator);
      std::vector<std::uint8_t> seeder{1, 0};
      std::vector<int> sent(6, 0);
      for (int k = 0; k < 3000; ++k) {
        std::vector<NodeBuffer> buffers(2, NodeBuffer(6));
        buffers[0].received.fill();
        buffers[0].transmitted.insert(0);
        const auto out = broadcast_step(pair, p, buffers, seeder, rng);
        ++sent[*out.sent[0]];
      }
      for (int c : sent) CHECK(c > 350);
    }
    std::vector<NodeBuffer> four(4, NodeBuffer(10));
    CHECK_THROWS(broadcast_step(star, StrategyProfile(3), four, no_seeders, rng));
  }

  TEST_CASE("coverage metrics") {
    SUBCASE("full buffers") {
      std::vector<NodeBuffer> buffers(5, NodeBuffer(8));
      for (auto& b : buffers) b.received.fill();
      const auto m = coverage_metrics(buffers, 8);
      CHECK(m.pending == 0);
      CHECK(m.delivered_fraction == 1.0);
      REQUIRE(m.ecdf.size() == 9);
      for (std::size_t k = 0; k < 8; ++k) CHECK(m.ecdf[k] == 0.0);
      CHECK(m.ecdf[8] == 1.0);
    }
    SUBCASE("thirty seeders at slot zero") {
      Rng rng(2);
      const auto setup = init_seeders(400, 30, 100, 0.5, rng);
      const auto m = coverage_metrics(setup.buffers, 100);
      CHECK(m.pending == 370 * 100);
      CHECK(pending_packets(setup.buffers, 100) == 370 * 100);
      CHECK(m.ecdf[0] == doctest::Approx(370.0 / 400.0));
      CHECK(m.ecdf.back() == 1.0);
    }
  }

  TEST_CASE("pending packets never increase and cooperating paths finish in eccentricity slots") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 40;
      std::vector<std::pair<NodeId, NodeId>> edges;
      for (NodeId i = 1; i < n; ++i) edges.emplace_back(static_cast<NodeId>(rng.index(i)), i);
      for (int extra = 0; extra < 20; ++extra) {
        const auto a = static_cast<NodeId>(rng.index(n)), b = static_cast<NodeId>(rng.index(n));
        if (a != b) edges.emplace_back(a, b);
      }
      const auto g = NeighborGraph::from_edges(n, edges);
      StrategyProfile all_coop(n, Strategy::Cooperator);
      std::vector<NodeBuffer> buffers(n, NodeBuffer(1));
      const NodeId origin = static_cast<NodeId>(rng.index(n));
      buffers[origin].received.insert(0);
      const auto d = hops(g, origin);
      const std::size_t ecc = *std::max_element(d.begin(), d.end());
      std::vector<std::uint8_t> none(n, 0);
      std::size_t previous = pending_packets(buffers, 1);
      std::size_t slots = 0;
      while (pending_packets(buffers, 1) > 0) {
        broadcast_step(g, all_coop, buffers, none, rng);
        ++slots;
        const std::size_t now = pending_packets(buffers, 1);
        CHECK(now <= previous);
        previous = now;
        for (NodeId i = 0; i < n; ++i) CHECK(buffers[i].received.contains(0) == (d[i] <= slots));
      }
      CHECK(slots == ecc);
    }
  }
}
