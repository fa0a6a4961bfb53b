// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exits 0 once every criterion has been evaluated; `--strict` also makes any
// FAIL line a nonzero exit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "wpgg/analytics.hpp"
#include "wpgg/output.hpp"

using namespace wpgg;

namespace {

constexpr std::uint64_t kMasterSeed = 7;
constexpr std::size_t kReplicates = 20;

struct Verdict {
  bool pass = false;
  std::vector<std::string> details;
};

void note(Verdict& v, std::string line) { v.details.push_back(std::move(line)); }

std::vector<double> eta_grid() {
  std::vector<double> out;
  for (int k = 2; k <= 10; ++k) out.push_back(k / 10.0);
  return out;
}

SweepSpec framework_spec(double velocity, std::vector<double> etas) {
  SweepSpec spec;
  spec.base = SimConfig::defaults(Scenario::FrameworkPGG);
  spec.axes.normalized_synergy = true;
  spec.axes.synergy = std::move(etas);
  spec.axes.velocity = {velocity};
  spec.axes.seeders = {spec.base.n_seeders};
  spec.axes.packets = {spec.base.packets};
  spec.replicates = kReplicates;
  spec.master_seed = kMasterSeed;
  return spec;
}

SweepSpec download_spec(std::vector<double> rs, std::vector<double> velocities,
                        std::vector<std::size_t> seeders) {
  SweepSpec spec;
  spec.base = SimConfig::defaults(Scenario::ContentDownload);
  spec.axes.synergy = std::move(rs);
  spec.axes.velocity = std::move(velocities);
  spec.axes.seeders = std::move(seeders);
  spec.axes.packets = {spec.base.packets};
  spec.replicates = kReplicates;
  spec.master_seed = kMasterSeed;
  return spec;
}

struct Curve {
  std::vector<double> eta;
  std::vector<double> fc;
};

Curve curve_of(const SweepResult& sweep) {
  Curve c;
  for (const auto& s : summarize(sweep)) {
    c.eta.push_back(s.cell.synergy);
    c.fc.push_back(s.steady_coop_fraction.mean);
  }
  return c;
}

/// First upward crossing of f_C = 0.5, linearly interpolated between grid points.
std::optional<double> midpoint(const Curve& c) {
  for (std::size_t k = 0; k < c.fc.size(); ++k) {
    if (c.fc[k] < 0.5) continue;
    if (k == 0) return c.eta[0];
    const double t = (0.5 - c.fc[k - 1]) / (c.fc[k] - c.fc[k - 1]);
    return c.eta[k - 1] + t * (c.eta[k] - c.eta[k - 1]);
  }
  return std::nullopt;
}

double at(const Curve& c, double eta) {
  for (std::size_t k = 0; k < c.eta.size(); ++k) {
    if (std::abs(c.eta[k] - eta) < 1e-9) return c.fc[k];
  }
  throw std::logic_error("eta not on grid");
}

std::string curve_text(const Curve& c) {
  std::string s;
  for (std::size_t k = 0; k < c.eta.size(); ++k) s += fmt::format(" {:.1f}:{:.3f}", c.eta[k], c.fc[k]);
  return s;
}

// Shared between criteria.
SweepResult g_static_sweep;
std::optional<double> g_eta_static;

Verdict criterion1() {
  Verdict v;
  g_static_sweep = run_sweep(framework_spec(0.0, eta_grid()));
  const Curve c = curve_of(g_static_sweep);
  g_eta_static = midpoint(c);
  note(v, "mean steady-state f_C by eta (v=0):" + curve_text(c));
  const double low = at(c, 0.3), high = at(c, 0.9);
  note(v, fmt::format("f_C(0.3) = {:.4f} (< 0.2), f_C(0.9) = {:.4f} (> 0.8)", low, high));
  note(v, g_eta_static ? fmt::format("midpoint eta* = {:.4f} (in [0.4, 0.8])", *g_eta_static)
                       : std::string("no crossing of 0.5 on the grid"));
  v.pass = low < 0.2 && high > 0.8 && g_eta_static && *g_eta_static >= 0.4 && *g_eta_static <= 0.8;
  return v;
}

Verdict criterion2() {
  Verdict v;
  const Curve c = curve_of(run_sweep(framework_spec(15.0, eta_grid())));
  note(v, "mean steady-state f_C by eta (v=15):" + curve_text(c));
  std::optional<double> mobile = midpoint(c);
  if (!mobile) {
    // No crossing on [0.2, 1.0]: extend the grid upward to locate it.
    std::vector<double> extra;
    for (int k = 11; k <= 20; ++k) extra.push_back(k / 10.0);
    const Curve e = curve_of(run_sweep(framework_spec(15.0, extra)));
    note(v, "extended grid (v=15):" + curve_text(e));
    Curve joined = c;
    joined.eta.insert(joined.eta.end(), e.eta.begin(), e.eta.end());
    joined.fc.insert(joined.fc.end(), e.fc.begin(), e.fc.end());
    mobile = midpoint(joined);
  }
  if (!g_eta_static) {
    note(v, "eta*(v=0) undefined");
    return v;
  }
  note(v, mobile ? fmt::format("eta*(v=15) = {:.4f} vs eta*(v=0) = {:.4f}", *mobile, *g_eta_static)
                 : fmt::format("eta*(v=15) > 2.0 vs eta*(v=0) = {:.4f}", *g_eta_static));
  v.pass = !mobile || *mobile >= *g_eta_static;
  return v;
}

Verdict criterion3() {
  Verdict v;
  if (!g_eta_static) {
    note(v, "eta*(v=0) undefined");
    return v;
  }
  const double eta = std::round(*g_eta_static * 100.0) / 100.0;
  SweepSpec spec;
  spec.base = SimConfig::defaults(Scenario::InfoDissemination);
  spec.axes.normalized_synergy = true;
  spec.axes.synergy = {eta};
  spec.axes.velocity = {0.0, 10.0};
  spec.axes.seeders = {spec.base.n_seeders};
  spec.axes.packets = {spec.base.packets};
  spec.replicates = kReplicates;
  spec.master_seed = kMasterSeed;
  const auto cells = summarize(run_sweep(spec));
  const MeanSe still = cells[0].steady_coop_fraction, mobile = cells[1].steady_coop_fraction;
  const double pooled = std::hypot(still.se, mobile.se);
  note(v, fmt::format("eta = {:.2f}: f_C(v=0) = {:.4f} ± {:.4f}, f_C(v=10) = {:.4f} ± {:.4f}", eta,
                      still.mean, still.se, mobile.mean, mobile.se));
  note(v, fmt::format("difference {:.4f} vs required > 2 x pooled SE = {:.4f}", mobile.mean - still.mean,
                      2.0 * pooled));
  v.pass = mobile.mean - still.mean > 2.0 * pooled;
  return v;
}

Verdict criterion4() {
  Verdict v;
  constexpr double rad = 75.0, region = 500.0;
  constexpr std::uint64_t samples = 1000000;
  Rng rng(kMasterSeed);
  bool ok = true;

  const auto still = analytics::meeting_monte_carlo({0.0, rad, region}, samples, rng);
  note(v, fmt::format("v=0: f_new = {} (must be exactly 0)", still.fractions.f_new));
  ok = ok && still.fractions.f_new == 0.0;

  double prev = -1.0;
  for (double vel : {1.0, 3.0, 5.0, 10.0, 15.0}) {
    const analytics::MeetingGeometry geom{vel, rad, region};
    const auto mc = analytics::meeting_monte_carlo(geom, samples, rng);
    const auto p = analytics::meeting_probabilities_quadrature(geom);
    const auto q = analytics::neighbor_fractions(p.p_old, p.p_new, geom);
    const double sum_err = std::abs(mc.fractions.f_old + mc.fractions.f_new - 1.0);
    const double gap = std::abs(q.f_new - mc.fractions.f_new);
    note(v, fmt::format("v={:>4}: f_new MC = {:.5f}, quadrature = {:.5f}, |gap| = {:.5f}, |sum-1| = {:.1e}",
                        vel, mc.fractions.f_new, q.f_new, gap, sum_err));
    ok = ok && mc.fractions.f_new > prev && sum_err <= 1e-9 && gap <= 0.05;
    prev = mc.fractions.f_new;
  }
  v.pass = ok;
  return v;
}

bool pending_monotone(const SweepResult& sweep, std::size_t& runs_checked) {
  bool ok = true;
  for (const auto& rec : sweep.runs) {
    std::size_t prev = rec.result.initial_pending;
    for (std::size_t p : rec.result.pending) {
      ok = ok && p <= prev;
      prev = p;
    }
    ++runs_checked;
  }
  return ok;
}

Verdict criterion5() {
  Verdict v;
  constexpr double r = 6.0, vel = 10.0;
  const auto sweep = run_sweep(download_spec({r}, {vel}, {30, 60}));
  const auto cells = summarize(sweep);
  const MeanSe few = cells[0].delivered_fraction, many = cells[1].delivered_fraction;
  const double pooled = std::hypot(few.se, many.se);
  std::size_t runs = 0;
  const bool monotone = pending_monotone(sweep, runs);
  note(v, fmt::format("r = {}, v = {}, 300 slots, M = 50", r, vel));
  note(v, fmt::format("delivered fraction: 30 seeders {:.4f} ± {:.4f}, 60 seeders {:.4f} ± {:.4f}",
                      few.mean, few.se, many.mean, many.se));
  note(v, fmt::format("difference {:.4f} vs required > 2 x pooled SE = {:.4f}", many.mean - few.mean,
                      2.0 * pooled));
  note(v, fmt::format("pending series non-increasing in {} of {} runs", monotone ? runs : 0, runs));
  v.pass = many.mean - few.mean > 2.0 * pooled && monotone && sweep.failures.empty() &&
           runs == 2 * kReplicates;
  return v;
}

Verdict criterion6() {
  Verdict v;
  const auto low_sweep = run_sweep(download_spec({1.0}, {0.0}, {30}));
  const auto high_sweep = run_sweep(download_spec({10.0}, {15.0}, {30}));
  const auto low = pooled_ecdf(low_sweep, 0);
  const auto high = pooled_ecdf(high_sweep, 0);
  const std::size_t support = std::min(low.size(), high.size());
  std::size_t dominated = 0;
  for (std::size_t m = 0; m < support; ++m) dominated += high[m] <= low[m] ? 1 : 0;
  const double share = support ? static_cast<double>(dominated) / static_cast<double>(support) : 0.0;
  note(v, "low (r=1, v=0) vs high (r=10, v=15), 30 seeders, pooled over 20 replicates");
  note(v, fmt::format("median received: low {}, high {}",
                      std::lower_bound(low.begin(), low.end(), 0.5) - low.begin(),
                      std::lower_bound(high.begin(), high.end(), 0.5) - high.begin()));
  note(v, fmt::format("F_high(m) <= F_low(m) at {} of {} support points ({:.1f}%, need >= 90%)", dominated,
                      support, 100.0 * share));
  v.pass = support > 0 && share >= 0.9;
  return v;
}

Verdict criterion7() {
  Verdict v;
  const auto audit = oracle::audit_payoffs(5);
  note(v, fmt::format("{} connected graphs (n <= 5), {} payoff-vector comparisons, max |error| = {:.3e}",
                      audit.graphs, audit.comparisons, audit.max_error));
  v.pass = audit.graphs == 772 && audit.max_error <= 1e-12;
  return v;
}

Verdict criterion8() {
  Verdict v;
  std::size_t total = 0, failed = 0;
  auto expect = [&](const std::string& what, bool ok) {
    ++total;
    if (!ok) {
      ++failed;
      note(v, "failed: " + what);
    }
  };
  auto close = [](double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; };

  expect("fermi(2,2,1) = 0.5", fermi_probability(2, 2, 1) == 0.5);
  expect("fermi(0,1,1) = 1/(1+e^-1)", close(fermi_probability(0, 1, 1), 1.0 / (1.0 + std::exp(-1.0))));
  expect("fermi(0,1,1) ~ 0.73106", close(fermi_probability(0, 1, 1), 0.73106, 5e-6));
  expect("fermi limit kappa -> 0+", fermi_probability(0, 1, 1e-12) == 1.0);

  expect("cost(0,1) = 1", cooperator_cost(0, 1) == 1.0);
  expect("cost(3,1) = 0.25", cooperator_cost(3, 1) == 0.25);
  expect("cost(n,0) = 0", cooperator_cost(4, 0) == 0.0);

  expect("contribution q, m_j > m_i", analytics::lemma1_q(0.4, 0.5, 4, 2, 3) == 0.4);
  expect("contribution q, m_j = 0", analytics::lemma1_q(0.4, 0.5, 4, 2, 0) == 0.0);
  expect("contribution q, c_j = 0", analytics::lemma1_q(0.4, 0.0, 4, 3, 2) == 0.4);
  expect("contribution q, closed form",
         close(analytics::lemma1_q(0.4, 0.5, 4, 3, 2), 0.4 * (1.0 - std::pow(0.5 * 3.0 / 4.0, 2))));

  const analytics::MeetingGeometry geom{5.0, 75.0, 500.0};
  const auto still = analytics::neighbor_fractions(0.6, 0.0, geom);
  expect("fractions, p_new = 0", still.f_old == 1.0 && still.f_new == 0.0);
  bool sums = true;
  for (double po = 0.1; po <= 1.0; po += 0.1) {
    for (double pn = 0.0; pn <= 1.0; pn += 0.1) {
      const auto f = analytics::neighbor_fractions(po, pn, geom);
      sums = sums && close(f.f_old + f.f_new, 1.0, 1e-15);
    }
  }
  expect("fractions sum to 1", sums);
  double prev = -1.0;
  bool increasing = true;
  for (double vel = 1.0; vel <= 15.0; vel += 1.0) {
    const analytics::MeetingGeometry g{vel, 75.0, 500.0};
    const auto p = analytics::meeting_probabilities_quadrature(g);
    const double f_new = analytics::neighbor_fractions(p.p_old, p.p_new, g).f_new;
    increasing = increasing && f_new > prev;
    prev = f_new;
  }
  expect("f_new increasing over v = 1..15", increasing);

  auto state = [](analytics::NodeStats a, analytics::NodeStats b, double x, double k) {
    analytics::MeanFieldState s;
    s.coop_fraction = x;
    s.mean_degree = k;
    s.nodes = {a, b};
    return s;
  };
  const auto base = state({1, 1, 4, 0}, {1, 1, 4, 0}, 0.5, 4);
  expect("defector estimate, x_i = 0",
         analytics::defector_payoff_estimate(state({0, 1, 4, 0}, {}, 0.5, 4), 0) == 0.0);
  expect("defector estimate = (1/5)(4/3)", close(analytics::defector_payoff_estimate(base, 0), 4.0 / 15.0));
  expect("defector estimate, u_i = 0",
         analytics::defector_payoff_estimate(state({1, 0, 4, 0}, {}, 0.5, 4), 0) == 0.0);
  expect("cooperator estimate, x_j = 0",
         analytics::cooperator_payoff_estimate(state({0, 0.3, 4, 0}, {}, 0.5, 4), 0) == -1.0);
  expect("cooperator estimate = 0.2667 - 0.2",
         close(analytics::cooperator_payoff_estimate(base, 0), 4.0 / 15.0 - 0.2));
  const double limit = analytics::cooperator_payoff_estimate(state({1, 0, 1e9, 0}, {}, 0.5, 4), 0);
  expect("cooperator estimate -> 0-", limit < 0.0 && limit > -1e-8);
  expect("propensity, identical stats", close(analytics::transition_propensity(base, 0, 1), -0.2));
  expect("propensity limit",
         close(analytics::transition_propensity(state({0.5, 0, 8, 0}, {1, 1, 1e12, 0}, 0.4, 7), 0, 1),
               1.0 / (0.4 * 7 + 1), 1e-9));
  expect("propensity, no usefulness",
         analytics::transition_propensity(state({0.3, 0, 5, 0}, {0.8, 0, 9, 0}, 0.5, 6), 0, 1) < 0.0);

  // Monte-Carlo bound: ungated adoption frequency.
  Rng rng(kMasterSeed);
  const auto pair = NeighborGraph::from_edges(2, {{0, 1}});
  StrategyProfile p(2);
  p.set(1, Strategy::Cooperator);
  p.freeze(1);
  GameParams params;
  params.gated_update = false;
  const int trials = 100000;
  int adopted = 0;
  for (int k = 0; k < trials; ++k) adopted += strategy_update(pair, p, {1.0, 0.5}, params, rng).cooperates(0);
  const double want = fermi_probability(1.0, 0.5, 1.0);
  expect("Fermi adoption frequency within 4 SE",
         std::abs(adopted / double(trials) - want) <= 4.0 * std::sqrt(want * (1 - want) / trials));

  note(v, fmt::format("{} of {} checks hold", total - failed, total));
  v.pass = failed == 0;
  return v;
}

Verdict criterion9() {
  Verdict v;
  const std::string first = results_csv(g_static_sweep);
  const auto spec = framework_spec(0.0, eta_grid());
  const std::string again = results_csv(run_sweep(spec, 1));
  const std::string threaded = results_csv(run_sweep(spec, 4));
  const auto download = download_spec({6.0}, {10.0}, {30});
  const bool download_same = results_csv(run_sweep(download, 1)) == results_csv(run_sweep(download, 3));
  note(v, fmt::format("criterion-1 sweep rerun: {} bytes, identical = {}", again.size(), first == again));
  note(v, fmt::format("same sweep on 4 threads identical = {}", first == threaded));
  note(v, fmt::format("content-download cell, 1 vs 3 threads identical = {}", download_same));
  v.pass = !first.empty() && first == again && first == threaded && download_same;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"static-network cooperation threshold", criterion1},
      {"mobility raises the framework threshold", criterion2},
      {"mobility enhances dissemination cooperation", criterion3},
      {"neighbour renewal grows with velocity", criterion4},
      {"more seeders deliver more", criterion5},
      {"ECDF shifts right with r and v", criterion6},
      {"payoffs match the direct-summation oracle", criterion7},
      {"formula unit checks", criterion8},
      {"determinism of results.csv", criterion9},
  };
  std::size_t passed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      note(v, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("{} {}: {} ({:.1f} s)\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, secs);
    for (const auto& d : v.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    passed += v.pass ? 1 : 0;
  }
  std::cout << fmt::format("SUMMARY: {} of {} criteria passed\n", passed, criteria.size());
  return strict && passed != criteria.size() ? 1 : 0;
}
