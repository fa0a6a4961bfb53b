// Python module `wpgg._wpgg`.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wpgg/analytics.hpp"
#include "wpgg/output.hpp"

namespace py = pybind11;
using namespace wpgg;

namespace {

GameVariant variant_named(const std::string& name) {
  try {
    return parse_game_variant(name);
  } catch (const std::exception&) {
    throw py::value_error("unknown game variant '" + name + "'");
  }
}

/// Payoff vector for an undirected edge list. `useful` holds (sender, receiver)
/// pairs with t_{sender->receiver} = 1 and is only read by the dissemination variant.
std::vector<double> payoffs(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges,
                            const std::vector<bool>& cooperators, const std::string& variant, double r,
                            double c, const std::vector<std::pair<NodeId, NodeId>>& useful) {
  if (cooperators.size() != n) throw py::value_error("cooperators must have one entry per node");
  const auto graph = NeighborGraph::from_edges(n, edges);
  StrategyProfile profile(n);
  for (NodeId i = 0; i < n; ++i) {
    if (cooperators[i]) profile.set(i, Strategy::Cooperator);
  }
  Usefulness flags(graph.edge_slots(), 0);
  for (const auto& [sender, receiver] : useful) {
    if (receiver >= n) throw py::value_error("useful pair out of range");
    const auto nb = graph.neighbors(receiver);
    const auto it = std::find(nb.begin(), nb.end(), sender);
    if (it == nb.end()) throw py::value_error("useful pair is not an edge");
    flags[graph.offset(receiver) + static_cast<std::size_t>(it - nb.begin())] = 1;
  }
  GameParams params;
  params.variant = variant_named(variant);
  params.r = r;
  params.c = c;
  Rng unused(0);
  return compute_payoffs(graph, profile, flags, params, unused);
}

py::dict run_config(const std::string& yaml, std::optional<std::uint64_t> seed) {
  const SweepSpec spec = parse_config(yaml);
  if (!spec.is_single_cell()) throw py::value_error("run_config expects a single-cell config");
  const Cell cell = expand_cells(spec).front();
  SimConfig cfg = cell_config(spec, cell);
  cfg.seed = seed.value_or(replicate_seed(spec, cell, 0));
  RunResult result;
  {
    py::gil_scoped_release release;
    result = run(cfg);
  }
  py::dict out;
  out["seed"] = cfg.seed;
  out["slots"] = result.slots;
  out["termination"] = to_string(result.cause);
  out["r"] = result.r;
  out["eta"] = result.eta;
  out["mean_degree"] = result.initial_mean_degree;
  out["coop_fraction"] = result.coop_fraction;
  out["pending"] = result.pending;
  out["deliveries"] = result.deliveries;
  out["final_received"] = result.final_received;
  out["steady_fc"] = steady_state_fraction(result);
  out["delivered_fraction"] = result.delivered_fraction();
  return out;
}

py::dict sweep(const std::string& yaml, std::size_t parallelism,
               std::optional<std::filesystem::path> out_dir) {
  const SweepSpec spec = parse_config(yaml);
  SweepResult result;
  {
    py::gil_scoped_release release;
    result = run_sweep(spec, parallelism);
  }
  if (out_dir) emit_outputs(spec, result, *out_dir);
  py::list failures;
  for (const auto& f : result.failures) {
    failures.append(py::dict(py::arg("cell") = f.cell_key, py::arg("replicate") = f.replicate,
                             py::arg("message") = f.message));
  }
  py::dict out;
  out["results_csv"] = results_csv(result);
  out["summary_json"] = summary_json(spec, result);
  out["failures"] = failures;
  return out;
}

}  // namespace

PYBIND11_MODULE(_wpgg, m) {
  m.doc() = "Public-goods games on wireless neighbor graphs";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    }
  });

  m.def("fermi_probability", &fermi_probability, py::arg("pi_i"), py::arg("pi_j"), py::arg("kappa") = 1.0,
        "Probability that i adopts j's strategy.");
  m.def("cooperator_cost", &cooperator_cost, py::arg("neighbor_cooperators"), py::arg("c") = 1.0);
  m.def("normalized_synergy", &normalized_synergy, py::arg("r"), py::arg("mean_degree"));
  m.def("lemma1_q", &analytics::lemma1_q, py::arg("coop_fraction"), py::arg("clustering_j"),
        py::arg("degree_j"), py::arg("received_i"), py::arg("received_j"));

  m.def("payoffs", &payoffs, py::arg("n"), py::arg("edges"), py::arg("cooperators"),
        py::arg("variant") = "wireless_framework", py::arg("r") = 3.0, py::arg("c") = 1.0,
        py::arg("useful") = std::vector<std::pair<NodeId, NodeId>>{},
        "Per-node payoffs of one game round on an undirected graph.");

  m.def(
      "meeting_probabilities",
      [](double v, double rad, double region, const std::string& integrand) {
        analytics::MeetingIntegrand kind;
        if (integrand == "law_of_cosines") {
          kind = analytics::MeetingIntegrand::LawOfCosines;
        } else if (integrand == "as_printed") {
          kind = analytics::MeetingIntegrand::AsPrinted;
        } else {
          throw py::value_error("integrand must be 'law_of_cosines' or 'as_printed'");
        }
        const auto p = analytics::meeting_probabilities_quadrature({v, rad, region}, kind);
        return std::make_pair(p.p_old, p.p_new);
      },
      py::arg("v"), py::arg("rad") = 75.0, py::arg("R") = 500.0, py::arg("integrand") = "law_of_cosines",
      "Quadrature (p_old, p_new) for one jump of length v.");
  m.def(
      "neighbor_fractions",
      [](double p_old, double p_new, double v, double rad, double region) {
        const auto f = analytics::neighbor_fractions(p_old, p_new, {v, rad, region});
        return std::make_pair(f.f_old, f.f_new);
      },
      py::arg("p_old"), py::arg("p_new"), py::arg("v"), py::arg("rad") = 75.0, py::arg("R") = 500.0);
  m.def(
      "meeting_monte_carlo",
      [](double v, double rad, double region, std::uint64_t samples, std::uint64_t seed) {
        Rng rng(seed);
        analytics::MeetingSample s;
        {
          py::gil_scoped_release release;
          s = analytics::meeting_monte_carlo({v, rad, region}, samples, rng);
        }
        return std::make_pair(s.fractions.f_old, s.fractions.f_new);
      },
      py::arg("v"), py::arg("rad") = 75.0, py::arg("R") = 500.0, py::arg("samples") = 100000,
      py::arg("seed") = 1, "Monte-Carlo (f_old, f_new).");

  m.def("run_config", &run_config, py::arg("yaml"), py::arg("seed") = std::nullopt,
        "Simulate a single-cell YAML config and return its series and summary.");
  m.def("sweep", &sweep, py::arg("yaml"), py::arg("parallelism") = 1, py::arg("out_dir") = std::nullopt,
        "Run every cell and replicate of a YAML config; optionally write the output files.");
}
