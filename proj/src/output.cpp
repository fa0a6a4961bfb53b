#include "wpgg/output.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"

namespace wpgg {

namespace {

using nlohmann::json;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

json mean_se_json(const MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}}; }

json config_json(const SweepSpec& spec) {
  const SimConfig& b = spec.base;
  json mobility;
  if (std::holds_alternative<StaticMobility>(b.mobility)) {
    mobility = {{"kind", "static"}};
  } else if (const auto* rd = std::get_if<RandomDirection>(&b.mobility)) {
    mobility = {{"kind", "random_direction"}, {"velocity", rd->velocity}};
  } else {
    const auto& p = std::get<LevyWalk>(b.mobility).params;
    mobility = {{"kind", "levy_walk"},   {"alpha", p.alpha},
                {"beta", p.beta},        {"velocity", p.velocity},
                {"flight_min", p.flight_min}, {"flight_max", p.flight_max},
                {"pause_max", p.pause_max}};
  }
  json connectivity;
  if (const auto* ud = std::get_if<UnitDisk>(&b.connectivity)) {
    connectivity = {{"kind", "unit_disk"}, {"radio_range", ud->rad}};
  } else {
    const auto& q = std::get<QuasiUnitDisk>(b.connectivity);
    connectivity = {{"kind", "quasi_unit_disk"},
                    {"r_inner", q.r_inner},
                    {"r_outer", q.r_outer},
                    {"zeta", q.zeta},
                    {"band", q.band == QudgBand::Monotone ? "monotone" : "printed"}};
  }
  return {
      {"scenario", to_string(b.scenario)},
      {"number_of_nodes", b.n_nodes},
      {"arena",
       {{"width", b.arena.width},
        {"height", b.arena.height},
        {"boundary", b.arena.boundary == Boundary::Torus ? "torus" : "reflect"}}},
      {"mobility", mobility},
      {"connectivity", connectivity},
      {"game",
       {{"variant", to_string(b.game.variant)},
        {"cost", b.game.c},
        {"selection_intensity", b.game.kappa},
        {"noise_sigma", b.game.sigma},
        {"gated_update", b.game.gated_update},
        {"literal_double_sum", b.game.literal_double_sum}}},
      {"number_of_sources", b.n_sources},
      {"initial_cooperator_ratio", b.initial_coop_ratio},
      {"max_slots", b.max_slots},
      {"settle_slots", b.settle_slots},
      {"axes",
       {{spec.axes.normalized_synergy ? "eta" : "synergy_factor", spec.axes.synergy},
        {"velocity", spec.axes.velocity},
        {"number_of_seeders", spec.axes.seeders},
        {"buffer_size", spec.axes.packets}}},
      {"replicates", spec.replicates},
      {"seed", spec.master_seed},
  };
}

}  // namespace

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_number(double v) { return fmt::format("{}", v); }

std::string results_csv(const SweepResult& sweep) {
  std::string out =
      "run_id,scenario,r,eta,mean_degree,v,n_seeders,M,seed,slots,termination,steady_fc,"
      "pending_final,delivered_fraction\r\n";
  for (const auto& rec : sweep.runs) {
    const auto& r = rec.row;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\r\n", csv_field(r.run_id),
                       csv_field(to_string(r.scenario)), format_number(r.r), format_number(r.eta),
                       format_number(r.mean_degree), format_number(r.velocity), r.seeders,
                       r.packets, r.seed, r.slots, csv_field(to_string(r.cause)),
                       format_number(r.steady_coop_fraction), r.pending_final,
                       format_number(r.delivered_fraction));
  }
  return out;
}

std::string timeseries_csv(const SweepResult& sweep) {
  std::string out = "run_id,slot,f_c,pending\r\n";
  for (const auto& rec : sweep.runs) {
    const auto& res = rec.result;
    const std::string id = csv_field(rec.row.run_id);
    for (std::size_t t = 0; t < res.coop_fraction.size(); ++t) {
      const std::string pending = res.pending.empty() ? std::string{} : std::to_string(res.pending[t]);
      out += fmt::format("{},{},{},{}\r\n", id, t, format_number(res.coop_fraction[t]), pending);
    }
  }
  return out;
}

std::string ecdf_csv(const SweepResult& sweep) {
  std::string out = "cell,packet_count,cumulative_fraction\r\n";
  for (const auto& cell : sweep.cells) {
    const auto ecdf = pooled_ecdf(sweep, cell.index);
    for (std::size_t k = 0; k < ecdf.size(); ++k) {
      out += fmt::format("{},{},{}\r\n", cell.index, k, format_number(ecdf[k]));
    }
  }
  return out;
}

std::string meeting_csv(const std::vector<analytics::MeetingRow>& rows) {
  std::string out = "v,f_old,f_new,method\r\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\r\n", format_number(r.velocity), format_number(r.f_old),
                       format_number(r.f_new), csv_field(r.method));
  }
  return out;
}

std::string summary_json(const SweepSpec& spec, const SweepResult& sweep) {
  json cells = json::array();
  for (const auto& s : summarize(sweep)) {
    cells.push_back({
        {"cell", s.cell.index},
        {"key", s.cell.key},
        {spec.axes.normalized_synergy ? "eta" : "synergy_factor", s.cell.synergy},
        {"velocity", s.cell.velocity},
        {"number_of_seeders", s.cell.seeders},
        {"buffer_size", s.cell.packets},
        {"runs", s.runs},
        {"steady_fc", mean_se_json(s.steady_coop_fraction)},
        {"delivered_fraction", mean_se_json(s.delivered_fraction)},
        {"pending_final", mean_se_json(s.pending_final)},
        {"eta_realized", mean_se_json(s.eta)},
        {"slots", mean_se_json(s.slots)},
    });
  }
  json failures = json::array();
  for (const auto& f : sweep.failures) {
    failures.push_back({{"cell", f.cell}, {"replicate", f.replicate}, {"key", f.cell_key},
                        {"message", f.message}});
  }
  json doc = {{"config", config_json(spec)}, {"cells", cells}, {"failures", failures}};
  return doc.dump(2) + "\n";
}

void emit_outputs(const SweepSpec& spec, const SweepResult& sweep,
                  const std::filesystem::path& out_dir, const OutputOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw std::runtime_error("cannot create output directory '" + out_dir.string() + "'");
  }
  write_file(out_dir / "results.csv", results_csv(sweep));
  write_file(out_dir / "timeseries.csv", timeseries_csv(sweep));
  write_file(out_dir / "ecdf.csv", ecdf_csv(sweep));

  const double rad = reach(spec.base.connectivity);
  const double region = std::min(spec.base.arena.width, spec.base.arena.height) / 2.0;
  std::vector<analytics::MeetingRow> rows;
  if (rad < region) {
    rows = analytics::meeting_table(rad, region, spec.axes.velocity, options.meeting_samples,
                                    spec.master_seed);
  }
  write_file(out_dir / "meeting.csv", meeting_csv(rows));
  write_file(out_dir / "summary.json", summary_json(spec, sweep));
}

}  // namespace wpgg
