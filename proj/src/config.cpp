#include "wpgg/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace wpgg {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

struct Problem {
  std::string message;
};

double as_double(const YAML::Node& node) {
  if (!node.IsScalar()) throw Problem{"expected a number"};
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    throw Problem{"expected a number, got '" + node.Scalar() + "'"};
  }
}

std::size_t as_count(const YAML::Node& node) {
  if (!node.IsScalar()) throw Problem{"expected a non-negative integer"};
  long long v = 0;
  try {
    v = node.as<long long>();
  } catch (const YAML::Exception&) {
    throw Problem{"expected a non-negative integer, got '" + node.Scalar() + "'"};
  }
  if (v < 0) throw Problem{"must be >= 0"};
  return static_cast<std::size_t>(v);
}

bool as_bool(const YAML::Node& node) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw Problem{"expected true or false"};
  }
}

std::string as_word(const YAML::Node& node) {
  if (!node.IsScalar()) throw Problem{"expected a word"};
  return node.Scalar();
}

template <typename T, typename Conv>
std::vector<T> as_list(const YAML::Node& node, Conv conv) {
  std::vector<T> out;
  if (node.IsSequence()) {
    if (node.size() == 0) throw Problem{"list must not be empty"};
    for (const auto& item : node) out.push_back(conv(item));
  } else {
    out.push_back(conv(node));
  }
  return out;
}

// Settings gathered before the variant-typed models are assembled.
struct Draft {
  SweepSpec spec;
  std::string mobility;
  std::string connectivity;
  LevyParams levy;
  bool flight_max_set = false;
  double radio_range = 75.0;
  QuasiUnitDisk qudg;
  std::optional<std::vector<double>> synergy;
  std::optional<std::vector<double>> eta;
};

using Handler = std::function<void(const YAML::Node&, Draft&)>;

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table = {
      {"scenario", [](const YAML::Node&, Draft&) {}},
      {"number_of_nodes", [](const YAML::Node& n, Draft& d) { d.spec.base.n_nodes = as_count(n); }},
      {"number_of_seeders",
       [](const YAML::Node& n, Draft& d) { d.spec.axes.seeders = as_list<std::size_t>(n, as_count); }},
      {"number_of_sources", [](const YAML::Node& n, Draft& d) { d.spec.base.n_sources = as_count(n); }},
      {"buffer_size",
       [](const YAML::Node& n, Draft& d) { d.spec.axes.packets = as_list<std::size_t>(n, as_count); }},
      {"alpha", [](const YAML::Node& n, Draft& d) { d.levy.alpha = as_double(n); }},
      {"beta", [](const YAML::Node& n, Draft& d) { d.levy.beta = as_double(n); }},
      {"flight_min", [](const YAML::Node& n, Draft& d) { d.levy.flight_min = as_double(n); }},
      {"flight_max",
       [](const YAML::Node& n, Draft& d) {
         d.levy.flight_max = as_double(n);
         d.flight_max_set = true;
       }},
      {"pause_max", [](const YAML::Node& n, Draft& d) { d.levy.pause_max = as_double(n); }},
      {"velocity",
       [](const YAML::Node& n, Draft& d) { d.spec.axes.velocity = as_list<double>(n, as_double); }},
      {"mobility", [](const YAML::Node& n, Draft& d) { d.mobility = as_word(n); }},
      {"connectivity", [](const YAML::Node& n, Draft& d) { d.connectivity = as_word(n); }},
      {"radio_range", [](const YAML::Node& n, Draft& d) { d.radio_range = as_double(n); }},
      {"zeta", [](const YAML::Node& n, Draft& d) { d.qudg.zeta = as_double(n); }},
      {"r_inner", [](const YAML::Node& n, Draft& d) { d.qudg.r_inner = as_double(n); }},
      {"r_outer", [](const YAML::Node& n, Draft& d) { d.qudg.r_outer = as_double(n); }},
      {"qudg_band",
       [](const YAML::Node& n, Draft& d) {
         const auto w = as_word(n);
         if (w == "monotone") {
           d.qudg.band = QudgBand::Monotone;
         } else if (w == "printed") {
           d.qudg.band = QudgBand::AsPrinted;
         } else {
           throw Problem{"expected monotone or printed"};
         }
       }},
      {"arena_width", [](const YAML::Node& n, Draft& d) { d.spec.base.arena.width = as_double(n); }},
      {"arena_height", [](const YAML::Node& n, Draft& d) { d.spec.base.arena.height = as_double(n); }},
      {"boundary",
       [](const YAML::Node& n, Draft& d) {
         const auto w = as_word(n);
         if (w == "torus") {
           d.spec.base.arena.boundary = Boundary::Torus;
         } else if (w == "reflect") {
           d.spec.base.arena.boundary = Boundary::Reflect;
         } else {
           throw Problem{"expected torus or reflect"};
         }
       }},
      {"initial_cooperator_ratio",
       [](const YAML::Node& n, Draft& d) { d.spec.base.initial_coop_ratio = as_double(n); }},
      {"noise_variance", [](const YAML::Node& n, Draft& d) { d.spec.base.game.sigma = as_double(n); }},
      {"synergy_factor", [](const YAML::Node& n, Draft& d) { d.synergy = as_list<double>(n, as_double); }},
      {"eta", [](const YAML::Node& n, Draft& d) { d.eta = as_list<double>(n, as_double); }},
      {"cost", [](const YAML::Node& n, Draft& d) { d.spec.base.game.c = as_double(n); }},
      {"selection_intensity",
       [](const YAML::Node& n, Draft& d) { d.spec.base.game.kappa = as_double(n); }},
      {"game_variant",
       [](const YAML::Node& n, Draft& d) {
         try {
           d.spec.base.game.variant = parse_game_variant(as_word(n));
         } catch (const std::invalid_argument& e) {
           throw Problem{e.what()};
         }
       }},
      {"gated_update", [](const YAML::Node& n, Draft& d) { d.spec.base.game.gated_update = as_bool(n); }},
      {"literal_double_sum", [](const YAML::Node& n, Draft& d) { d.spec.base.game.literal_double_sum = as_bool(n); }},
      {"max_slots", [](const YAML::Node& n, Draft& d) { d.spec.base.max_slots = as_count(n); }},
      {"settle_slots", [](const YAML::Node& n, Draft& d) { d.spec.base.settle_slots = as_count(n); }},
      {"seed",
       [](const YAML::Node& n, Draft& d) {
         try {
           d.spec.master_seed = n.as<std::uint64_t>();
         } catch (const YAML::Exception&) {
           throw Problem{"expected an unsigned 64-bit integer"};
         }
       }},
      {"replicates", [](const YAML::Node& n, Draft& d) { d.spec.replicates = as_count(n); }},
  };
  return table;
}

std::string mobility_name(const MobilityModel& m) {
  if (std::holds_alternative<StaticMobility>(m)) return "static";
  if (std::holds_alternative<RandomDirection>(m)) return "random_direction";
  return "levy_walk";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems, "; ")), problems_(std::move(problems)) {}

Scenario parse_scenario(std::string_view name) {
  if (name == "framework_pgg") return Scenario::FrameworkPGG;
  if (name == "info_dissemination") return Scenario::InfoDissemination;
  if (name == "content_download") return Scenario::ContentDownload;
  throw std::invalid_argument("unknown scenario '" + std::string(name) +
                              "' (framework_pgg, info_dissemination, content_download)");
}

GameVariant parse_game_variant(std::string_view name) {
  if (name == "classical_fixed") return GameVariant::ClassicalFixed;
  if (name == "classical_diversified") return GameVariant::ClassicalDiversified;
  if (name == "wireless_framework") return GameVariant::WirelessFramework;
  if (name == "dissemination") return GameVariant::Dissemination;
  throw std::invalid_argument("unknown game variant '" + std::string(name) + "'");
}

std::string to_string(GameVariant v) {
  switch (v) {
    case GameVariant::ClassicalFixed: return "classical_fixed";
    case GameVariant::ClassicalDiversified: return "classical_diversified";
    case GameVariant::WirelessFramework: return "wireless_framework";
    case GameVariant::Dissemination: return "dissemination";
  }
  return "unknown";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : handlers()) out.push_back(k);
    return out;
  }();
  return keys;
}

std::size_t SweepSpec::cell_count() const {
  return axes.synergy.size() * axes.velocity.size() * axes.seeders.size() * axes.packets.size();
}

std::vector<Cell> expand_cells(const SweepSpec& spec) {
  std::vector<Cell> cells;
  cells.reserve(spec.cell_count());
  for (double s : spec.axes.synergy) {
    for (double v : spec.axes.velocity) {
      for (std::size_t seeders : spec.axes.seeders) {
        for (std::size_t m : spec.axes.packets) {
          Cell c{cells.size(), s, v, seeders, m, {}};
          c.key = fmt::format("{}={};velocity={};seeders={};packets={}",
                              spec.axes.normalized_synergy ? "eta" : "r", s, v, seeders, m);
          cells.push_back(std::move(c));
        }
      }
    }
  }
  return cells;
}

SimConfig cell_config(const SweepSpec& spec, const Cell& cell) {
  SimConfig cfg = spec.base;
  if (spec.axes.normalized_synergy) {
    cfg.eta = cell.synergy;
  } else {
    cfg.eta.reset();
    cfg.game.r = cell.synergy;
  }
  if (auto* rd = std::get_if<RandomDirection>(&cfg.mobility)) {
    rd->velocity = cell.velocity;
  } else if (auto* lw = std::get_if<LevyWalk>(&cfg.mobility)) {
    lw->params.velocity = cell.velocity;
  } else if (cell.velocity != 0.0) {
    throw std::invalid_argument("static mobility requires velocity 0");
  }
  cfg.n_seeders = cell.seeders;
  cfg.packets = cell.packets;
  return cfg;
}

std::uint64_t replicate_seed(const SweepSpec& spec, const Cell& cell, std::size_t replicate) {
  return derive_seed(spec.master_seed, fnv1a64(cell.key), replicate);
}

void SweepSpec::validate() const {
  std::vector<std::string> problems;
  if (replicates == 0) problems.emplace_back("replicates: must be >= 1");
  if (axes.synergy.empty() || axes.velocity.empty() || axes.seeders.empty() || axes.packets.empty()) {
    problems.emplace_back("sweep axes must not be empty");
  }
  if (problems.empty()) {
    for (const auto& cell : expand_cells(*this)) {
      try {
        cell_config(*this, cell).validate();
      } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        // One message per distinct violation is enough.
        if (std::find(problems.begin(), problems.end(), msg) == problems.end()) {
          problems.push_back(msg);
        }
      }
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

SweepSpec parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError({fmt::format("line {}: parse error: {}", e.mark.line + 1, e.msg)});
  }
  if (!root.IsMap()) throw ConfigError({"config must be a key: value mapping"});

  const auto scenario_node = root["scenario"];
  if (!scenario_node) throw ConfigError({"key 'scenario': required"});
  Scenario scenario{};
  try {
    scenario = parse_scenario(as_word(scenario_node));
  } catch (const std::exception& e) {
    throw ConfigError({fmt::format("line {}: key 'scenario': {}", scenario_node.Mark().line + 1,
                                   e.what())});
  } catch (const Problem& p) {
    throw ConfigError({fmt::format("line {}: key 'scenario': {}", scenario_node.Mark().line + 1,
                                   p.message)});
  }

  Draft draft;
  draft.spec.base = SimConfig::defaults(scenario);
  const SimConfig& defaults = draft.spec.base;
  draft.mobility = mobility_name(defaults.mobility);
  if (const auto* lw = std::get_if<LevyWalk>(&defaults.mobility)) draft.levy = lw->params;
  draft.connectivity =
      std::holds_alternative<UnitDisk>(defaults.connectivity) ? "unit_disk" : "quasi_unit_disk";
  if (const auto* q = std::get_if<QuasiUnitDisk>(&defaults.connectivity)) draft.qudg = *q;
  if (const auto* u = std::get_if<UnitDisk>(&defaults.connectivity)) draft.radio_range = u->rad;

  std::vector<std::string> problems;
  const auto& table = handlers();
  for (const auto& entry : root) {
    const std::string key = entry.first.Scalar();
    const int line = entry.first.Mark().line + 1;
    const auto it = table.find(key);
    if (it == table.end()) {
      problems.push_back(fmt::format("line {}: unknown key '{}'", line, key));
      continue;
    }
    try {
      it->second(entry.second, draft);
    } catch (const Problem& p) {
      problems.push_back(fmt::format("line {}: key '{}': {}", line, key, p.message));
    }
  }
  if (draft.synergy && draft.eta) {
    problems.emplace_back("keys 'synergy_factor' and 'eta' are mutually exclusive");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  SweepSpec& spec = draft.spec;
  if (!draft.flight_max_set) draft.levy.flight_max = spec.base.arena.width;
  if (draft.mobility == "static") {
    spec.base.mobility = StaticMobility{};
  } else if (draft.mobility == "random_direction") {
    spec.base.mobility = RandomDirection{0.0};
  } else if (draft.mobility == "levy_walk") {
    spec.base.mobility = LevyWalk{draft.levy};
  } else {
    problems.push_back("key 'mobility': expected static, random_direction or levy_walk");
  }
  if (draft.connectivity == "unit_disk") {
    spec.base.connectivity = UnitDisk{draft.radio_range};
  } else if (draft.connectivity == "quasi_unit_disk") {
    spec.base.connectivity = draft.qudg;
  } else {
    problems.push_back("key 'connectivity': expected unit_disk or quasi_unit_disk");
  }
  // Parameters of the models not selected are still checked.
  try {
    validate(ConnectivityModel{draft.qudg});
  } catch (const std::invalid_argument& e) {
    problems.emplace_back(e.what());
  }
  try {
    draft.levy.validate();
  } catch (const std::invalid_argument& e) {
    problems.emplace_back(e.what());
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  if (draft.eta) {
    spec.axes.normalized_synergy = true;
    spec.axes.synergy = *draft.eta;
  } else {
    spec.axes.synergy = draft.synergy.value_or(std::vector<double>{spec.base.game.r});
  }
  if (spec.axes.velocity.empty()) {
    spec.axes.velocity = {std::get_if<LevyWalk>(&spec.base.mobility) ? draft.levy.velocity : 0.0};
  }
  if (spec.axes.seeders.empty()) spec.axes.seeders = {spec.base.n_seeders};
  if (spec.axes.packets.empty()) spec.axes.packets = {spec.base.packets};
  spec.validate();
  return spec;
}

SweepSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace wpgg
