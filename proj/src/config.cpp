#include "uavsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

namespace uavsim {

namespace {

using FieldPtr = std::variant<double ScenarioConfig::*, int ScenarioConfig::*,
                              bool ScenarioConfig::*, std::uint64_t ScenarioConfig::*,
                              std::string ScenarioConfig::*, double PpoHyperparams::*,
                              int PpoHyperparams::*>;

struct Field {
  const char* name;
  FieldPtr ptr;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"grid_width", &ScenarioConfig::grid_width},
      {"grid_height", &ScenarioConfig::grid_height},
      {"num_orus", &ScenarioConfig::num_orus},
      {"num_uavs", &ScenarioConfig::num_uavs},
      {"num_gus", &ScenarioConfig::num_gus},
      {"horizon", &ScenarioConfig::horizon},
      {"bandwidth_gu_oru", &ScenarioConfig::bandwidth_gu_oru},
      {"bandwidth_gu_uav", &ScenarioConfig::bandwidth_gu_uav},
      {"bandwidth_uav_oru", &ScenarioConfig::bandwidth_uav_oru},
      {"power_gu_oru", &ScenarioConfig::power_gu_oru},
      {"power_gu_uav", &ScenarioConfig::power_gu_uav},
      {"power_uav_oru", &ScenarioConfig::power_uav_oru},
      {"noise_power", &ScenarioConfig::noise_power},
      {"pathloss_ref", &ScenarioConfig::pathloss_ref},
      {"pathloss_exp", &ScenarioConfig::pathloss_exp},
      {"ber_max", &ScenarioConfig::ber_max},
      {"compute_power", &ScenarioConfig::compute_power},
      {"comm_power", &ScenarioConfig::comm_power},
      {"p0", &ScenarioConfig::p0},
      {"p1", &ScenarioConfig::p1},
      {"c0", &ScenarioConfig::c0},
      {"u_tip", &ScenarioConfig::u_tip},
      {"v_induced", &ScenarioConfig::v_induced},
      {"slot_duration", &ScenarioConfig::slot_duration},
      {"literal_induced_term", &ScenarioConfig::literal_induced_term},
      {"uav_altitude", &ScenarioConfig::uav_altitude},
      {"oru_height", &ScenarioConfig::oru_height},
      {"min_uav_separation", &ScenarioConfig::min_uav_separation},
      {"max_uav_displacement", &ScenarioConfig::max_uav_displacement},
      {"gu_clock_min", &ScenarioConfig::gu_clock_min},
      {"gu_clock_max", &ScenarioConfig::gu_clock_max},
      {"oru_clock_min", &ScenarioConfig::oru_clock_min},
      {"oru_clock_max", &ScenarioConfig::oru_clock_max},
      {"battery_min", &ScenarioConfig::battery_min},
      {"battery_max", &ScenarioConfig::battery_max},
      {"compute_budget_min", &ScenarioConfig::compute_budget_min},
      {"compute_budget_max", &ScenarioConfig::compute_budget_max},
      {"security_req_min", &ScenarioConfig::security_req_min},
      {"security_req_max", &ScenarioConfig::security_req_max},
      {"data_min_bits", &ScenarioConfig::data_min_bits},
      {"data_max_bits", &ScenarioConfig::data_max_bits},
      {"rb_per_oru", &ScenarioConfig::rb_per_oru},
      {"rb_per_uav", &ScenarioConfig::rb_per_uav},
      {"gu_speed_min", &ScenarioConfig::gu_speed_min},
      {"gu_speed_max", &ScenarioConfig::gu_speed_max},
      {"gu_dir_keep_prob", &ScenarioConfig::gu_dir_keep_prob},
      {"w1", &ScenarioConfig::w1},
      {"w2", &ScenarioConfig::w2},
      {"w3", &ScenarioConfig::w3},
      {"pen_security", &ScenarioConfig::pen_security},
      {"pen_rb", &ScenarioConfig::pen_rb},
      {"pen_comp", &ScenarioConfig::pen_comp},
      {"pen_battery", &ScenarioConfig::pen_battery},
      {"pen_ber", &ScenarioConfig::pen_ber},
      {"pen_collision", &ScenarioConfig::pen_collision},
      {"pen_dmax", &ScenarioConfig::pen_dmax},
      {"cycle_and", &ScenarioConfig::cycle_and},
      {"cycle_or", &ScenarioConfig::cycle_or},
      {"cycle_shift", &ScenarioConfig::cycle_shift},
      {"cycle_xor", &ScenarioConfig::cycle_xor},
      {"comp_constraint_mode", &ScenarioConfig::comp_constraint_mode},
      {"rng_seed", &ScenarioConfig::rng_seed},
      {"resample_topology", &ScenarioConfig::resample_topology},
      {"rich_observation", &ScenarioConfig::rich_observation},
      {"action_mode", &ScenarioConfig::action_mode},
      {"heuristic_shuffle_order", &ScenarioConfig::heuristic_shuffle_order},
      {"learning_rate", &PpoHyperparams::learning_rate},
      {"discount", &PpoHyperparams::discount},
      {"clip_range", &PpoHyperparams::clip_range},
      {"epochs", &PpoHyperparams::epochs},
      {"minibatch", &PpoHyperparams::minibatch},
      {"gae_lambda", &PpoHyperparams::gae_lambda},
      {"entropy_coef", &PpoHyperparams::entropy_coef},
      {"value_coef", &PpoHyperparams::value_coef},
      {"grad_clip", &PpoHyperparams::grad_clip},
      {"rollout_episodes", &PpoHyperparams::rollout_episodes},
      {"episodes", &PpoHyperparams::episodes},
      {"hidden_size", &PpoHyperparams::hidden_size},
      {"checkpoint_interval", &PpoHyperparams::checkpoint_interval},
  };
  return table;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': not a boolean: '" + value + "'");
}

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("invalid config field '" + field + "': " + why);
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

void ScenarioConfig::validate() const {
  require(num_gus >= 1, "num_gus", "count must be >= 1");
  require(num_orus >= 1, "num_orus", "count must be >= 1");
  require(num_uavs >= 0, "num_uavs", "count must be >= 0");
  require(horizon >= 1, "horizon", "count must be >= 1");
  require(grid_width > 0 && grid_height > 0, "grid_width", "grid must be positive");
  for (auto [v, name] : {std::pair<double, const char*>{bandwidth_gu_oru, "bandwidth_gu_oru"},
                         {bandwidth_gu_uav, "bandwidth_gu_uav"},
                         {bandwidth_uav_oru, "bandwidth_uav_oru"},
                         {power_gu_oru, "power_gu_oru"},
                         {power_gu_uav, "power_gu_uav"},
                         {power_uav_oru, "power_uav_oru"},
                         {noise_power, "noise_power"},
                         {pathloss_ref, "pathloss_ref"},
                         {pathloss_exp, "pathloss_exp"},
                         {compute_power, "compute_power"},
                         {comm_power, "comm_power"},
                         {p0, "p0"},
                         {p1, "p1"},
                         {c0, "c0"},
                         {u_tip, "u_tip"},
                         {v_induced, "v_induced"},
                         {slot_duration, "slot_duration"},
                         {uav_altitude, "uav_altitude"},
                         {oru_height, "oru_height"},
                         {min_uav_separation, "min_uav_separation"},
                         {max_uav_displacement, "max_uav_displacement"}}) {
    require(v > 0, name, "must be > 0");
  }
  require(ber_max > 0 && ber_max <= 0.5, "ber_max", "must be in (0, 0.5]");
  double diag = std::hypot(grid_width, grid_height);
  require(min_uav_separation < diag, "min_uav_separation", "must be below the grid diagonal");
  require(std::abs(w1 + w2 + w3 - 1.0) <= 1e-9, "w1", "objective weights must sum to 1");
  require(gu_clock_min > 0 && gu_clock_min <= gu_clock_max, "gu_clock_min", "bad range");
  require(oru_clock_min > 0 && oru_clock_min <= oru_clock_max, "oru_clock_min", "bad range");
  require(battery_min > 0 && battery_min <= battery_max, "battery_min", "bad range");
  require(compute_budget_min > 0 && compute_budget_min <= compute_budget_max,
          "compute_budget_min", "bad range");
  require(security_req_min >= 6 && security_req_max <= 12 &&
              security_req_min <= security_req_max,
          "security_req_min", "range must lie within [6, 12]");
  require(data_min_bits > 0 && data_min_bits <= data_max_bits, "data_min_bits", "bad range");
  require(rb_per_oru >= 1, "rb_per_oru", "must be >= 1");
  require(rb_per_uav >= 1, "rb_per_uav", "must be >= 1");
  require(gu_speed_min >= 0 && gu_speed_min <= gu_speed_max, "gu_speed_min", "bad range");
  require(gu_dir_keep_prob >= 0 && gu_dir_keep_prob <= 1, "gu_dir_keep_prob",
          "must be a probability");
  require(comp_constraint_mode == "complexity" || comp_constraint_mode == "cycles_per_block" ||
              comp_constraint_mode == "blocks",
          "comp_constraint_mode", "must be complexity|cycles_per_block|blocks");
  require(action_mode == "factored" || action_mode == "box", "action_mode",
          "must be factored|box");
}

void PpoHyperparams::validate() const {
  require(learning_rate >= 0, "learning_rate", "must be >= 0");
  require(discount >= 0 && discount <= 1, "discount", "must be in [0, 1]");
  require(clip_range > 0, "clip_range", "must be > 0");
  require(epochs >= 1, "epochs", "must be >= 1");
  require(minibatch >= 1, "minibatch", "must be >= 1");
  require(gae_lambda >= 0 && gae_lambda <= 1, "gae_lambda", "must be in [0, 1]");
  require(hidden_size >= 1, "hidden_size", "must be >= 1");
  require(rollout_episodes >= 1, "rollout_episodes", "must be >= 1");
  require(episodes >= 1, "episodes", "must be >= 1");
  require(checkpoint_interval >= 1, "checkpoint_interval", "must be >= 1");
}

void ExperimentConfig::validate() const {
  scenario.validate();
  ppo.validate();
}

std::vector<std::string> ExperimentConfig::keys() const {
  std::vector<std::string> out;
  out.reserve(fields().size());
  for (const auto& f : fields()) out.push_back(f.name);
  std::sort(out.begin(), out.end());
  return out;
}

std::string ExperimentConfig::get(const std::string& key) const {
  for (const auto& f : fields()) {
    if (key != f.name) continue;
    return std::visit(
        [&](auto ptr) -> std::string {
          using P = decltype(ptr);
          if constexpr (std::is_same_v<P, double ScenarioConfig::*>)
            return format_double(scenario.*ptr);
          else if constexpr (std::is_same_v<P, int ScenarioConfig::*>)
            return std::to_string(scenario.*ptr);
          else if constexpr (std::is_same_v<P, bool ScenarioConfig::*>)
            return (scenario.*ptr) ? "true" : "false";
          else if constexpr (std::is_same_v<P, std::uint64_t ScenarioConfig::*>)
            return std::to_string(scenario.*ptr);
          else if constexpr (std::is_same_v<P, std::string ScenarioConfig::*>)
            return scenario.*ptr;
          else if constexpr (std::is_same_v<P, double PpoHyperparams::*>)
            return format_double(ppo.*ptr);
          else
            return std::to_string(ppo.*ptr);
        },
        f.ptr);
  }
  throw ConfigError("unknown config key '" + key + "'");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key != f.name) continue;
    std::visit(
        [&](auto ptr) {
          using P = decltype(ptr);
          if constexpr (std::is_same_v<P, double ScenarioConfig::*>)
            scenario.*ptr = parse_double(key, value);
          else if constexpr (std::is_same_v<P, int ScenarioConfig::*>)
            scenario.*ptr = static_cast<int>(parse_double(key, value));
          else if constexpr (std::is_same_v<P, bool ScenarioConfig::*>)
            scenario.*ptr = parse_bool(key, value);
          else if constexpr (std::is_same_v<P, std::uint64_t ScenarioConfig::*>)
            scenario.*ptr = static_cast<std::uint64_t>(std::stoull(value));
          else if constexpr (std::is_same_v<P, std::string ScenarioConfig::*>)
            scenario.*ptr = value;
          else if constexpr (std::is_same_v<P, double PpoHyperparams::*>)
            ppo.*ptr = parse_double(key, value);
          else
            ppo.*ptr = static_cast<int>(parse_double(key, value));
        },
        f.ptr);
    return;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream os;
  for (const auto& key : keys()) os << key << " = " << get(key) << "\n";
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::string text = canonical_text();
  return fnv1a(text.data(), text.size());
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.apply_env_overrides();
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

void ExperimentConfig::apply_env_overrides() {
  for (const auto& key : keys()) {
    std::string env_key = "UAVSIM_" + key;
    std::transform(env_key.begin(), env_key.end(), env_key.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (const char* v = std::getenv(env_key.c_str())) set(key, v);
  }
}

}  // namespace uavsim
