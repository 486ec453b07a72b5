#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavsim {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Immutable parameters of one experiment: grid geometry, entity counts,
/// radio constants, energy model, attribute ranges and objective weights.
///
/// Channel constants (pathloss_ref, pathloss_exp, noise_power) and ber_max
/// are not fixed by the reference parameter set; the defaults below were
/// chosen so that links inside a 100x100 m grid are reliable while direct
/// links beyond roughly 390 m are not. Override them in the config file if
/// a different regime is wanted.
struct ScenarioConfig {
  // geometry
  double grid_width = 100.0;   // m
  double grid_height = 100.0;  // m
  int num_orus = 2;
  int num_uavs = 3;
  int num_gus = 10;
  int horizon = 10;  // timesteps per episode

  // radio
  double bandwidth_gu_oru = 50e6;    // Hz
  double bandwidth_gu_uav = 40e6;    // Hz
  double bandwidth_uav_oru = 100e6;  // Hz
  double power_gu_oru = 1.0;         // W
  double power_gu_uav = 2.0;         // W
  double power_uav_oru = 4.0;        // W
  double noise_power = 1e-13;        // W
  double pathloss_ref = 1e-6;        // gain at 1 m
  double pathloss_exp = 2.0;
  double ber_max = 1e-30;

  // GU compute / communication power draw
  double compute_power = 4.0;  // W
  double comm_power = 7.0;     // W

  // rotary-wing energy model
  double p0 = 30.0;          // W, blade profile power at hover
  double p1 = 1.5;           // W, induced power at hover
  double c0 = 0.02;          // W/(m/s)^3, parasite constant
  double u_tip = 50.0;       // m/s, rotor tip speed
  double v_induced = 30.0;   // m/s, motor-induced velocity
  double slot_duration = 5.0;  // s
  bool literal_induced_term = false;

  // heights and motion limits
  double uav_altitude = 100.0;         // m
  double oru_height = 10.0;            // m
  double min_uav_separation = 5.0;     // m
  double max_uav_displacement = 30.0;  // m per slot

  // per-entity attribute ranges
  double gu_clock_min = 1.8e9;   // Hz
  double gu_clock_max = 2.4e9;   // Hz
  double oru_clock_min = 3.5e9;  // Hz
  double oru_clock_max = 3.9e9;  // Hz
  double battery_min = 50.0;     // J
  double battery_max = 250.0;    // J
  double compute_budget_min = 656.0;
  double compute_budget_max = 1.7e7;
  int security_req_min = 6;
  int security_req_max = 12;
  double data_min_bits = 8388608.0;   // 1 MB
  double data_max_bits = 83886080.0;  // 10 MB
  int rb_per_oru = 3;
  int rb_per_uav = 3;

  // GU mobility (Manhattan model)
  double gu_speed_min = 0.5;     // m/s
  double gu_speed_max = 2.0;     // m/s
  double gu_dir_keep_prob = 0.8;

  // objective weights, must sum to 1
  double w1 = 1.0 / 3.0;
  double w2 = 1.0 / 3.0;
  double w3 = 1.0 / 3.0;

  // per-family penalty weights
  double pen_security = 1.0;
  double pen_rb = 1.0;
  double pen_comp = 1.0;
  double pen_battery = 1.0;
  double pen_ber = 1.0;
  double pen_collision = 1.0;
  double pen_dmax = 1.0;

  // cycle cost of one primitive AND/OR/shift/XOR operation
  double cycle_and = 1.0;
  double cycle_or = 1.0;
  double cycle_shift = 1.0;
  double cycle_xor = 1.0;

  // how the per-GU compute budget constraint is read:
  //   complexity       -> C_k <= Gamma_u
  //   cycles_per_block  -> N * C_k <= Gamma_u
  //   blocks           -> N * ceil(D / B_k) <= Gamma_u
  std::string comp_constraint_mode = "complexity";

  std::uint64_t rng_seed = 42;
  bool resample_topology = false;
  bool rich_observation = false;
  std::string action_mode = "factored";  // factored | box
  bool heuristic_shuffle_order = false;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// PPO training knobs. Defaults follow the reference parameter set where it
/// specifies them; the rest are standard values.
struct PpoHyperparams {
  double learning_rate = 0.001;
  double discount = 0.99;
  double clip_range = 0.2;
  int epochs = 4;
  int minibatch = 64;
  double gae_lambda = 0.95;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double grad_clip = 0.5;
  int rollout_episodes = 5;  // episodes collected per update
  int episodes = 2000;
  int hidden_size = 64;
  int checkpoint_interval = 500;

  void validate() const;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  PpoHyperparams ppo;

  void validate() const;

  /// Canonical sorted key=value text; basis for hashing and round-trips.
  std::string canonical_text() const;
  std::uint64_t hash() const;

  std::vector<std::string> keys() const;
  std::string get(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  /// Parses a flat key = value file ('#' comments). Unknown keys are an
  /// error. Environment variables UAVSIM_<KEY> override file values.
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);

  void apply_env_overrides();
};

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ull);

}  // namespace uavsim
