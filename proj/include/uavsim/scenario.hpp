#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uavsim/config.hpp"

namespace uavsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double ground_distance(const Vec2& a, const Vec2& b);

/// Axis + sign of the current Manhattan leg.
enum class Heading : int { PlusX = 0, MinusX = 1, PlusY = 2, MinusY = 3 };

struct GroundUser {
  int id = 0;
  Vec2 position;
  double clock_hz = 0.0;        // Q_u
  double battery_capacity = 0;  // Z_u, J
  double battery_remaining = 0; // J
  double compute_budget = 0;    // Gamma_u
  double data_bits = 0;         // D_{u,t}, redrawn each timestep
  Heading heading = Heading::PlusX;

  friend bool operator==(const GroundUser&, const GroundUser&) = default;
};

struct RadioUnit {
  int id = 0;
  Vec2 position;
  double antenna_height = 0;  // H_g, m
  double clock_hz = 0;        // P_g
  int security_requirement = 6;  // W_g
  int resource_blocks = 1;       // M_g

  friend bool operator==(const RadioUnit&, const RadioUnit&) = default;
};

struct UavRelay {
  int id = 0;
  Vec2 position;
  Vec2 prev_position;
  double altitude = 0;      // H_a, fixed over an episode
  int resource_blocks = 1;  // M_a

  friend bool operator==(const UavRelay&, const UavRelay&) = default;
};

struct WorldState {
  int timestep = 0;
  std::vector<GroundUser> gus;
  std::vector<RadioUnit> orus;
  std::vector<UavRelay> uavs;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

using Rng = std::mt19937_64;

/// Stream-derived seed so parallel instances get independent RNGs.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t instance_index);

/// Draws a fresh world: positions uniform over the grid, per-entity
/// attributes uniform over the configured ranges. Pure in (config, rng state).
WorldState generate_scenario(const ScenarioConfig& config, Rng& rng);

/// Convenience overload seeding from config.rng_seed.
WorldState generate_scenario(const ScenarioConfig& config);

/// Redraws GU positions, attributes and data sizes while keeping the O-RU
/// registry from `topology` (episode reset with resample_topology = false).
WorldState regenerate_keeping_topology(const ScenarioConfig& config, const WorldState& topology,
                                       Rng& rng);

/// Redraws each GU's data size for the next timestep.
void redraw_data_sizes(WorldState& state, const ScenarioConfig& config, Rng& rng);

/// One Manhattan-model slot for every GU: move along the current axis at a
/// freshly drawn speed, keep direction with probability gu_dir_keep_prob,
/// reflect at the grid boundary. UAVs are not touched here.
void step_mobility(WorldState& state, const ScenarioConfig& config, Rng& rng);

/// Reflects a scalar coordinate into [0, limit].
double reflect_into(double x, double limit);

}  // namespace uavsim
