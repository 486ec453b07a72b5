#include "uavsim/scenario.hpp"

#include <cmath>

namespace uavsim {

double ground_distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t instance_index) {
  // splitmix64 over the pair; avoids correlated mt19937 streams
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ull * (instance_index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

GroundUser draw_gu(int id, const ScenarioConfig& c, Rng& rng) {
  GroundUser gu;
  gu.id = id;
  gu.position = {uniform(rng, 0, c.grid_width), uniform(rng, 0, c.grid_height)};
  gu.clock_hz = uniform(rng, c.gu_clock_min, c.gu_clock_max);
  gu.battery_capacity = uniform(rng, c.battery_min, c.battery_max);
  gu.battery_remaining = gu.battery_capacity;
  gu.compute_budget = uniform(rng, c.compute_budget_min, c.compute_budget_max);
  gu.data_bits = uniform(rng, c.data_min_bits, c.data_max_bits);
  gu.heading = static_cast<Heading>(std::uniform_int_distribution<int>(0, 3)(rng));
  return gu;
}

}  // namespace

WorldState generate_scenario(const ScenarioConfig& config, Rng& rng) {
  config.validate();
  WorldState state;
  state.timestep = 0;
  state.orus.reserve(config.num_orus);
  for (int g = 0; g < config.num_orus; ++g) {
    RadioUnit oru;
    oru.id = g;
    oru.position = {uniform(rng, 0, config.grid_width), uniform(rng, 0, config.grid_height)};
    oru.antenna_height = config.oru_height;
    oru.clock_hz = uniform(rng, config.oru_clock_min, config.oru_clock_max);
    oru.security_requirement = std::uniform_int_distribution<int>(
        config.security_req_min, config.security_req_max)(rng);
    oru.resource_blocks = config.rb_per_oru;
    state.orus.push_back(oru);
  }
  state.uavs.reserve(config.num_uavs);
  for (int a = 0; a < config.num_uavs; ++a) {
    UavRelay uav;
    uav.id = a;
    uav.position = {uniform(rng, 0, config.grid_width), uniform(rng, 0, config.grid_height)};
    uav.prev_position = uav.position;
    uav.altitude = config.uav_altitude;
    uav.resource_blocks = config.rb_per_uav;
    state.uavs.push_back(uav);
  }
  state.gus.reserve(config.num_gus);
  for (int u = 0; u < config.num_gus; ++u) state.gus.push_back(draw_gu(u, config, rng));
  return state;
}

WorldState generate_scenario(const ScenarioConfig& config) {
  Rng rng(config.rng_seed);
  return generate_scenario(config, rng);
}

WorldState regenerate_keeping_topology(const ScenarioConfig& config, const WorldState& topology,
                                       Rng& rng) {
  WorldState state = generate_scenario(config, rng);
  state.orus = topology.orus;
  return state;
}

void redraw_data_sizes(WorldState& state, const ScenarioConfig& config, Rng& rng) {
  for (auto& gu : state.gus)
    gu.data_bits = uniform(rng, config.data_min_bits, config.data_max_bits);
}

double reflect_into(double x, double limit) {
  if (limit <= 0) return 0;
  double period = 2.0 * limit;
  x = std::fmod(x, period);
  if (x < 0) x += period;
  return x <= limit ? x : period - x;
}

void step_mobility(WorldState& state, const ScenarioConfig& config, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> dir(0, 3);
  for (auto& gu : state.gus) {
    if (unit(rng) >= config.gu_dir_keep_prob) gu.heading = static_cast<Heading>(dir(rng));
    double speed = uniform(rng, config.gu_speed_min, config.gu_speed_max);
    double step = speed * config.slot_duration;
    switch (gu.heading) {
      case Heading::PlusX: gu.position.x += step; break;
      case Heading::MinusX: gu.position.x -= step; break;
      case Heading::PlusY: gu.position.y += step; break;
      case Heading::MinusY: gu.position.y -= step; break;
    }
    gu.position.x = reflect_into(gu.position.x, config.grid_width);
    gu.position.y = reflect_into(gu.position.y, config.grid_height);
  }
}

}  // namespace uavsim
