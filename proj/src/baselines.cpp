#include "uavsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uavsim {

PolicyKind policy_kind_from_name(const std::string& name) {
  if (name == "nearest") return PolicyKind::NearestWithUavs;
  if (name == "nouav") return PolicyKind::NoUav;
  if (name == "random") return PolicyKind::Random;
  throw std::invalid_argument("unknown policy kind: " + name + " (nearest|nouav|random)");
}

const char* policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::NearestWithUavs: return "nearest";
    case PolicyKind::NoUav: return "nouav";
    case PolicyKind::Random: return "random";
  }
  return "?";
}

int minimal_key_for_requirement(int requirement) {
  for (int n : kKeyLengths)
    if (security_level(n) >= requirement) return n;
  return kKeyLengths.back();
}

namespace {

Vec2 random_disk_displacement(double radius, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double angle = unit(rng) * 2.0 * M_PI;
  double r = radius * std::sqrt(unit(rng));
  return {r * std::cos(angle), r * std::sin(angle)};
}

int nearest_oru_for_uav(const UavRelay& uav, const WorldState& state,
                        const ScenarioConfig& config) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < state.orus.size(); ++g) {
    double d = distance_uav_oru(uav.position, state.orus[g].position, uav.altitude,
                                config.oru_height);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(g);
    }
  }
  return best;
}

DecisionVector greedy_assign(const WorldState& state, const ScenarioConfig& config, Rng& rng,
                             bool allow_relay, bool move_uavs) {
  const int num_gus = static_cast<int>(state.gus.size());
  const int num_orus = static_cast<int>(state.orus.size());
  const int num_uavs = static_cast<int>(state.uavs.size());

  DecisionVector decision;
  decision.association.resize(num_gus);
  decision.key_length.resize(num_gus);
  decision.displacement.assign(num_uavs, Vec2{});

  std::vector<int> order(num_gus);
  std::iota(order.begin(), order.end(), 0);
  if (config.heuristic_shuffle_order) std::shuffle(order.begin(), order.end(), rng);

  std::vector<int> oru_load(num_orus, 0);
  std::vector<int> uav_load(num_uavs, 0);

  for (int u : order) {
    const GroundUser& gu = state.gus[u];
    int best_oru = -1, best_uav = -1;
    double best_oru_d = std::numeric_limits<double>::infinity();
    double best_free_d = std::numeric_limits<double>::infinity();
    bool best_free_is_relay = false;
    int best_free_target = -1;

    for (int g = 0; g < num_orus; ++g) {
      double d = distance_gu_oru(gu.position, state.orus[g].position, config.oru_height);
      if (d < best_oru_d) {
        best_oru_d = d;
        best_oru = g;
      }
      if (oru_load[g] < state.orus[g].resource_blocks && d < best_free_d) {
        best_free_d = d;
        best_free_is_relay = false;
        best_free_target = g;
      }
    }
    if (allow_relay) {
      for (int a = 0; a < num_uavs; ++a) {
        double d = distance_gu_uav(gu.position, state.uavs[a].position, state.uavs[a].altitude);
        if (uav_load[a] < state.uavs[a].resource_blocks && d < best_free_d) {
          best_free_d = d;
          best_free_is_relay = true;
          best_free_target = a;
        }
      }
    }

    Association assoc;
    if (best_free_target < 0) {
      // everything saturated: take the nearest O-RU anyway and eat the RB
      // violation
      assoc.relayed = false;
      assoc.oru = best_oru;
      ++oru_load[best_oru];
      best_uav = -1;
    } else if (best_free_is_relay) {
      assoc.relayed = true;
      assoc.uav = best_free_target;
      assoc.oru = nearest_oru_for_uav(state.uavs[best_free_target], state, config);
      ++uav_load[best_free_target];
    } else {
      assoc.relayed = false;
      assoc.oru = best_free_target;
      ++oru_load[best_free_target];
    }
    decision.association[u] = assoc;
    decision.key_length[u] =
        minimal_key_for_requirement(state.orus[assoc.oru].security_requirement);
  }

  if (move_uavs) {
    for (int a = 0; a < num_uavs; ++a)
      decision.displacement[a] = random_disk_displacement(config.max_uav_displacement, rng);
  }
  return decision;
}

}  // namespace

DecisionVector nearest_policy_act(const WorldState& state, const ScenarioConfig& config,
                                  Rng& rng) {
  return greedy_assign(state, config, rng, /*allow_relay=*/true, /*move_uavs=*/true);
}

DecisionVector no_uav_policy_act(const WorldState& state, const ScenarioConfig& config,
                                 Rng& rng) {
  return greedy_assign(state, config, rng, /*allow_relay=*/false, /*move_uavs=*/false);
}

DecisionVector random_policy_act(const WorldState& state, const ScenarioConfig& config,
                                 Rng& rng) {
  const int num_gus = static_cast<int>(state.gus.size());
  const int num_orus = static_cast<int>(state.orus.size());
  const int num_uavs = static_cast<int>(state.uavs.size());
  DecisionVector decision;
  decision.association.resize(num_gus);
  decision.key_length.resize(num_gus);
  decision.displacement.assign(num_uavs, Vec2{});
  std::uniform_int_distribution<int> target(0, num_orus + num_uavs * num_orus - 1);
  std::uniform_int_distribution<int> key(0, static_cast<int>(kKeyLengths.size()) - 1);
  for (int u = 0; u < num_gus; ++u) {
    int idx = target(rng);
    Association assoc;
    if (idx < num_orus) {
      assoc.relayed = false;
      assoc.oru = idx;
    } else {
      assoc.relayed = true;
      assoc.uav = (idx - num_orus) / num_orus;
      assoc.oru = (idx - num_orus) % num_orus;
    }
    decision.association[u] = assoc;
    decision.key_length[u] = kKeyLengths[key(rng)];
  }
  for (int a = 0; a < num_uavs; ++a)
    decision.displacement[a] = random_disk_displacement(config.max_uav_displacement, rng);
  return decision;
}

DecisionVector HeuristicPolicy::act(const WorldState& state, const ScenarioConfig& config) {
  switch (kind) {
    case PolicyKind::NearestWithUavs: return nearest_policy_act(state, config, rng);
    case PolicyKind::NoUav: return no_uav_policy_act(state, config, rng);
    case PolicyKind::Random: return random_policy_act(state, config, rng);
  }
  throw std::logic_error("unreachable");
}

}  // namespace uavsim
