#pragma once

#include "uavsim/env.hpp"

namespace uavsim {

enum class PolicyKind { NearestWithUavs, NoUav, Random };

PolicyKind policy_kind_from_name(const std::string& name);
const char* policy_kind_name(PolicyKind kind);

/// Greedy nearest-target association: each GU (ascending id, or a seeded
/// shuffle when heuristic_shuffle_order is set) takes the nearest O-RU or UAV
/// with a free resource block, measured by 3-D link distance. Relayed GUs
/// route to the UAV's nearest O-RU. Key length is the smallest one meeting
/// the chosen O-RU's requirement. UAV displacement is uniform over the
/// d_max disk.
DecisionVector nearest_policy_act(const WorldState& state, const ScenarioConfig& config,
                                  Rng& rng);

/// As nearest_policy_act with the relay option removed and UAVs held still.
DecisionVector no_uav_policy_act(const WorldState& state, const ScenarioConfig& config,
                                 Rng& rng);

/// Uniform random structurally-valid decision.
DecisionVector random_policy_act(const WorldState& state, const ScenarioConfig& config,
                                 Rng& rng);

struct HeuristicPolicy {
  PolicyKind kind;
  Rng rng;

  HeuristicPolicy(PolicyKind kind, std::uint64_t seed) : kind(kind), rng(seed) {}

  DecisionVector act(const WorldState& state, const ScenarioConfig& config);
};

/// Smallest supported key length whose security level meets `requirement`.
int minimal_key_for_requirement(int requirement);

}  // namespace uavsim
