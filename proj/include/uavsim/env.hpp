#pragma once

#include <optional>

#include "uavsim/objective.hpp"

namespace uavsim {

/// Head layout shared between the environment (decoding) and the agent
/// (distribution construction). Single source of truth for action wiring.
struct ActionSpec {
  std::vector<int> categorical_sizes;  // one entry per categorical head
  int continuous_dim = 0;              // tanh-squashed dims in [-1, 1]
  // factored mode: U association heads (G + A*G), U key heads (8), 2A dims
  // box mode: no categorical heads, 2U + 2A dims (association/key binned)
  bool box_mode = false;
  int num_gus = 0, num_orus = 0, num_uavs = 0;

  int association_head_size() const { return num_orus + num_uavs * num_orus; }
  static ActionSpec from_config(const ScenarioConfig& config);
};

struct Action {
  std::vector<int> categorical;     // one index per categorical head
  std::vector<double> continuous;   // squashed values in [-1, 1]
};

struct Transition {
  std::vector<double> observation;
  Action action;
  double reward_final = 0;
  std::vector<double> next_observation;
  bool done = false;
  StepOutcome outcome;
};

/// Episodic MDP wrapper over the simulator. One instance is one logical
/// thread of execution; run parallel instances with distinct instance
/// indices for independent RNG streams.
class Environment {
 public:
  explicit Environment(const ScenarioConfig& config, std::uint64_t instance_index = 0);

  /// Starts a fresh episode; optionally reseeds the episode RNG stream.
  std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt);

  /// Decodes and applies one joint action. Throws std::logic_error after the
  /// episode is done.
  Transition step(const Action& action);

  /// Same dynamics driven by an explicit decision (baselines, oracle).
  Transition step_decision(const DecisionVector& decision);

  DecisionVector decode_action(const Action& action) const;

  /// Replaces the O-RU registry (e.g. to keep base-station sites fixed while
  /// sweeping grid size). Call before reset().
  void pin_orus(const std::vector<RadioUnit>& orus);

  std::vector<double> observe() const;
  int observation_size() const;
  const ActionSpec& action_spec() const { return spec_; }
  const WorldState& world() const { return state_; }
  const std::vector<GuEnergyLedger>& ledgers() const { return ledgers_; }
  const NormalizationBounds& bounds() const { return bounds_; }
  const ScenarioConfig& config() const { return config_; }
  int timestep() const { return state_.timestep; }
  bool done() const { return done_; }

 private:
  Transition apply(const DecisionVector& decision, const Action& action);

  ScenarioConfig config_;
  ActionSpec spec_;
  NormalizationBounds bounds_;
  WorldState topology_;  // O-RU registry, fixed unless resample_topology
  WorldState state_;
  std::vector<GuEnergyLedger> ledgers_;
  Rng rng_;
  bool done_ = true;  // must reset() first
};

}  // namespace uavsim
