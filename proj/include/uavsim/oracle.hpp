#pragma once

#include <optional>

#include "uavsim/objective.hpp"

namespace uavsim {

struct OracleCapError : std::runtime_error {
  explicit OracleCapError(const std::string& what) : std::runtime_error(what) {}
};

struct SnapshotResult {
  std::optional<DecisionVector> best;  // empty when infeasible everywhere
  double best_objective = 0;
  long long feasible_count = 0;
  long long evaluated_count = 0;
};

/// Evenly spaced nx-by-ny candidate positions covering the grid.
std::vector<Vec2> make_lattice(const ScenarioConfig& config, int nx = 5, int ny = 5);

/// Exhaustive search over association x key x UAV-lattice-position for one
/// timestep. Desk-scale only: U <= 3, A <= 1, G <= 2, <= 25 lattice points.
/// The current UAV position is always included as a candidate. Objective per
/// candidate is composed directly from the crypto/channel/energy primitives,
/// independent of the step evaluator it cross-checks. Ties break
/// lexicographically on (lattice index, per-GU target, per-GU key).
SnapshotResult brute_force_snapshot(const WorldState& state, const ScenarioConfig& config,
                                    const std::vector<Vec2>& uav_lattice);

/// The production-evaluator route for a one-step decision on a frozen
/// snapshot: applies the displacement, evaluates with fresh ledgers. Used to
/// cross-check the oracle's independently composed objective.
struct SnapshotEval {
  double objective = 0;
  bool feasible = false;
  StepOutcome outcome;
};
SnapshotEval evaluate_snapshot(const WorldState& state, const DecisionVector& decision,
                               const ScenarioConfig& config);

/// Direct double-loop evaluation of the truncated GAE sum; reference for the
/// agent's recursive implementation. Terminal value beyond the episode is 0.
std::vector<double> brute_force_gae(const std::vector<double>& rewards,
                                    const std::vector<double>& values, double gamma,
                                    double lambda);

}  // namespace uavsim
