#pragma once

#include <string>
#include <vector>

#include "uavsim/channel.hpp"
#include "uavsim/crypto.hpp"
#include "uavsim/energy.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

/// One GU's association: direct to an O-RU, or relayed through a UAV to an
/// O-RU. Exactly one choice per GU by construction.
struct Association {
  bool relayed = false;
  int uav = -1;  // valid when relayed
  int oru = 0;
};

/// One timestep's joint action.
struct DecisionVector {
  std::vector<Association> association;  // one per GU
  std::vector<int> key_length;           // one per GU, in kKeyLengths
  std::vector<Vec2> displacement;        // one per UAV, requested (pre-clamp)
};

/// Names of the seven penalty families, in reporting order.
enum class ConstraintFamily : int {
  Security = 0,   // S_u >= W_g of the chosen O-RU
  ResourceBlocks, // per-UAV and per-O-RU RB capacity
  Compute,        // per-GU compute budget
  Battery,        // cumulative GU energy within Z_u
  Ber,            // first-hop BER within ber_max
  Collision,      // pairwise UAV separation >= d_min
  MaxDisplacement // per-slot UAV displacement <= d_max
};
inline constexpr int kNumConstraintFamilies = 7;
const char* constraint_family_name(ConstraintFamily family);

struct ConstraintReport {
  // per family: failed checks and total checks this step
  std::array<int, kNumConstraintFamilies> violations{};
  std::array<int, kNumConstraintFamilies> checks{};

  int total_violations() const;
  bool all_satisfied() const { return total_violations() == 0; }
};

struct GuOutcome {
  double latency = 0;       // L_{u,t}
  double tau_enc = 0;
  double tau_comm = 0;
  double tau_dec = 0;
  double security = 0;      // S_{u,t}
  double ber = 0;           // gamma_u, first hop
  GuStepEnergy energy;
  bool ber_violation = false;
  bool battery_violation = false;
};

struct UavOutcome {
  double velocity = 0;
  double energy_j = 0;
};

struct StepOutcome {
  int timestep = 0;
  std::vector<GuOutcome> gus;
  std::vector<UavOutcome> uavs;
  double mean_norm_latency = 0;
  double mean_norm_energy = 0;
  double mean_norm_security = 0;
  ConstraintReport constraints;
  double penalty = 0;
  double reward = 0;        // r_t, before penalty
  double reward_final = 0;  // r_t - p_t
};

/// Scenario-wide normalization caps, fixed so normalized terms stay in [0,1]
/// without clipping in normal operation: worst-case crypto (RSA-4096 at max
/// data, slowest clocks) plus worst-case two-hop transmission for latency,
/// full-speed slot energy for energy.
struct NormalizationBounds {
  double latency_max = 1;   // s
  double energy_max = 1;    // J
  double security_min = 6;
  double security_max = 12;

  static NormalizationBounds from_config(const ScenarioConfig& config);

  double norm_latency(double l) const { return std::min(l / latency_max, 1.0); }
  double norm_energy(double e) const { return std::min(e / energy_max, 1.0); }
  double norm_security(double s) const {
    return (s - security_min) / (security_max - security_min);
  }
};

struct LatencyParts {
  double tau_enc = 0;
  double tau_comm = 0;
  double tau_dec = 0;
  double total() const { return tau_enc + tau_comm + tau_dec; }
};

/// L_{u,t} = tau_enc + tau_comm + tau_dec for one GU under `decision`.
/// UAV positions in `state` are the post-move positions for this slot.
LatencyParts total_latency(int gu_index, const DecisionVector& decision, const WorldState& state,
                           const ScenarioConfig& config);

/// Checks constraint families (20c)-(20j) for one step. The association
/// one-hot (20b), key domain (20k) and binarity (20l) hold structurally under
/// DecisionVector and are asserted here rather than counted.
/// `ledgers` carry pre-debit battery state; the battery check asks whether
/// this step's energies would exceed Z_u.
ConstraintReport evaluate_constraints(const DecisionVector& decision, const WorldState& state,
                                      const std::vector<GuEnergyLedger>& ledgers,
                                      const std::vector<GuStepEnergy>& step_energies,
                                      const ScenarioConfig& config);

/// Weighted violation count, Eq-style additive across the seven families.
double penalty(const ConstraintReport& report, const ScenarioConfig& config);

/// Per-step reward r = w1 (1 - [L]) + w2 (1 - [E]) + w3 [S], means taken over
/// GUs (latency, security) and UAVs (energy).
double step_reward(double mean_norm_latency, double mean_norm_energy, double mean_norm_security,
                   const ScenarioConfig& config);

/// Full per-step evaluation: latencies, BER, energies, constraints, penalty
/// and reward. UAV positions in `state` must already be the post-move
/// positions, with prev_position holding the pre-move ones.
StepOutcome evaluate_step(const DecisionVector& decision, const WorldState& state,
                          const std::vector<GuEnergyLedger>& ledgers,
                          const ScenarioConfig& config, const NormalizationBounds& bounds);

/// Episode objective: sum over steps of sum_a [E] + sum_u [L] + sum_u (1-[S]).
double objective_value(const std::vector<StepOutcome>& outcomes);

/// CSV header and per-entity rows for a StepOutcome (documented trace format).
std::string step_outcome_csv_header();
void append_step_outcome_csv(std::string& out, int episode, const StepOutcome& outcome);

}  // namespace uavsim
