#include "uavsim/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace uavsim {

std::vector<Vec2> make_lattice(const ScenarioConfig& config, int nx, int ny) {
  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      points.push_back({nx > 1 ? config.grid_width * i / (nx - 1) : config.grid_width / 2,
                        ny > 1 ? config.grid_height * j / (ny - 1) : config.grid_height / 2});
    }
  }
  return points;
}

SnapshotResult brute_force_snapshot(const WorldState& state, const ScenarioConfig& config,
                                    const std::vector<Vec2>& uav_lattice) {
  const int num_gus = static_cast<int>(state.gus.size());
  const int num_uavs = static_cast<int>(state.uavs.size());
  const int num_orus = static_cast<int>(state.orus.size());
  if (num_gus > 3 || num_uavs > 1 || num_orus > 2 || uav_lattice.size() > 25)
    throw OracleCapError("instance exceeds brute-force caps (U<=3, A<=1, G<=2, lattice<=25)");

  NormalizationBounds bounds = NormalizationBounds::from_config(config);
  CycleCosts costs = CycleCosts::from_config(config);
  const int num_targets = num_orus + num_uavs * num_orus;
  const int num_keys = static_cast<int>(kKeyLengths.size());

  // candidate UAV positions: the current position first, then the lattice
  std::vector<Vec2> candidates;
  if (num_uavs == 1) {
    candidates.push_back(state.uavs[0].position);
    candidates.insert(candidates.end(), uav_lattice.begin(), uav_lattice.end());
  } else {
    candidates.push_back({});  // placeholder so the loop below runs once
  }

  std::vector<GuEnergyLedger> ledgers;
  for (const auto& gu : state.gus) ledgers.push_back(GuEnergyLedger::for_battery(gu.battery_capacity));

  SnapshotResult result;
  bool have_best = false;

  std::vector<int> combo(2 * num_gus, 0);  // (target, key) per GU
  WorldState trial = state;

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    double move_energy = 0;
    if (num_uavs == 1) {
      trial.uavs[0].prev_position = state.uavs[0].position;
      trial.uavs[0].position = candidates[ci];
      double v = uav_velocity(trial.uavs[0].prev_position, trial.uavs[0].position,
                              config.slot_duration);
      move_energy = uav_slot_energy(v, UavEnergyParams::from_config(config));
    }

    std::fill(combo.begin(), combo.end(), 0);
    bool more = true;
    while (more) {
      ++result.evaluated_count;

      DecisionVector decision;
      decision.association.resize(num_gus);
      decision.key_length.resize(num_gus);
      if (num_uavs == 1) {
        decision.displacement = {{trial.uavs[0].position.x - state.uavs[0].position.x,
                                  trial.uavs[0].position.y - state.uavs[0].position.y}};
      }
      for (int u = 0; u < num_gus; ++u) {
        int target = combo[2 * u];
        Association& assoc = decision.association[u];
        if (target < num_orus) {
          assoc.relayed = false;
          assoc.oru = target;
        } else {
          assoc.relayed = true;
          assoc.uav = (target - num_orus) / num_orus;
          assoc.oru = (target - num_orus) % num_orus;
        }
        decision.key_length[u] = kKeyLengths[combo[2 * u + 1]];
      }

      // direct composition of the single-step objective
      double objective = num_uavs == 1 ? bounds.norm_energy(move_energy) : 0.0;
      std::vector<GuStepEnergy> energies(num_gus);
      for (int u = 0; u < num_gus; ++u) {
        const GroundUser& gu = trial.gus[u];
        const Association& assoc = decision.association[u];
        const RadioUnit& oru = trial.orus[assoc.oru];
        CipherSuite suite = suite_from_key_length(decision.key_length[u]);
        double tau_enc = encryption_latency(suite, gu.data_bits, gu.clock_hz, costs);
        double tau_dec = decryption_latency(suite, gu.data_bits, oru.clock_hz, costs);
        double tau_comm =
            assoc.relayed ? relay_latency(gu.data_bits, gu, trial.uavs[assoc.uav], oru, config)
                                .total()
                          : direct_latency(gu.data_bits, gu, oru, config);
        objective += bounds.norm_latency(tau_enc + tau_comm + tau_dec);
        objective += 1.0 - bounds.norm_security(security_level(suite.key_length));
        energies[u] = gu_step_energy(tau_enc, tau_comm, config);
      }

      if (evaluate_constraints(decision, trial, ledgers, energies, config).all_satisfied()) {
        ++result.feasible_count;
        if (!have_best || objective < result.best_objective - 1e-15) {
          have_best = true;
          result.best_objective = objective;
          result.best = decision;
        }
      }

      // odometer over (target, key) pairs, lexicographic
      int pos = 2 * num_gus - 1;
      while (pos >= 0) {
        int limit = (pos % 2 == 0) ? num_targets : num_keys;
        if (++combo[pos] < limit) break;
        combo[pos] = 0;
        --pos;
      }
      more = pos >= 0;
    }
  }
  return result;
}

SnapshotEval evaluate_snapshot(const WorldState& state, const DecisionVector& decision,
                               const ScenarioConfig& config) {
  WorldState trial = state;
  for (std::size_t a = 0; a < trial.uavs.size(); ++a) {
    UavRelay& uav = trial.uavs[a];
    uav.prev_position = uav.position;
    uav.position.x =
        std::clamp(uav.position.x + decision.displacement.at(a).x, 0.0, config.grid_width);
    uav.position.y =
        std::clamp(uav.position.y + decision.displacement.at(a).y, 0.0, config.grid_height);
  }
  std::vector<GuEnergyLedger> ledgers;
  for (const auto& gu : trial.gus) ledgers.push_back(GuEnergyLedger::for_battery(gu.battery_capacity));
  SnapshotEval eval;
  eval.outcome = evaluate_step(decision, trial, ledgers, config,
                               NormalizationBounds::from_config(config));
  eval.objective = objective_value({eval.outcome});
  eval.feasible = eval.outcome.constraints.all_satisfied();
  return eval;
}

std::vector<double> brute_force_gae(const std::vector<double>& rewards,
                                    const std::vector<double>& values, double gamma,
                                    double lambda) {
  const int horizon = static_cast<int>(rewards.size());
  std::vector<double> advantages(horizon, 0.0);
  for (int t = 0; t < horizon; ++t) {
    double acc = 0;
    double weight = 1.0;
    for (int l = 0; t + l < horizon; ++l) {
      double next_value = (t + l + 1 < horizon) ? values[t + l + 1] : 0.0;
      double delta = rewards[t + l] + gamma * next_value - values[t + l];
      acc += weight * delta;
      weight *= gamma * lambda;
    }
    advantages[t] = acc;
  }
  return advantages;
}

}  // namespace uavsim
