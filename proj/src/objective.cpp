#include "uavsim/objective.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace uavsim {

const char* constraint_family_name(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::Security: return "security";
    case ConstraintFamily::ResourceBlocks: return "resource_blocks";
    case ConstraintFamily::Compute: return "compute";
    case ConstraintFamily::Battery: return "battery";
    case ConstraintFamily::Ber: return "ber";
    case ConstraintFamily::Collision: return "collision";
    case ConstraintFamily::MaxDisplacement: return "max_displacement";
  }
  return "?";
}

int ConstraintReport::total_violations() const {
  int total = 0;
  for (int v : violations) total += v;
  return total;
}

NormalizationBounds NormalizationBounds::from_config(const ScenarioConfig& config) {
  NormalizationBounds b;
  b.security_min = 6;
  b.security_max = 12;

  CycleCosts costs = CycleCosts::from_config(config);
  CipherSuite worst_suite = suite_from_key_length(4096);
  double enc = encryption_latency(worst_suite, config.data_max_bits, config.gu_clock_min, costs);
  double dec = decryption_latency(worst_suite, config.data_max_bits, config.oru_clock_min, costs);

  double diag = std::hypot(config.grid_width, config.grid_height);
  double d_ug = std::hypot(config.oru_height, diag);
  double d_ua = std::hypot(config.uav_altitude, diag);
  double d_ag = std::hypot(config.uav_altitude - config.oru_height, diag);
  double direct = hop_latency(
      config.data_max_bits,
      link_budget(d_ug, config.power_gu_oru, config.bandwidth_gu_oru, config));
  double two_hop =
      hop_latency(config.data_max_bits,
                  link_budget(d_ua, config.power_gu_uav, config.bandwidth_gu_uav, config)) +
      hop_latency(config.data_max_bits,
                  link_budget(d_ag, config.power_uav_oru, config.bandwidth_uav_oru, config));
  b.latency_max = enc + dec + std::max(direct, two_hop);

  UavEnergyParams params = UavEnergyParams::from_config(config);
  double v_max = config.max_uav_displacement / config.slot_duration;
  b.energy_max = uav_slot_energy(v_max, params);
  return b;
}

LatencyParts total_latency(int gu_index, const DecisionVector& decision, const WorldState& state,
                           const ScenarioConfig& config) {
  const GroundUser& gu = state.gus.at(gu_index);
  const Association& assoc = decision.association.at(gu_index);
  const RadioUnit& oru = state.orus.at(assoc.oru);
  CycleCosts costs = CycleCosts::from_config(config);
  CipherSuite suite = suite_from_key_length(decision.key_length.at(gu_index));

  LatencyParts parts;
  parts.tau_enc = encryption_latency(suite, gu.data_bits, gu.clock_hz, costs);
  parts.tau_dec = decryption_latency(suite, gu.data_bits, oru.clock_hz, costs);
  if (assoc.relayed)
    parts.tau_comm = relay_latency(gu.data_bits, gu, state.uavs.at(assoc.uav), oru, config).total();
  else
    parts.tau_comm = direct_latency(gu.data_bits, gu, oru, config);
  return parts;
}

namespace {

double comp_constraint_load(const CipherSuite& suite, double data_bits,
                            const ScenarioConfig& config) {
  CycleCosts costs = CycleCosts::from_config(config);
  double c_enc = complexity(suite, CryptoDirection::Encrypt, costs);
  if (config.comp_constraint_mode == "blocks")
    return suite.key_length * block_count(suite, data_bits);
  if (config.comp_constraint_mode == "cycles_per_block") return suite.key_length * c_enc;
  return c_enc;  // "complexity"
}

}  // namespace

ConstraintReport evaluate_constraints(const DecisionVector& decision, const WorldState& state,
                                      const std::vector<GuEnergyLedger>& ledgers,
                                      const std::vector<GuStepEnergy>& step_energies,
                                      const ScenarioConfig& config) {
  const int num_gus = static_cast<int>(state.gus.size());
  const int num_uavs = static_cast<int>(state.uavs.size());
  const int num_orus = static_cast<int>(state.orus.size());
  assert(static_cast<int>(decision.association.size()) == num_gus);
  assert(static_cast<int>(decision.key_length.size()) == num_gus);
  assert(static_cast<int>(decision.displacement.size()) == num_uavs);

  ConstraintReport report;
  auto& viol = report.violations;
  auto& checks = report.checks;

  std::vector<int> uav_load(num_uavs, 0);
  std::vector<int> oru_direct_load(num_orus, 0);

  for (int u = 0; u < num_gus; ++u) {
    const Association& assoc = decision.association.at(u);
    const GroundUser& gu = state.gus[u];
    const RadioUnit& oru = state.orus.at(assoc.oru);
    CipherSuite suite = suite_from_key_length(decision.key_length[u]);

    if (assoc.relayed)
      ++uav_load.at(assoc.uav);
    else
      ++oru_direct_load[assoc.oru];

    // (20c) security level meets the target O-RU's requirement
    ++checks[static_cast<int>(ConstraintFamily::Security)];
    if (security_level(suite.key_length) < oru.security_requirement)
      ++viol[static_cast<int>(ConstraintFamily::Security)];

    // (20f) compute budget
    ++checks[static_cast<int>(ConstraintFamily::Compute)];
    if (comp_constraint_load(suite, gu.data_bits, config) > gu.compute_budget)
      ++viol[static_cast<int>(ConstraintFamily::Compute)];

    // (20g) cumulative GU energy within Z_u
    ++checks[static_cast<int>(ConstraintFamily::Battery)];
    const GuEnergyLedger& ledger = ledgers.at(u);
    double spent = ledger.spent_compute + ledger.spent_comm + step_energies.at(u).total();
    if (spent > ledger.battery_capacity)
      ++viol[static_cast<int>(ConstraintFamily::Battery)];

    // (20h) first-hop BER
    ++checks[static_cast<int>(ConstraintFamily::Ber)];
    double ber = assoc.relayed ? link_ber_relayed(gu, state.uavs.at(assoc.uav), config)
                               : link_ber_direct(gu, oru, config);
    if (ber > config.ber_max) ++viol[static_cast<int>(ConstraintFamily::Ber)];
  }

  // (20d)/(20e) RB capacities, one check per radio entity
  for (int a = 0; a < num_uavs; ++a) {
    ++checks[static_cast<int>(ConstraintFamily::ResourceBlocks)];
    if (uav_load[a] > state.uavs[a].resource_blocks)
      ++viol[static_cast<int>(ConstraintFamily::ResourceBlocks)];
  }
  for (int g = 0; g < num_orus; ++g) {
    ++checks[static_cast<int>(ConstraintFamily::ResourceBlocks)];
    if (oru_direct_load[g] > state.orus[g].resource_blocks)
      ++viol[static_cast<int>(ConstraintFamily::ResourceBlocks)];
  }

  // (20i) pairwise UAV separation at the post-move positions
  for (int i = 0; i < num_uavs; ++i) {
    for (int j = i + 1; j < num_uavs; ++j) {
      ++checks[static_cast<int>(ConstraintFamily::Collision)];
      if (ground_distance(state.uavs[i].position, state.uavs[j].position) <
          config.min_uav_separation)
        ++viol[static_cast<int>(ConstraintFamily::Collision)];
    }
  }

  // (20j) requested per-slot displacement bound
  for (int a = 0; a < num_uavs; ++a) {
    ++checks[static_cast<int>(ConstraintFamily::MaxDisplacement)];
    const Vec2& d = decision.displacement[a];
    if (std::hypot(d.x, d.y) > config.max_uav_displacement * (1.0 + 1e-12))
      ++viol[static_cast<int>(ConstraintFamily::MaxDisplacement)];
  }

  return report;
}

double penalty(const ConstraintReport& report, const ScenarioConfig& config) {
  const double weights[kNumConstraintFamilies] = {
      config.pen_security, config.pen_rb,        config.pen_comp, config.pen_battery,
      config.pen_ber,      config.pen_collision, config.pen_dmax};
  double p = 0;
  for (int f = 0; f < kNumConstraintFamilies; ++f) p += weights[f] * report.violations[f];
  return p;
}

double step_reward(double mean_norm_latency, double mean_norm_energy, double mean_norm_security,
                   const ScenarioConfig& config) {
  return config.w1 * (1.0 - mean_norm_latency) + config.w2 * (1.0 - mean_norm_energy) +
         config.w3 * mean_norm_security;
}

StepOutcome evaluate_step(const DecisionVector& decision, const WorldState& state,
                          const std::vector<GuEnergyLedger>& ledgers,
                          const ScenarioConfig& config, const NormalizationBounds& bounds) {
  StepOutcome out;
  out.timestep = state.timestep;
  const int num_gus = static_cast<int>(state.gus.size());
  const int num_uavs = static_cast<int>(state.uavs.size());

  std::vector<GuStepEnergy> step_energies(num_gus);
  out.gus.resize(num_gus);
  double sum_l = 0, sum_s = 0;
  for (int u = 0; u < num_gus; ++u) {
    GuOutcome& gu_out = out.gus[u];
    LatencyParts parts = total_latency(u, decision, state, config);
    gu_out.tau_enc = parts.tau_enc;
    gu_out.tau_comm = parts.tau_comm;
    gu_out.tau_dec = parts.tau_dec;
    gu_out.latency = parts.total();
    gu_out.security = security_level(decision.key_length[u]);
    const Association& assoc = decision.association[u];
    gu_out.ber = assoc.relayed
                     ? link_ber_relayed(state.gus[u], state.uavs.at(assoc.uav), config)
                     : link_ber_direct(state.gus[u], state.orus.at(assoc.oru), config);
    gu_out.ber_violation = gu_out.ber > config.ber_max;
    gu_out.energy = gu_step_energy(parts.tau_enc, parts.tau_comm, config);
    step_energies[u] = gu_out.energy;
    const GuEnergyLedger& ledger = ledgers.at(u);
    gu_out.battery_violation = ledger.spent_compute + ledger.spent_comm +
                                   gu_out.energy.total() >
                               ledger.battery_capacity;
    sum_l += bounds.norm_latency(gu_out.latency);
    sum_s += bounds.norm_security(gu_out.security);
  }

  UavEnergyParams params = UavEnergyParams::from_config(config);
  out.uavs.resize(num_uavs);
  double sum_e = 0;
  for (int a = 0; a < num_uavs; ++a) {
    const UavRelay& uav = state.uavs[a];
    out.uavs[a].velocity = uav_velocity(uav.prev_position, uav.position, config.slot_duration);
    out.uavs[a].energy_j = uav_slot_energy(out.uavs[a].velocity, params);
    sum_e += bounds.norm_energy(out.uavs[a].energy_j);
  }

  out.mean_norm_latency = num_gus > 0 ? sum_l / num_gus : 0;
  out.mean_norm_security = num_gus > 0 ? sum_s / num_gus : 0;
  out.mean_norm_energy = num_uavs > 0 ? sum_e / num_uavs : 0;

  out.constraints = evaluate_constraints(decision, state, ledgers, step_energies, config);
  out.penalty = penalty(out.constraints, config);
  out.reward = step_reward(out.mean_norm_latency, out.mean_norm_energy, out.mean_norm_security,
                           config);
  out.reward_final = out.reward - out.penalty;
  return out;
}

double objective_value(const std::vector<StepOutcome>& outcomes) {
  double total = 0;
  for (const StepOutcome& o : outcomes) {
    double num_gus = static_cast<double>(o.gus.size());
    double num_uavs = static_cast<double>(o.uavs.size());
    total += o.mean_norm_energy * num_uavs;
    total += o.mean_norm_latency * num_gus;
    total += (1.0 - o.mean_norm_security) * num_gus;
  }
  return total;
}

std::string step_outcome_csv_header() {
  return "episode,t,entity_kind,entity_id,latency_s,tau_enc_s,tau_comm_s,tau_dec_s,security,"
         "ber,energy_j,velocity_mps,mean_norm_latency,mean_norm_energy,mean_norm_security,"
         "viol_security,viol_rb,viol_compute,viol_battery,viol_ber,viol_collision,viol_dmax,"
         "penalty,reward,reward_final\n";
}

namespace {

void csv_number(std::string& out, double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  out += os.str();
}

}  // namespace

void append_step_outcome_csv(std::string& out, int episode, const StepOutcome& o) {
  auto row_prefix = [&](const char* kind, int id) {
    out += std::to_string(episode);
    out += ',';
    out += std::to_string(o.timestep);
    out += ',';
    out += kind;
    out += ',';
    out += std::to_string(id);
    out += ',';
  };
  auto finish_step_fields = [&](bool step_row) {
    if (step_row) {
      for (double v : {o.mean_norm_latency, o.mean_norm_energy, o.mean_norm_security}) {
        csv_number(out, v);
        out += ',';
      }
      for (int f = 0; f < kNumConstraintFamilies; ++f) {
        out += std::to_string(o.constraints.violations[f]);
        out += ',';
      }
      csv_number(out, o.penalty);
      out += ',';
      csv_number(out, o.reward);
      out += ',';
      csv_number(out, o.reward_final);
    } else {
      out += ",,,,,,,,,,,,";
    }
    out += '\n';
  };

  for (std::size_t u = 0; u < o.gus.size(); ++u) {
    const GuOutcome& g = o.gus[u];
    row_prefix("gu", static_cast<int>(u));
    for (double v : {g.latency, g.tau_enc, g.tau_comm, g.tau_dec, g.security, g.ber,
                     g.energy.total()}) {
      csv_number(out, v);
      out += ',';
    }
    out += ',';  // velocity empty for GUs
    finish_step_fields(false);
  }
  for (std::size_t a = 0; a < o.uavs.size(); ++a) {
    row_prefix("uav", static_cast<int>(a));
    out += ",,,,,,";  // latency..ber empty for UAVs
    csv_number(out, o.uavs[a].energy_j);
    out += ',';
    csv_number(out, o.uavs[a].velocity);
    out += ',';
    finish_step_fields(false);
  }
  row_prefix("step", 0);
  out += ",,,,,,,,";  // entity metric columns empty
  finish_step_fields(true);
}

}  // namespace uavsim
