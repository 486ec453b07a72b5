#include "uavsim/energy.hpp"

#include <algorithm>
#include <cmath>

namespace uavsim {

double uav_velocity(const Vec2& prev_pos, const Vec2& new_pos, double slot_duration) {
  return ground_distance(prev_pos, new_pos) / slot_duration;
}

double uav_slot_energy(double v, const UavEnergyParams& params) {
  double v2 = v * v;
  double blade = params.p0 * (1.0 + 3.0 * v2 / (params.u_tip * params.u_tip));
  double parasite = params.c0 * v2 * v;
  double v0_2 = params.v_induced * params.v_induced;
  double drop = params.literal_induced_term ? v / (2.0 * v0_2) : v2 / (2.0 * v0_2);
  double induced = params.p1 * (std::sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) - drop);
  return params.slot_duration * (blade + parasite + induced);
}

GuStepEnergy gu_step_energy(double enc_latency_s, double comm_latency_s,
                            const ScenarioConfig& config) {
  return {enc_latency_s * config.compute_power, comm_latency_s * config.comm_power};
}

bool GuEnergyLedger::debit(const GuStepEnergy& e) {
  spent_compute += e.compute_j;
  spent_comm += e.comm_j;
  double remaining = battery_capacity - spent_compute - spent_comm;
  bool over = remaining < 0.0 && e.total() > 0.0;
  battery_remaining = std::max(remaining, 0.0);
  if (over) violated = true;
  return over;
}

}  // namespace uavsim
