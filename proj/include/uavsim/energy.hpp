#pragma once

#include "uavsim/scenario.hpp"

namespace uavsim {

struct UavEnergyParams {
  double p0;        // W, blade profile power at hover
  double p1;        // W, induced power at hover
  double c0;        // W/(m/s)^3
  double u_tip;     // m/s
  double v_induced; // m/s
  double slot_duration;  // s
  bool literal_induced_term = false;

  static UavEnergyParams from_config(const ScenarioConfig& c) {
    return {c.p0, c.p1, c.c0, c.u_tip, c.v_induced, c.slot_duration, c.literal_induced_term};
  }
};

/// Speed over one slot from the horizontal displacement (altitude is fixed).
double uav_velocity(const Vec2& prev_pos, const Vec2& new_pos, double slot_duration);

/// Mechanical energy of one slot at constant speed v:
///   dt * [ P0 (1 + 3 v^2 / U_tip^2) + c0 v^3 ]
/// + dt * P1 * [ sqrt(1 + v^4 / (4 v0^4)) - v^2 / (2 v0^2) ].
///
/// The induced bracket uses v^2/(2 v0^2); the source text prints v/(2 v0^2),
/// which is dimensionally inconsistent with the standard rotary-wing model.
/// Set literal_induced_term to reproduce the printed form.
double uav_slot_energy(double velocity, const UavEnergyParams& params);

/// Per-GU compute / communication energy of one slot.
struct GuStepEnergy {
  double compute_j = 0;  // eta_cp
  double comm_j = 0;     // eta_cm
  double total() const { return compute_j + comm_j; }
};

GuStepEnergy gu_step_energy(double enc_latency_s, double comm_latency_s,
                            const ScenarioConfig& config);

/// Cumulative per-GU energy account for one episode.
struct GuEnergyLedger {
  double battery_capacity = 0;  // Z_u
  double spent_compute = 0;
  double spent_comm = 0;
  double battery_remaining = 0;
  bool violated = false;  // cumulative spend exceeded Z_u at some step

  static GuEnergyLedger for_battery(double capacity) {
    GuEnergyLedger l;
    l.battery_capacity = capacity;
    l.battery_remaining = capacity;
    return l;
  }

  /// Returns true when this debit pushed (or kept) the ledger past Z_u.
  /// battery_remaining clamps at zero.
  bool debit(const GuStepEnergy& e);
};

}  // namespace uavsim
