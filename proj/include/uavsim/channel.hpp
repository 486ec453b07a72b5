#pragma once

#include <limits>

#include "uavsim/scenario.hpp"

namespace uavsim {

/// Latency sentinel for a link with zero rate.
inline constexpr double kUnusableLink = std::numeric_limits<double>::infinity();

struct LinkBudget {
  double distance = 0;  // m
  double gain = 0;      // beta0 / d^alpha
  double snr = 0;
  double rate = 0;  // bits/s
  double ber = 0.5;
};

double distance_gu_oru(const Vec2& gu_pos, const Vec2& oru_pos, double oru_height);
double distance_gu_uav(const Vec2& gu_pos, const Vec2& uav_pos, double uav_altitude);
double distance_uav_oru(const Vec2& uav_pos, const Vec2& oru_pos, double uav_altitude,
                        double oru_height);

/// Free-space style budget: gain beta0/d^alpha, Shannon rate, BPSK BER
/// 0.5*erfc(sqrt(SNR)). erfc comes from the C standard library, which is
/// correctly rounded to well below the 1e-12 absolute accuracy needed here.
LinkBudget link_budget(double distance, double power_w, double bandwidth_hz,
                       const ScenarioConfig& config);

double bpsk_ber(double snr);

/// Transmission time of `data_bits` over one hop; kUnusableLink if rate is 0.
double hop_latency(double data_bits, const LinkBudget& link);

double direct_latency(double data_bits, const GroundUser& gu, const RadioUnit& oru,
                      const ScenarioConfig& config);

struct RelayLatency {
  double gu_to_uav = 0;
  double uav_to_oru = 0;
  double total() const { return gu_to_uav + uav_to_oru; }
};

RelayLatency relay_latency(double data_bits, const GroundUser& gu, const UavRelay& uav,
                           const RadioUnit& oru, const ScenarioConfig& config);

/// BER of the GU's first hop: GU->O-RU when direct, GU->UAV when relayed.
/// This is the gamma_u checked against ber_max.
double link_ber_direct(const GroundUser& gu, const RadioUnit& oru, const ScenarioConfig& config);
double link_ber_relayed(const GroundUser& gu, const UavRelay& uav, const ScenarioConfig& config);

}  // namespace uavsim
