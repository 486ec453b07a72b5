#include "uavsim/channel.hpp"

#include <cmath>

namespace uavsim {

double distance_gu_oru(const Vec2& gu_pos, const Vec2& oru_pos, double oru_height) {
  double g = ground_distance(gu_pos, oru_pos);
  return std::sqrt(oru_height * oru_height + g * g);
}

double distance_gu_uav(const Vec2& gu_pos, const Vec2& uav_pos, double uav_altitude) {
  double g = ground_distance(gu_pos, uav_pos);
  return std::sqrt(uav_altitude * uav_altitude + g * g);
}

double distance_uav_oru(const Vec2& uav_pos, const Vec2& oru_pos, double uav_altitude,
                        double oru_height) {
  double g = ground_distance(uav_pos, oru_pos);
  double dh = uav_altitude - oru_height;
  return std::sqrt(dh * dh + g * g);
}

double bpsk_ber(double snr) {
  return 0.5 * std::erfc(std::sqrt(snr));
}

LinkBudget link_budget(double distance, double power_w, double bandwidth_hz,
                       const ScenarioConfig& config) {
  LinkBudget lb;
  lb.distance = distance;
  lb.gain = config.pathloss_ref / std::pow(distance, config.pathloss_exp);
  lb.snr = power_w * lb.gain / config.noise_power;
  lb.rate = bandwidth_hz * std::log2(1.0 + lb.snr);
  lb.ber = bpsk_ber(lb.snr);
  return lb;
}

double hop_latency(double data_bits, const LinkBudget& link) {
  if (link.rate <= 0.0) return kUnusableLink;
  return data_bits / link.rate;
}

double direct_latency(double data_bits, const GroundUser& gu, const RadioUnit& oru,
                      const ScenarioConfig& config) {
  double d = distance_gu_oru(gu.position, oru.position, oru.antenna_height);
  return hop_latency(data_bits,
                     link_budget(d, config.power_gu_oru, config.bandwidth_gu_oru, config));
}

RelayLatency relay_latency(double data_bits, const GroundUser& gu, const UavRelay& uav,
                           const RadioUnit& oru, const ScenarioConfig& config) {
  RelayLatency out;
  double d_up = distance_gu_uav(gu.position, uav.position, uav.altitude);
  out.gu_to_uav = hop_latency(
      data_bits, link_budget(d_up, config.power_gu_uav, config.bandwidth_gu_uav, config));
  double d_back = distance_uav_oru(uav.position, oru.position, uav.altitude, oru.antenna_height);
  out.uav_to_oru = hop_latency(
      data_bits, link_budget(d_back, config.power_uav_oru, config.bandwidth_uav_oru, config));
  return out;
}

double link_ber_direct(const GroundUser& gu, const RadioUnit& oru, const ScenarioConfig& config) {
  double d = distance_gu_oru(gu.position, oru.position, oru.antenna_height);
  return link_budget(d, config.power_gu_oru, config.bandwidth_gu_oru, config).ber;
}

double link_ber_relayed(const GroundUser& gu, const UavRelay& uav, const ScenarioConfig& config) {
  double d = distance_gu_uav(gu.position, uav.position, uav.altitude);
  return link_budget(d, config.power_gu_uav, config.bandwidth_gu_uav, config).ber;
}

}  // namespace uavsim
