#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uavsim/channel.hpp"

using namespace uavsim;

namespace {
ScenarioConfig base() { return ExperimentConfig{}.scenario; }
}  // namespace

TEST_CASE("BPSK BER golden values") {
  CHECK(bpsk_ber(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bpsk_ber(4.0) == doctest::Approx(0.0023388674905315635).epsilon(1e-12));
  CHECK(bpsk_ber(1.0) == doctest::Approx(0.5 * std::erfc(1.0)).epsilon(1e-15));
}

TEST_CASE("BER decreases with SNR") {
  double prev = bpsk_ber(0.0);
  for (double snr : {0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
    double b = bpsk_ber(snr);
    CHECK(b < prev);
    prev = b;
  }
}

TEST_CASE("3-D distances include the height terms") {
  CHECK(distance_gu_oru({30, 40}, {0, 0}, 10.0) == doctest::Approx(std::sqrt(2600.0)));
  CHECK(distance_gu_uav({0, 0}, {0, 0}, 100.0) == doctest::Approx(100.0));
  CHECK(distance_gu_uav({30, 40}, {0, 0}, 100.0) == doctest::Approx(std::sqrt(12500.0)));
  // UAV at altitude 100 above an O-RU with a 10 m mast: 90 m apart vertically
  CHECK(distance_uav_oru({0, 0}, {0, 0}, 100.0, 10.0) == doctest::Approx(90.0));
}

TEST_CASE("link budget golden value at 100 m") {
  ScenarioConfig cfg = base();
  LinkBudget link = link_budget(100.0, 1.0, 50e6, cfg);
  CHECK(link.gain == doctest::Approx(1e-10).epsilon(1e-12));
  CHECK(link.snr == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(link.rate == doctest::Approx(50e6 * std::log2(1001.0)).epsilon(1e-12));
  CHECK(link.ber == doctest::Approx(0.5 * std::erfc(std::sqrt(1000.0))).epsilon(1e-12));
}

TEST_CASE("hop latency is data over rate, infinite at zero rate") {
  LinkBudget link;
  link.rate = 2e6;
  CHECK(hop_latency(1e6, link) == doctest::Approx(0.5));
  link.rate = 0;
  CHECK(hop_latency(1e6, link) == kUnusableLink);
}

TEST_CASE("relay latency sums both hops and exceeds each") {
  ScenarioConfig cfg = base();
  GroundUser gu;
  gu.position = {10, 10};
  UavRelay uav;
  uav.position = {50, 50};
  uav.altitude = cfg.uav_altitude;
  RadioUnit oru;
  oru.position = {90, 90};
  RelayLatency relay = relay_latency(1e7, gu, uav, oru, cfg);
  CHECK(relay.total() == doctest::Approx(relay.gu_to_uav + relay.uav_to_oru));
  CHECK(relay.gu_to_uav > 0);
  CHECK(relay.uav_to_oru > 0);
}

TEST_CASE("latency grows with distance") {
  ScenarioConfig cfg = base();
  GroundUser gu;
  gu.position = {0, 0};
  RadioUnit near_oru, far_oru;
  near_oru.position = {10, 0};
  far_oru.position = {90, 0};
  CHECK(direct_latency(1e7, gu, near_oru, cfg) < direct_latency(1e7, gu, far_oru, cfg));
}

TEST_CASE("first-hop BER matches the link budget of that hop") {
  ScenarioConfig cfg = base();
  GroundUser gu;
  gu.position = {20, 30};
  RadioUnit oru;
  oru.position = {70, 80};
  UavRelay uav;
  uav.position = {40, 40};
  uav.altitude = cfg.uav_altitude;

  double d_direct = distance_gu_oru(gu.position, oru.position, cfg.oru_height);
  LinkBudget direct = link_budget(d_direct, cfg.power_gu_oru, cfg.bandwidth_gu_oru, cfg);
  CHECK(link_ber_direct(gu, oru, cfg) == doctest::Approx(direct.ber).epsilon(1e-15));

  double d_relay = distance_gu_uav(gu.position, uav.position, uav.altitude);
  LinkBudget first_hop = link_budget(d_relay, cfg.power_gu_uav, cfg.bandwidth_gu_uav, cfg);
  CHECK(link_ber_relayed(gu, uav, cfg) == doctest::Approx(first_hop.ber).epsilon(1e-15));
}
