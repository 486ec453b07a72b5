#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uavsim/scenario.hpp"

using namespace uavsim;

namespace {
ScenarioConfig base() { return ExperimentConfig{}.scenario; }
}  // namespace

TEST_CASE("generation is deterministic in the seed") {
  ScenarioConfig cfg = base();
  WorldState a = generate_scenario(cfg);
  WorldState b = generate_scenario(cfg);
  CHECK(a == b);
  cfg.rng_seed = 43;
  WorldState c = generate_scenario(cfg);
  CHECK_FALSE(a == c);
}

TEST_CASE("derived seeds differ per instance") {
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 1) != derive_seed(43, 1));
}

TEST_CASE("entities are drawn inside the grid with in-range attributes") {
  ScenarioConfig cfg = base();
  Rng rng(7);
  for (int draw = 0; draw < 50; ++draw) {
    WorldState w = generate_scenario(cfg, rng);
    REQUIRE(w.gus.size() == static_cast<std::size_t>(cfg.num_gus));
    REQUIRE(w.orus.size() == static_cast<std::size_t>(cfg.num_orus));
    REQUIRE(w.uavs.size() == static_cast<std::size_t>(cfg.num_uavs));
    for (const auto& gu : w.gus) {
      CHECK(gu.position.x >= 0);
      CHECK(gu.position.x <= cfg.grid_width);
      CHECK(gu.position.y >= 0);
      CHECK(gu.position.y <= cfg.grid_height);
      CHECK(gu.clock_hz >= cfg.gu_clock_min);
      CHECK(gu.clock_hz <= cfg.gu_clock_max);
      CHECK(gu.battery_capacity >= cfg.battery_min);
      CHECK(gu.battery_capacity <= cfg.battery_max);
      CHECK(gu.battery_remaining == gu.battery_capacity);
      CHECK(gu.compute_budget >= cfg.compute_budget_min);
      CHECK(gu.compute_budget <= cfg.compute_budget_max);
      CHECK(gu.data_bits >= cfg.data_min_bits);
      CHECK(gu.data_bits <= cfg.data_max_bits);
    }
    for (const auto& oru : w.orus) {
      CHECK(oru.security_requirement >= cfg.security_req_min);
      CHECK(oru.security_requirement <= cfg.security_req_max);
      CHECK(oru.clock_hz >= cfg.oru_clock_min);
      CHECK(oru.clock_hz <= cfg.oru_clock_max);
      CHECK(oru.resource_blocks == cfg.rb_per_oru);
    }
    for (const auto& uav : w.uavs) {
      CHECK(uav.altitude == cfg.uav_altitude);
      CHECK(uav.resource_blocks == cfg.rb_per_uav);
    }
  }
}

TEST_CASE("regenerate keeps the O-RU registry and redraws GUs") {
  ScenarioConfig cfg = base();
  WorldState topo = generate_scenario(cfg);
  Rng rng(5);
  WorldState next = regenerate_keeping_topology(cfg, topo, rng);
  CHECK(next.orus == topo.orus);
  CHECK_FALSE(next.gus == topo.gus);
}

TEST_CASE("mobility is axis-aligned and stays inside the grid") {
  ScenarioConfig cfg = base();
  WorldState w = generate_scenario(cfg);
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    std::vector<Vec2> before;
    for (const auto& gu : w.gus) before.push_back(gu.position);
    step_mobility(w, cfg, rng);
    for (std::size_t u = 0; u < w.gus.size(); ++u) {
      const Vec2& p = w.gus[u].position;
      CHECK(p.x >= 0);
      CHECK(p.x <= cfg.grid_width);
      CHECK(p.y >= 0);
      CHECK(p.y <= cfg.grid_height);
      // exactly one axis moves per slot (unless a reflection folded back to
      // the same coordinate, which cannot move the other axis either way)
      bool moved_x = p.x != before[u].x;
      bool moved_y = p.y != before[u].y;
      CHECK_FALSE((moved_x && moved_y));
    }
  }
}

TEST_CASE("reflection folds into the segment") {
  CHECK(reflect_into(-3.0, 10.0) == doctest::Approx(3.0));
  CHECK(reflect_into(12.0, 10.0) == doctest::Approx(8.0));
  CHECK(reflect_into(23.0, 10.0) == doctest::Approx(3.0));
  CHECK(reflect_into(4.0, 10.0) == doctest::Approx(4.0));
}

TEST_CASE("data sizes are redrawn within range") {
  ScenarioConfig cfg = base();
  WorldState w = generate_scenario(cfg);
  Rng rng(3);
  std::vector<double> before;
  for (const auto& gu : w.gus) before.push_back(gu.data_bits);
  redraw_data_sizes(w, cfg, rng);
  bool any_changed = false;
  for (std::size_t u = 0; u < w.gus.size(); ++u) {
    CHECK(w.gus[u].data_bits >= cfg.data_min_bits);
    CHECK(w.gus[u].data_bits <= cfg.data_max_bits);
    any_changed |= w.gus[u].data_bits != before[u];
  }
  CHECK(any_changed);
}
