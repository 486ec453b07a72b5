#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uavsim/env.hpp"

using namespace uavsim;

namespace {

ScenarioConfig base() { return ExperimentConfig{}.scenario; }

Action random_action(const ActionSpec& spec, Rng& rng) {
  Action a;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int size : spec.categorical_sizes)
    a.categorical.push_back(std::uniform_int_distribution<int>(0, size - 1)(rng));
  for (int i = 0; i < spec.continuous_dim; ++i) a.continuous.push_back(unit(rng));
  return a;
}

}  // namespace

TEST_CASE("factored action spec matches the scenario dimensions") {
  ScenarioConfig cfg = base();
  ActionSpec spec = ActionSpec::from_config(cfg);
  CHECK_FALSE(spec.box_mode);
  REQUIRE(spec.categorical_sizes.size() == static_cast<std::size_t>(2 * cfg.num_gus));
  for (int u = 0; u < cfg.num_gus; ++u)
    CHECK(spec.categorical_sizes[u] == cfg.num_orus + cfg.num_uavs * cfg.num_orus);
  for (int u = cfg.num_gus; u < 2 * cfg.num_gus; ++u)
    CHECK(spec.categorical_sizes[u] == 8);
  CHECK(spec.continuous_dim == 2 * cfg.num_uavs);
}

TEST_CASE("box action spec folds everything into continuous dims") {
  ScenarioConfig cfg = base();
  cfg.action_mode = "box";
  ActionSpec spec = ActionSpec::from_config(cfg);
  CHECK(spec.box_mode);
  CHECK(spec.categorical_sizes.empty());
  CHECK(spec.continuous_dim == 2 * cfg.num_gus + 2 * cfg.num_uavs);
}

TEST_CASE("observation layout and size") {
  ScenarioConfig cfg = base();
  Environment env(cfg);
  std::vector<double> obs = env.reset();
  CHECK(static_cast<int>(obs.size()) == 4 * cfg.num_gus + 2 * cfg.num_uavs);
  for (double v : obs) {
    CHECK(v >= -1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }
  // fresh batteries observe as 1
  CHECK(obs[2] == doctest::Approx(1.0));

  ScenarioConfig rich = cfg;
  rich.rich_observation = true;
  Environment rich_env(rich);
  CHECK(static_cast<int>(rich_env.reset().size()) ==
        4 * cfg.num_gus + 2 * cfg.num_uavs + 3 * cfg.num_orus);
}

TEST_CASE("stepping before reset or after done throws") {
  ScenarioConfig cfg = base();
  Environment env(cfg);
  Rng rng(1);
  Action a = random_action(env.action_spec(), rng);
  CHECK_THROWS_AS(env.step(a), std::logic_error);
  env.reset();
  for (int t = 0; t < cfg.horizon; ++t) env.step(random_action(env.action_spec(), rng));
  CHECK(env.done());
  CHECK_THROWS_AS(env.step(a), std::logic_error);
}

TEST_CASE("factored decode maps association indices and key heads") {
  ScenarioConfig cfg = base();
  Environment env(cfg);
  env.reset();
  Action a;
  a.categorical.assign(2 * cfg.num_gus, 0);
  a.continuous.assign(2 * cfg.num_uavs, 0.0);
  a.categorical[0] = 1;                      // direct to O-RU 1
  a.categorical[1] = cfg.num_orus;           // relayed: UAV 0 -> O-RU 0
  a.categorical[2] = cfg.num_orus + 3;       // relayed: UAV 1 -> O-RU 1 (G=2)
  a.categorical[cfg.num_gus] = 4;            // key head: index 4 -> 1024
  DecisionVector d = env.decode_action(a);
  CHECK_FALSE(d.association[0].relayed);
  CHECK(d.association[0].oru == 1);
  CHECK(d.association[1].relayed);
  CHECK(d.association[1].uav == 0);
  CHECK(d.association[1].oru == 0);
  CHECK(d.association[2].relayed);
  CHECK(d.association[2].uav == 1);
  CHECK(d.association[2].oru == 1);
  CHECK(d.key_length[0] == 1024);
  CHECK(d.key_length[1] == 64);
}

TEST_CASE("factored displacements satisfy the norm bound structurally") {
  ScenarioConfig cfg = base();
  Environment env(cfg);
  env.reset();
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    Action a = random_action(env.action_spec(), rng);
    DecisionVector d = env.decode_action(a);
    for (const Vec2& v : d.displacement)
      CHECK(std::hypot(v.x, v.y) <= cfg.max_uav_displacement * (1 + 1e-12));
  }
}

TEST_CASE("box decode can request over-bound displacements") {
  ScenarioConfig cfg = base();
  cfg.action_mode = "box";
  Environment env(cfg);
  env.reset();
  Action a;
  a.continuous.assign(env.action_spec().continuous_dim, 1.0);  // corner of the box
  DecisionVector d = env.decode_action(a);
  CHECK(std::hypot(d.displacement[0].x, d.displacement[0].y) >
        cfg.max_uav_displacement);
  // binned association decodes to the last target
  CHECK(d.association[0].relayed);
  CHECK(d.association[0].uav == cfg.num_uavs - 1);
  CHECK(d.key_length[0] == 4096);
}

TEST_CASE("episodes are deterministic per instance stream") {
  ScenarioConfig cfg = base();
  Environment env_a(cfg, 0);
  Environment env_b(cfg, 0);
  Rng rng_a(7), rng_b(7);
  std::vector<double> obs_a = env_a.reset();
  std::vector<double> obs_b = env_b.reset();
  CHECK(obs_a == obs_b);
  while (!env_a.done()) {
    Transition ta = env_a.step(random_action(env_a.action_spec(), rng_a));
    Transition tb = env_b.step(random_action(env_b.action_spec(), rng_b));
    CHECK(ta.reward_final == tb.reward_final);
    CHECK(ta.next_observation == tb.next_observation);
  }
  // a different instance index diverges
  Environment env_c(cfg, 1);
  CHECK_FALSE(env_c.reset() == env_a.reset());
}

TEST_CASE("episode bookkeeping: timestep, batteries, horizon") {
  ScenarioConfig cfg = base();
  Environment env(cfg);
  env.reset();
  Rng rng(3);
  double prev_battery_sum = 1e18;
  int steps = 0;
  while (!env.done()) {
    Transition tr = env.step(random_action(env.action_spec(), rng));
    ++steps;
    CHECK(env.timestep() == steps);
    double battery_sum = 0;
    for (const auto& ledger : env.ledgers()) battery_sum += ledger.battery_remaining;
    CHECK(battery_sum <= prev_battery_sum + 1e-9);
    prev_battery_sum = battery_sum;
    CHECK(std::isfinite(tr.reward_final));
  }
  CHECK(steps == cfg.horizon);
  // reset starts a fresh episode with full batteries
  env.reset();
  for (const auto& ledger : env.ledgers())
    CHECK(ledger.battery_remaining == doctest::Approx(ledger.battery_capacity));
}

TEST_CASE("pinned O-RUs survive resets") {
  ScenarioConfig cfg = base();
  Environment env(cfg);
  std::vector<RadioUnit> orus = env.world().orus;
  orus[0].position = {1.5, 2.5};
  env.pin_orus(orus);
  env.reset();
  CHECK(env.world().orus[0].position == Vec2{1.5, 2.5});
  env.reset();
  CHECK(env.world().orus[0].position == Vec2{1.5, 2.5});
}
