#include "uavsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavsim {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

int bin_index(double squashed, int bins) {
  // [-1, 1] -> {0 .. bins-1}
  int idx = static_cast<int>((squashed + 1.0) * 0.5 * bins);
  return std::clamp(idx, 0, bins - 1);
}

}  // namespace

ActionSpec ActionSpec::from_config(const ScenarioConfig& config) {
  ActionSpec spec;
  spec.num_gus = config.num_gus;
  spec.num_orus = config.num_orus;
  spec.num_uavs = config.num_uavs;
  spec.box_mode = config.action_mode == "box";
  if (spec.box_mode) {
    spec.continuous_dim = 2 * config.num_gus + 2 * config.num_uavs;
  } else {
    for (int u = 0; u < config.num_gus; ++u)
      spec.categorical_sizes.push_back(spec.association_head_size());
    for (int u = 0; u < config.num_gus; ++u)
      spec.categorical_sizes.push_back(static_cast<int>(kKeyLengths.size()));
    spec.continuous_dim = 2 * config.num_uavs;
  }
  return spec;
}

Environment::Environment(const ScenarioConfig& config, std::uint64_t instance_index)
    : config_(config),
      spec_(ActionSpec::from_config(config)),
      bounds_(NormalizationBounds::from_config(config)),
      rng_(derive_seed(config.rng_seed, instance_index)) {
  config_.validate();
  Rng topo_rng(config_.rng_seed);
  topology_ = generate_scenario(config_, topo_rng);
  state_ = topology_;
}

void Environment::pin_orus(const std::vector<RadioUnit>& orus) {
  if (orus.size() != static_cast<std::size_t>(config_.num_orus))
    throw std::invalid_argument("pin_orus: O-RU count does not match the configuration");
  topology_.orus = orus;
  state_.orus = orus;
}

std::vector<double> Environment::reset(std::optional<std::uint64_t> seed) {
  if (seed) rng_.seed(derive_seed(*seed, 0));
  if (config_.resample_topology)
    state_ = generate_scenario(config_, rng_);
  else
    state_ = regenerate_keeping_topology(config_, topology_, rng_);
  state_.timestep = 0;
  ledgers_.clear();
  ledgers_.reserve(state_.gus.size());
  for (const auto& gu : state_.gus) ledgers_.push_back(GuEnergyLedger::for_battery(gu.battery_capacity));
  done_ = false;
  return observe();
}

int Environment::observation_size() const {
  int n = 4 * config_.num_gus + 2 * config_.num_uavs;
  if (config_.rich_observation) n += 3 * config_.num_orus;
  return n;
}

std::vector<double> Environment::observe() const {
  std::vector<double> obs;
  obs.reserve(observation_size());
  for (std::size_t u = 0; u < state_.gus.size(); ++u) {
    const GroundUser& gu = state_.gus[u];
    obs.push_back(gu.position.x / config_.grid_width);
    obs.push_back(gu.position.y / config_.grid_height);
    obs.push_back(ledgers_.empty() ? 1.0 : ledgers_[u].battery_remaining / gu.battery_capacity);
    obs.push_back(gu.data_bits / config_.data_max_bits);
  }
  for (const UavRelay& uav : state_.uavs) {
    obs.push_back(uav.position.x / config_.grid_width);
    obs.push_back(uav.position.y / config_.grid_height);
  }
  if (config_.rich_observation) {
    for (const RadioUnit& oru : state_.orus) {
      obs.push_back(oru.position.x / config_.grid_width);
      obs.push_back(oru.position.y / config_.grid_height);
      obs.push_back((oru.security_requirement - 6.0) / 6.0);
    }
  }
  return obs;
}

DecisionVector Environment::decode_action(const Action& action) const {
  DecisionVector decision;
  const int num_gus = config_.num_gus;
  const int num_uavs = config_.num_uavs;
  const int num_orus = config_.num_orus;
  decision.association.resize(num_gus);
  decision.key_length.resize(num_gus);
  decision.displacement.resize(num_uavs);

  auto decode_assoc = [&](int idx) {
    Association a;
    if (idx < num_orus) {
      a.relayed = false;
      a.oru = idx;
    } else {
      a.relayed = true;
      a.uav = (idx - num_orus) / num_orus;
      a.oru = (idx - num_orus) % num_orus;
    }
    return a;
  };

  if (spec_.box_mode) {
    if (static_cast<int>(action.continuous.size()) != spec_.continuous_dim)
      throw std::invalid_argument("box action has wrong continuous dimension");
    for (int u = 0; u < num_gus; ++u) {
      decision.association[u] =
          decode_assoc(bin_index(action.continuous[u], spec_.association_head_size()));
      decision.key_length[u] = kKeyLengths[bin_index(
          action.continuous[num_gus + u], static_cast<int>(kKeyLengths.size()))];
    }
    // full d_max per axis: diagonal moves can exceed the displacement bound,
    // exercising the penalty path
    for (int a = 0; a < num_uavs; ++a) {
      decision.displacement[a] = {
          action.continuous[2 * num_gus + 2 * a] * config_.max_uav_displacement,
          action.continuous[2 * num_gus + 2 * a + 1] * config_.max_uav_displacement};
    }
  } else {
    if (static_cast<int>(action.categorical.size()) != 2 * num_gus ||
        static_cast<int>(action.continuous.size()) != spec_.continuous_dim)
      throw std::invalid_argument("factored action has wrong head layout");
    for (int u = 0; u < num_gus; ++u) {
      decision.association[u] = decode_assoc(action.categorical[u]);
      decision.key_length[u] = kKeyLengths.at(action.categorical[num_gus + u]);
    }
    // per-axis range d_max/sqrt(2), so the 2-norm bound holds by construction
    double scale = config_.max_uav_displacement / kSqrt2;
    for (int a = 0; a < num_uavs; ++a) {
      decision.displacement[a] = {action.continuous[2 * a] * scale,
                                  action.continuous[2 * a + 1] * scale};
    }
  }
  return decision;
}

Transition Environment::step(const Action& action) {
  if (done_) throw std::logic_error("step() called on a finished episode; call reset()");
  return apply(decode_action(action), action);
}

Transition Environment::step_decision(const DecisionVector& decision) {
  if (done_) throw std::logic_error("step() called on a finished episode; call reset()");
  return apply(decision, Action{});
}

Transition Environment::apply(const DecisionVector& decision, const Action& action) {
  Transition tr;
  tr.observation = observe();
  tr.action = action;

  // move UAVs; positions clamp to the grid (containment is not a constraint)
  for (std::size_t a = 0; a < state_.uavs.size(); ++a) {
    UavRelay& uav = state_.uavs[a];
    uav.prev_position = uav.position;
    uav.position.x = std::clamp(uav.position.x + decision.displacement.at(a).x, 0.0,
                                config_.grid_width);
    uav.position.y = std::clamp(uav.position.y + decision.displacement.at(a).y, 0.0,
                                config_.grid_height);
  }

  tr.outcome = evaluate_step(decision, state_, ledgers_, config_, bounds_);
  tr.reward_final = tr.outcome.reward_final;

  for (std::size_t u = 0; u < state_.gus.size(); ++u) {
    ledgers_[u].debit(tr.outcome.gus[u].energy);
    state_.gus[u].battery_remaining = ledgers_[u].battery_remaining;
  }

  step_mobility(state_, config_, rng_);
  redraw_data_sizes(state_, config_, rng_);
  ++state_.timestep;
  done_ = state_.timestep >= config_.horizon;
  tr.done = done_;
  tr.next_observation = observe();
  return tr;
}

}  // namespace uavsim
