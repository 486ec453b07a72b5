#include "uavsim/harness.hpp"

#include <json.hpp>

namespace uavsim {

Transition AgentActor::step(Environment& env, const std::vector<double>& obs) {
  ActResult result = agent_.act(obs, greedy_);
  return env.step(result.action);
}

Transition HeuristicActor::step(Environment& env, const std::vector<double>&) {
  DecisionVector decision = policy_.act(env.world(), env.config());
  return env.step_decision(decision);
}

EpisodeMetrics run_episode(Environment& env, Actor& actor) {
  std::vector<double> obs = env.reset();
  EpisodeMetrics m;
  std::vector<bool> disconnected(env.world().gus.size(), false);
  int steps = 0;
  while (!env.done()) {
    Transition tr = actor.step(env, obs);
    obs = std::move(tr.next_observation);
    const StepOutcome& o = tr.outcome;
    m.cum_reward += o.reward_final;
    m.cum_penalty += o.penalty;
    m.mean_norm_latency += o.mean_norm_latency;
    m.mean_norm_energy += o.mean_norm_energy;
    m.mean_norm_security += o.mean_norm_security;
    for (int f = 0; f < kNumConstraintFamilies; ++f) {
      m.violations[f] += o.constraints.violations[f];
      m.checks[f] += o.constraints.checks[f];
    }
    for (std::size_t u = 0; u < o.gus.size(); ++u)
      if (o.gus[u].ber_violation) disconnected[u] = true;
    m.steps.push_back(o);
    ++steps;
  }
  if (steps > 0) {
    m.mean_norm_latency /= steps;
    m.mean_norm_energy /= steps;
    m.mean_norm_security /= steps;
  }
  m.objective = objective_value(m.steps);
  for (bool d : disconnected)
    if (d) ++m.disconnected_gus;
  return m;
}

AggregateMetrics run_episodes(Environment& env, Actor& actor, int episodes,
                              std::vector<EpisodeMetrics>* per_episode) {
  std::vector<EpisodeMetrics> all;
  all.reserve(episodes);
  for (int e = 0; e < episodes; ++e) all.push_back(run_episode(env, actor));
  AggregateMetrics agg = aggregate(all);
  if (per_episode) *per_episode = std::move(all);
  return agg;
}

AggregateMetrics aggregate(const std::vector<EpisodeMetrics>& episodes) {
  AggregateMetrics agg;
  agg.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return agg;
  for (const EpisodeMetrics& m : episodes) {
    agg.mean_cum_reward += m.cum_reward;
    agg.mean_cum_penalty += m.cum_penalty;
    agg.mean_norm_latency += m.mean_norm_latency;
    agg.mean_norm_energy += m.mean_norm_energy;
    agg.mean_norm_security += m.mean_norm_security;
    agg.mean_objective += m.objective;
    agg.mean_disconnected_gus += m.disconnected_gus;
    for (int f = 0; f < kNumConstraintFamilies; ++f) {
      agg.violations[f] += m.violations[f];
      agg.checks[f] += m.checks[f];
    }
  }
  double n = static_cast<double>(agg.episodes);
  agg.mean_cum_reward /= n;
  agg.mean_cum_penalty /= n;
  agg.mean_norm_latency /= n;
  agg.mean_norm_energy /= n;
  agg.mean_norm_security /= n;
  agg.mean_objective /= n;
  agg.mean_disconnected_gus /= n;
  for (int f = 0; f < kNumConstraintFamilies; ++f)
    agg.satisfaction[f] =
        agg.checks[f] == 0
            ? 1.0
            : 1.0 - static_cast<double>(agg.violations[f]) / static_cast<double>(agg.checks[f]);
  return agg;
}

double AggregateMetrics::min_satisfaction() const {
  double lo = 1.0;
  for (double s : satisfaction) lo = std::min(lo, s);
  return lo;
}

std::string metrics_to_json(const AggregateMetrics& metrics) {
  nlohmann::json j = {{"episodes", metrics.episodes},
                      {"mean_cum_reward", metrics.mean_cum_reward},
                      {"mean_cum_penalty", metrics.mean_cum_penalty},
                      {"mean_norm_latency", metrics.mean_norm_latency},
                      {"mean_norm_energy", metrics.mean_norm_energy},
                      {"mean_norm_security", metrics.mean_norm_security},
                      {"mean_objective", metrics.mean_objective},
                      {"mean_disconnected_gus", metrics.mean_disconnected_gus}};
  nlohmann::json families = nlohmann::json::object();
  for (int f = 0; f < kNumConstraintFamilies; ++f) {
    const char* name = constraint_family_name(static_cast<ConstraintFamily>(f));
    families[name] = {{"satisfaction", metrics.satisfaction[f]},
                      {"violations", metrics.violations[f]},
                      {"checks", metrics.checks[f]}};
  }
  j["constraints"] = families;
  return j.dump(2);
}

std::string episode_trace_csv(int episode, const EpisodeMetrics& metrics) {
  std::string out = step_outcome_csv_header();
  for (const StepOutcome& step : metrics.steps) append_step_outcome_csv(out, episode, step);
  return out;
}

}  // namespace uavsim
