#pragma once

#include "uavsim/baselines.hpp"
#include "uavsim/ppo.hpp"

namespace uavsim {

/// Anything that can drive one environment step.
class Actor {
 public:
  virtual ~Actor() = default;
  virtual Transition step(Environment& env, const std::vector<double>& obs) = 0;
};

/// Wraps a trained (or fresh) agent; greedy by default for evaluation.
class AgentActor : public Actor {
 public:
  AgentActor(PpoAgent& agent, bool greedy = true) : agent_(agent), greedy_(greedy) {}
  Transition step(Environment& env, const std::vector<double>& obs) override;

 private:
  PpoAgent& agent_;
  bool greedy_;
};

class HeuristicActor : public Actor {
 public:
  HeuristicActor(PolicyKind kind, std::uint64_t seed) : policy_(kind, seed) {}
  Transition step(Environment& env, const std::vector<double>& obs) override;

 private:
  HeuristicPolicy policy_;
};

struct EpisodeMetrics {
  double cum_reward = 0;   // sum of r_final
  double cum_penalty = 0;
  double mean_norm_latency = 0;   // averaged over steps
  double mean_norm_energy = 0;
  double mean_norm_security = 0;
  double objective = 0;           // episode objective (latency+energy+security sums)
  std::array<long long, kNumConstraintFamilies> violations{};
  std::array<long long, kNumConstraintFamilies> checks{};
  int disconnected_gus = 0;  // GUs with a first-hop BER violation at any step
  std::vector<StepOutcome> steps;
};

struct AggregateMetrics {
  int episodes = 0;
  double mean_cum_reward = 0;
  double mean_cum_penalty = 0;
  double mean_norm_latency = 0;
  double mean_norm_energy = 0;
  double mean_norm_security = 0;
  double mean_objective = 0;
  double mean_disconnected_gus = 0;
  std::array<double, kNumConstraintFamilies> satisfaction{};  // fraction of checks passed
  std::array<long long, kNumConstraintFamilies> violations{};
  std::array<long long, kNumConstraintFamilies> checks{};

  double min_satisfaction() const;
};

EpisodeMetrics run_episode(Environment& env, Actor& actor);

/// Runs `episodes` episodes back to back on the same environment instance,
/// optionally recording per-step traces (one CSV per episode, keyed 1-based).
AggregateMetrics run_episodes(Environment& env, Actor& actor, int episodes,
                              std::vector<EpisodeMetrics>* per_episode = nullptr);

AggregateMetrics aggregate(const std::vector<EpisodeMetrics>& episodes);

std::string metrics_to_json(const AggregateMetrics& metrics);

/// Trace CSV body for one episode (includes header line).
std::string episode_trace_csv(int episode, const EpisodeMetrics& metrics);

}  // namespace uavsim
