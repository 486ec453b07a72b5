#pragma once

#include <functional>
#include <span>

#include "uavsim/env.hpp"

namespace uavsim {

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct Tensor {
  std::string name;
  std::vector<int> shape;
  std::vector<double> data;
  std::vector<double> grad;

  int size() const {
    int n = 1;
    for (int d : shape) n *= d;
    return n;
  }
};

/// Plain fully connected net, tanh hidden activations, linear output.
/// Forward caches activations for the matching backward call; one sample in
/// flight at a time.
class Mlp {
 public:
  Mlp(const std::string& name, const std::vector<int>& layer_sizes);

  std::vector<double> forward(std::span<const double> input);
  /// Accumulates parameter gradients; returns nothing (input grads unused).
  void backward(std::span<const double> output_grad);

  void init_random(Rng& rng, double scale);
  void zero_grad();
  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
  int output_size() const { return sizes_.back(); }
  int input_size() const { return sizes_.front(); }

 private:
  std::vector<int> sizes_;
  std::vector<Tensor> weights_;  // per layer: out x in
  std::vector<Tensor> biases_;
  std::vector<std::vector<double>> activations_;  // cached post-activation, per layer
};

/// Generalized advantage estimation, recursive form, truncated at episode
/// ends (done flags). next_values[t] is V(s_{t+1}); ignored where done.
std::vector<double> compute_gae(std::span<const double> rewards, std::span<const double> values,
                                std::span<const double> next_values,
                                std::span<const std::uint8_t> dones, double gamma, double lambda);

struct Sample {
  std::vector<double> observation;
  Action action;
  std::vector<double> gauss_pre_squash;  // z with a = tanh(z)
  double log_prob_old = 0;
  double reward = 0;
  double value = 0;
  double next_value = 0;
  bool done = false;
  // filled by finish():
  double advantage = 0;
  double ret = 0;
};

class RolloutBuffer {
 public:
  void add(Sample sample) { samples_.push_back(std::move(sample)); }
  void finish(double gamma, double lambda);  // computes advantages + returns
  void clear() { samples_.clear(); }
  std::vector<Sample>& samples() { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<Sample> samples_;
};

/// Clipped-surrogate term for one sample:
///   min(m A, clip(m, 1-eps, 1+eps) A),  m = exp(logp_new - logp_old).
/// Returns the term; *dlogp_new gets its derivative wrt logp_new.
double clipped_surrogate(double log_prob_new, double log_prob_old, double advantage,
                         double epsilon, double* dlogp_new = nullptr);

struct ActResult {
  Action action;
  std::vector<double> gauss_pre_squash;
  double log_prob = 0;
  double value = 0;
};

struct UpdateStats {
  double loss_pi = 0;
  double loss_v = 0;
  double entropy = 0;
};

/// Actor-critic with factored heads: one categorical head per discrete
/// choice, a tanh-squashed Gaussian over the continuous dims (state-dependent
/// mean and log-std, log-std clamped to [-5, 2]). Gradients are hand-rolled;
/// the finite-difference suite in tests anchors their correctness.
class PpoAgent {
 public:
  PpoAgent(int obs_dim, const ActionSpec& spec, const PpoHyperparams& hp, std::uint64_t seed);

  ActResult act(std::span<const double> obs, bool greedy = false);
  double value(std::span<const double> obs);

  /// One PPO update over the buffer: per-batch advantage normalization,
  /// `epochs` passes of shuffled minibatches, Adam, global grad-norm clip.
  /// Throws NumericalError on NaN gradients or parameters.
  UpdateStats update(RolloutBuffer& buffer);

  /// Total loss of one minibatch at the current parameters, accumulating
  /// parameter gradients. Exposed for the finite-difference check.
  double loss_and_grad(std::span<const Sample> batch);

  const ActionSpec& spec() const { return spec_; }
  const PpoHyperparams& hyperparams() const { return hp_; }
  std::vector<Tensor*> tensors();            // actor + critic parameters
  std::vector<Tensor*> optimizer_tensors();  // Adam first/second moments
  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  Rng& rng() { return rng_; }
  long long adam_step() const { return adam_step_; }
  void set_adam_step(long long step) { adam_step_ = step; }

 private:
  struct HeadEval {
    double log_prob = 0;
    double entropy = 0;
    std::vector<double> dlogp;     // wrt actor outputs
    std::vector<double> dentropy;  // wrt actor outputs
  };
  HeadEval evaluate_heads(std::span<const double> outputs, const Action& action,
                          std::span<const double> pre_squash) const;
  UpdateStats accumulate_batch(std::span<const Sample> batch);

  int obs_dim_;
  ActionSpec spec_;
  PpoHyperparams hp_;
  int cat_total_ = 0;  // sum of categorical head sizes
  Mlp actor_;
  Mlp critic_;
  std::vector<Tensor> adam_m_;
  std::vector<Tensor> adam_v_;
  long long adam_step_ = 0;
  Rng rng_;

  void adam_apply();
  void check_finite(const char* where);
};

struct EpisodeLog {
  int episode = 0;
  double cum_reward = 0;         // sum of r_final over the episode
  double cum_penalty = 0;
  double loss_pi = 0;
  double loss_v = 0;
  double entropy = 0;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;
using CheckpointCallback = std::function<void(int episode, PpoAgent&)>;

/// Full training loop: N episodes of T steps, one update per
/// rollout_episodes collected episodes. Deterministic given (env, seed) in
/// single-instance mode.
std::vector<EpisodeLog> train(Environment& env, PpoAgent& agent,
                              const EpisodeCallback& on_episode = nullptr,
                              const CheckpointCallback& on_checkpoint = nullptr);

}  // namespace uavsim
