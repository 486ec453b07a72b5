#include "uavsim/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uavsim {

namespace {

constexpr double kLogStdMin = -5.0;
constexpr double kLogStdMax = 2.0;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)

// log(1 - tanh(z)^2) in a form stable for large |z|
double log_one_minus_tanh_sq(double z) {
  double s = -2.0 * std::abs(z);
  return 2.0 * (std::log(2.0) + s / 2.0 - std::log1p(std::exp(s)));
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

// ---------------------------------------------------------------- Mlp

Mlp::Mlp(const std::string& name, const std::vector<int>& layer_sizes) : sizes_(layer_sizes) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least two layer sizes");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    int in = sizes_[l], out = sizes_[l + 1];
    Tensor w{name + "." + std::to_string(l) + ".w", {out, in}, {}, {}};
    w.data.assign(static_cast<std::size_t>(out) * in, 0.0);
    w.grad.assign(w.data.size(), 0.0);
    Tensor b{name + "." + std::to_string(l) + ".b", {out}, {}, {}};
    b.data.assign(out, 0.0);
    b.grad.assign(out, 0.0);
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
  }
  activations_.resize(sizes_.size());
}

void Mlp::init_random(Rng& rng, double scale) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    int in = sizes_[l], out = sizes_[l + 1];
    double limit = scale * std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& x : weights_[l].data) x = dist(rng);
    std::fill(biases_[l].data.begin(), biases_[l].data.end(), 0.0);
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) {
  if (static_cast<int>(input.size()) != sizes_.front())
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  activations_[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    int in = sizes_[l], out = sizes_[l + 1];
    const std::vector<double>& x = activations_[l];
    std::vector<double>& y = activations_[l + 1];
    y.assign(out, 0.0);
    const double* w = weights_[l].data.data();
    for (int i = 0; i < out; ++i) {
      double acc = biases_[l].data[i];
      const double* row = w + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) acc += row[j] * x[j];
      y[i] = (l + 1 < weights_.size()) ? std::tanh(acc) : acc;
    }
  }
  return activations_.back();
}

void Mlp::backward(std::span<const double> output_grad) {
  std::vector<double> dy(output_grad.begin(), output_grad.end());
  for (int l = static_cast<int>(weights_.size()) - 1; l >= 0; --l) {
    int in = sizes_[l], out = sizes_[l + 1];
    const std::vector<double>& x = activations_[l];
    const std::vector<double>& y = activations_[l + 1];
    // hidden layers: fold the tanh derivative into dy
    if (l < static_cast<int>(weights_.size()) - 1)
      for (int i = 0; i < out; ++i) dy[i] *= 1.0 - y[i] * y[i];
    double* gw = weights_[l].grad.data();
    const double* w = weights_[l].data.data();
    std::vector<double> dx(in, 0.0);
    for (int i = 0; i < out; ++i) {
      biases_[l].grad[i] += dy[i];
      double* grow = gw + static_cast<std::size_t>(i) * in;
      const double* row = w + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) {
        grow[j] += dy[i] * x[j];
        dx[j] += row[j] * dy[i];
      }
    }
    dy = std::move(dx);
  }
}

void Mlp::zero_grad() {
  for (auto& t : weights_) std::fill(t.grad.begin(), t.grad.end(), 0.0);
  for (auto& t : biases_) std::fill(t.grad.begin(), t.grad.end(), 0.0);
}

std::vector<Tensor*> Mlp::tensors() {
  std::vector<Tensor*> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

std::vector<const Tensor*> Mlp::tensors() const {
  std::vector<const Tensor*> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

// ---------------------------------------------------------------- GAE

std::vector<double> compute_gae(std::span<const double> rewards, std::span<const double> values,
                                std::span<const double> next_values,
                                std::span<const std::uint8_t> dones, double gamma, double lambda) {
  const int n = static_cast<int>(rewards.size());
  if (static_cast<int>(values.size()) != n || static_cast<int>(next_values.size()) != n ||
      static_cast<int>(dones.size()) != n)
    throw std::invalid_argument("compute_gae: length mismatch");
  std::vector<double> adv(n, 0.0);
  double carry = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    double mask = dones[t] ? 0.0 : 1.0;
    double delta = rewards[t] + gamma * next_values[t] * mask - values[t];
    carry = delta + gamma * lambda * mask * carry;
    adv[t] = carry;
  }
  return adv;
}

void RolloutBuffer::finish(double gamma, double lambda) {
  const std::size_t n = samples_.size();
  std::vector<double> rewards(n), values(n), next_values(n);
  std::vector<std::uint8_t> dones(n);
  for (std::size_t i = 0; i < n; ++i) {
    rewards[i] = samples_[i].reward;
    values[i] = samples_[i].value;
    next_values[i] = samples_[i].next_value;
    dones[i] = samples_[i].done ? 1 : 0;
  }
  std::vector<double> adv = compute_gae(rewards, values, next_values, dones, gamma, lambda);
  for (std::size_t i = 0; i < n; ++i) {
    samples_[i].advantage = adv[i];
    samples_[i].ret = adv[i] + values[i];
  }
}

// ------------------------------------------------------- clipped surrogate

double clipped_surrogate(double log_prob_new, double log_prob_old, double advantage,
                         double epsilon, double* dlogp_new) {
  double m = std::exp(log_prob_new - log_prob_old);
  double mc = std::clamp(m, 1.0 - epsilon, 1.0 + epsilon);
  double unclipped = m * advantage;
  double clipped = mc * advantage;
  double value = std::min(unclipped, clipped);
  if (dlogp_new) {
    // d(m)/dlogp = m; the clipped branch is flat where the clamp binds
    if (unclipped <= clipped)
      *dlogp_new = unclipped;
    else
      *dlogp_new = (m > 1.0 - epsilon && m < 1.0 + epsilon) ? unclipped : 0.0;
  }
  return value;
}

// ---------------------------------------------------------------- agent

PpoAgent::PpoAgent(int obs_dim, const ActionSpec& spec, const PpoHyperparams& hp,
                   std::uint64_t seed)
    : obs_dim_(obs_dim),
      spec_(spec),
      hp_(hp),
      cat_total_(std::accumulate(spec.categorical_sizes.begin(), spec.categorical_sizes.end(), 0)),
      actor_("actor", {obs_dim, hp.hidden_size, hp.hidden_size,
                       cat_total_ + 2 * spec.continuous_dim}),
      critic_("critic", {obs_dim, hp.hidden_size, hp.hidden_size, 1}),
      rng_(derive_seed(seed, 1)) {
  hp.validate();
  actor_.init_random(rng_, 1.0);
  critic_.init_random(rng_, 1.0);
  // a small final actor layer keeps the initial policy near-uniform
  Tensor* last_w = actor_.tensors()[actor_.tensors().size() - 2];
  for (double& x : last_w->data) x *= 0.01;
  for (Tensor* t : tensors()) {
    Tensor m{"adam.m." + t->name, t->shape, std::vector<double>(t->data.size(), 0.0), {}};
    Tensor v{"adam.v." + t->name, t->shape, std::vector<double>(t->data.size(), 0.0), {}};
    adam_m_.push_back(std::move(m));
    adam_v_.push_back(std::move(v));
  }
}

std::vector<Tensor*> PpoAgent::tensors() {
  std::vector<Tensor*> out = actor_.tensors();
  for (Tensor* t : critic_.tensors()) out.push_back(t);
  return out;
}

std::vector<Tensor*> PpoAgent::optimizer_tensors() {
  std::vector<Tensor*> out;
  for (auto& t : adam_m_) out.push_back(&t);
  for (auto& t : adam_v_) out.push_back(&t);
  return out;
}

PpoAgent::HeadEval PpoAgent::evaluate_heads(std::span<const double> outputs, const Action& action,
                                            std::span<const double> pre_squash) const {
  HeadEval eval;
  eval.dlogp.assign(outputs.size(), 0.0);
  eval.dentropy.assign(outputs.size(), 0.0);

  int offset = 0;
  for (std::size_t h = 0; h < spec_.categorical_sizes.size(); ++h) {
    int size = spec_.categorical_sizes[h];
    int chosen = action.categorical[h];
    // stable softmax
    double mx = outputs[offset];
    for (int j = 1; j < size; ++j) mx = std::max(mx, outputs[offset + j]);
    double sum = 0;
    for (int j = 0; j < size; ++j) sum += std::exp(outputs[offset + j] - mx);
    double lse = mx + std::log(sum);
    double head_logp = outputs[offset + chosen] - lse;
    double head_entropy = 0;
    for (int j = 0; j < size; ++j) {
      double lp = outputs[offset + j] - lse;
      head_entropy -= std::exp(lp) * lp;
    }
    for (int j = 0; j < size; ++j) {
      double p = std::exp(outputs[offset + j] - lse);
      double lp = outputs[offset + j] - lse;
      eval.dlogp[offset + j] = (j == chosen ? 1.0 : 0.0) - p;
      eval.dentropy[offset + j] = -p * (lp + head_entropy);
    }
    eval.log_prob += head_logp;
    eval.entropy += head_entropy;
    offset += size;
  }

  const int nd = spec_.continuous_dim;
  for (int i = 0; i < nd; ++i) {
    double mu = outputs[cat_total_ + i];
    double s_raw = outputs[cat_total_ + nd + i];
    double s = std::clamp(s_raw, kLogStdMin, kLogStdMax);
    double sigma = std::exp(s);
    double z = pre_squash[i];
    double d = (z - mu) / sigma;
    // base Gaussian log-density plus the tanh change-of-variables term
    eval.log_prob += -s - kHalfLog2Pi - 0.5 * d * d - log_one_minus_tanh_sq(z);
    // entropy of the base Gaussian; the squash correction is state-free here
    eval.entropy += s + kHalfLog2Pi + 0.5;
    eval.dlogp[cat_total_ + i] = d / sigma;
    bool clamped = s_raw < kLogStdMin || s_raw > kLogStdMax;
    eval.dlogp[cat_total_ + nd + i] = clamped ? 0.0 : d * d - 1.0;
    eval.dentropy[cat_total_ + nd + i] = clamped ? 0.0 : 1.0;
  }
  return eval;
}

ActResult PpoAgent::act(std::span<const double> obs, bool greedy) {
  std::vector<double> outputs = actor_.forward(obs);
  ActResult result;
  result.action.categorical.resize(spec_.categorical_sizes.size());
  result.action.continuous.resize(spec_.continuous_dim);
  result.gauss_pre_squash.resize(spec_.continuous_dim);

  int offset = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t h = 0; h < spec_.categorical_sizes.size(); ++h) {
    int size = spec_.categorical_sizes[h];
    int chosen = 0;
    if (greedy) {
      for (int j = 1; j < size; ++j)
        if (outputs[offset + j] > outputs[offset + chosen]) chosen = j;
    } else {
      double mx = outputs[offset];
      for (int j = 1; j < size; ++j) mx = std::max(mx, outputs[offset + j]);
      double sum = 0;
      for (int j = 0; j < size; ++j) sum += std::exp(outputs[offset + j] - mx);
      double r = unit(rng_) * sum;
      double acc = 0;
      chosen = size - 1;
      for (int j = 0; j < size; ++j) {
        acc += std::exp(outputs[offset + j] - mx);
        if (r <= acc) {
          chosen = j;
          break;
        }
      }
    }
    result.action.categorical[h] = chosen;
    offset += size;
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  const int nd = spec_.continuous_dim;
  for (int i = 0; i < nd; ++i) {
    double mu = outputs[cat_total_ + i];
    double s = std::clamp(outputs[cat_total_ + nd + i], kLogStdMin, kLogStdMax);
    double z = greedy ? mu : mu + std::exp(s) * normal(rng_);
    result.gauss_pre_squash[i] = z;
    result.action.continuous[i] = std::tanh(z);
  }

  result.log_prob =
      evaluate_heads(outputs, result.action, result.gauss_pre_squash).log_prob;
  result.value = critic_.forward(obs)[0];
  return result;
}

double PpoAgent::value(std::span<const double> obs) { return critic_.forward(obs)[0]; }

UpdateStats PpoAgent::accumulate_batch(std::span<const Sample> batch) {
  UpdateStats stats;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Sample& sample : batch) {
    std::vector<double> outputs = actor_.forward(sample.observation);
    HeadEval eval = evaluate_heads(outputs, sample.action, sample.gauss_pre_squash);
    double dsurr_dlogp = 0;
    double surr = clipped_surrogate(eval.log_prob, sample.log_prob_old, sample.advantage,
                                    hp_.clip_range, &dsurr_dlogp);
    stats.loss_pi += -surr * inv_n;
    stats.entropy += eval.entropy * inv_n;

    // minimize: -surr - c_H * H  (per actor output)
    std::vector<double> dout(outputs.size());
    for (std::size_t j = 0; j < outputs.size(); ++j)
      dout[j] = (-dsurr_dlogp * eval.dlogp[j] - hp_.entropy_coef * eval.dentropy[j]) * inv_n;
    actor_.backward(dout);

    double v = critic_.forward(sample.observation)[0];
    double err = v - sample.ret;
    stats.loss_v += 0.5 * err * err * inv_n;
    double dv = hp_.value_coef * err * inv_n;
    critic_.backward(std::span<const double>(&dv, 1));
  }
  return stats;
}

double PpoAgent::loss_and_grad(std::span<const Sample> batch) {
  UpdateStats s = accumulate_batch(batch);
  return s.loss_pi + hp_.value_coef * s.loss_v - hp_.entropy_coef * s.entropy;
}

void PpoAgent::check_finite(const char* where) {
  for (const Tensor* t : tensors()) {
    if (!all_finite(t->data) || !all_finite(t->grad))
      throw NumericalError(std::string("non-finite values in ") + t->name + " during " + where);
  }
}

void PpoAgent::adam_apply() {
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  ++adam_step_;
  double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_step_));
  double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_step_));
  std::vector<Tensor*> params = tensors();
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor* t = params[k];
    std::vector<double>& m = adam_m_[k].data;
    std::vector<double>& v = adam_v_[k].data;
    for (std::size_t i = 0; i < t->data.size(); ++i) {
      double g = t->grad[i];
      m[i] = beta1 * m[i] + (1.0 - beta1) * g;
      v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      t->data[i] -= hp_.learning_rate * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

UpdateStats PpoAgent::update(RolloutBuffer& buffer) {
  if (buffer.size() == 0) throw std::invalid_argument("update on empty buffer");
  buffer.finish(hp_.discount, hp_.gae_lambda);
  std::vector<Sample>& samples = buffer.samples();

  double mean = 0;
  for (const Sample& s : samples) mean += s.advantage;
  mean /= static_cast<double>(samples.size());
  double var = 0;
  for (const Sample& s : samples) var += (s.advantage - mean) * (s.advantage - mean);
  double sd = std::sqrt(var / static_cast<double>(samples.size()));
  for (Sample& s : samples) s.advantage = (s.advantage - mean) / (sd + 1e-8);

  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  UpdateStats totals;
  int batches = 0;
  for (int epoch = 0; epoch < hp_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng_);
    for (std::size_t start = 0; start < order.size(); start += hp_.minibatch) {
      std::size_t end = std::min(order.size(), start + hp_.minibatch);
      std::vector<Sample> minibatch;
      minibatch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) minibatch.push_back(samples[order[i]]);

      actor_.zero_grad();
      critic_.zero_grad();
      UpdateStats stats = accumulate_batch(minibatch);
      check_finite("gradient accumulation");

      double norm_sq = 0;
      for (Tensor* t : tensors())
        for (double g : t->grad) norm_sq += g * g;
      double norm = std::sqrt(norm_sq);
      if (hp_.grad_clip > 0 && norm > hp_.grad_clip) {
        double scale = hp_.grad_clip / norm;
        for (Tensor* t : tensors())
          for (double& g : t->grad) g *= scale;
      }
      adam_apply();
      check_finite("optimizer step");

      totals.loss_pi += stats.loss_pi;
      totals.loss_v += stats.loss_v;
      totals.entropy += stats.entropy;
      ++batches;
    }
  }
  totals.loss_pi /= batches;
  totals.loss_v /= batches;
  totals.entropy /= batches;
  return totals;
}

// ---------------------------------------------------------------- training

std::vector<EpisodeLog> train(Environment& env, PpoAgent& agent, const EpisodeCallback& on_episode,
                              const CheckpointCallback& on_checkpoint) {
  const PpoHyperparams& hp = agent.hyperparams();
  RolloutBuffer buffer;
  std::vector<EpisodeLog> logs;
  UpdateStats last_stats;
  for (int episode = 1; episode <= hp.episodes; ++episode) {
    std::vector<double> obs = env.reset();
    EpisodeLog log;
    log.episode = episode;
    while (!env.done()) {
      ActResult ar = agent.act(obs);
      Transition tr = env.step(ar.action);
      Sample sample;
      sample.observation = std::move(obs);
      sample.action = ar.action;
      sample.gauss_pre_squash = ar.gauss_pre_squash;
      sample.log_prob_old = ar.log_prob;
      sample.reward = tr.reward_final;
      sample.value = ar.value;
      sample.done = tr.done;
      if (!tr.done) sample.next_value = agent.value(tr.next_observation);
      buffer.add(std::move(sample));
      log.cum_reward += tr.reward_final;
      log.cum_penalty += tr.outcome.penalty;
      obs = std::move(tr.next_observation);
    }
    if (episode % hp.rollout_episodes == 0) {
      last_stats = agent.update(buffer);
      buffer.clear();
    }
    log.loss_pi = last_stats.loss_pi;
    log.loss_v = last_stats.loss_v;
    log.entropy = last_stats.entropy;
    logs.push_back(log);
    if (on_episode) on_episode(log);
    if (on_checkpoint && hp.checkpoint_interval > 0 && episode % hp.checkpoint_interval == 0)
      on_checkpoint(episode, agent);
  }
  return logs;
}

}  // namespace uavsim
