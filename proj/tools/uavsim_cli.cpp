#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavsim/harness.hpp"
#include "uavsim/oracle.hpp"
#include "uavsim/persistence.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace uavsim {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistenceError("cannot write " + path.string());
  out << text;
}

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string checkpoint;
  std::string policy = "nearest";
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  int instances = 50;  // oracle cross-check count
  bool train_per_cell = false;
};

ExperimentConfig load_config(const CliOptions& opt) {
  ExperimentConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = ExperimentConfig::from_file(opt.config_path);
  } else {
    cfg.apply_env_overrides();
  }
  if (opt.seed) cfg.scenario.rng_seed = *opt.seed;
  cfg.validate();
  return cfg;
}

void check_compatible(const PpoAgent& agent, int loaded_obs_dim, const Environment& env) {
  ensure_compatible(agent.spec(), loaded_obs_dim, env.action_spec(), env.observation_size());
}

struct TrainOutput {
  std::string final_checkpoint_rel;
  std::vector<EpisodeLog> logs;
};

TrainOutput run_training(const ExperimentConfig& cfg, const std::string& out) {
  prepare_output_dir(out);
  Environment env(cfg.scenario);
  PpoAgent agent(env.observation_size(), env.action_spec(), cfg.ppo, cfg.scenario.rng_seed);

  std::string log_csv = "episode,cum_reward,cum_penalty,loss_pi,loss_v,entropy\n";
  std::vector<std::string> artifacts = {"training_log.csv"};
  int last_saved = 0;
  auto save = [&](int episode, PpoAgent& a) {
    std::string rel = "checkpoints/ep" + std::to_string(episode) + ".ckpt";
    save_checkpoint((fs::path(out) / rel).string(), a, episode, cfg.scenario.rng_seed,
                    env.observation_size());
    artifacts.push_back(rel);
    last_saved = episode;
  };
  TrainOutput result;
  result.logs = train(
      env, agent,
      [&](const EpisodeLog& l) {
        log_csv += std::to_string(l.episode) + "," + fmt(l.cum_reward) + "," +
                   fmt(l.cum_penalty) + "," + fmt(l.loss_pi) + "," + fmt(l.loss_v) + "," +
                   fmt(l.entropy) + "\n";
      },
      save);
  if (last_saved != cfg.ppo.episodes) save(cfg.ppo.episodes, agent);
  result.final_checkpoint_rel = "checkpoints/ep" + std::to_string(cfg.ppo.episodes) + ".ckpt";
  write_file(fs::path(out) / "training_log.csv", log_csv);
  write_manifest(out, cfg, cfg.scenario.rng_seed, "train", artifacts,
                 {{"episodes", std::to_string(cfg.ppo.episodes)}});
  return result;
}

int cmd_train(const CliOptions& opt) {
  ExperimentConfig cfg = load_config(opt);
  if (opt.episodes) cfg.ppo.episodes = *opt.episodes;
  cfg.validate();
  if (opt.out_dir.empty()) throw ConfigError("train requires --out");
  TrainOutput result = run_training(cfg, opt.out_dir);

  int tail = std::max(1, static_cast<int>(result.logs.size()) / 10);
  double head_reward = 0, tail_reward = 0;
  for (int i = 0; i < tail; ++i) head_reward += result.logs[i].cum_reward / tail;
  for (int i = 0; i < tail; ++i)
    tail_reward += result.logs[result.logs.size() - 1 - i].cum_reward / tail;

  json summary = {{"out", opt.out_dir},
                  {"episodes", cfg.ppo.episodes},
                  {"final_checkpoint", result.final_checkpoint_rel},
                  {"mean_reward_first_decile", head_reward},
                  {"mean_reward_final_decile", tail_reward}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

void write_eval_artifacts(const std::string& out, const ExperimentConfig& cfg,
                          const std::string& subcommand, const AggregateMetrics& agg,
                          const std::vector<EpisodeMetrics>& per_episode,
                          const std::vector<std::pair<std::string, std::string>>& args) {
  prepare_output_dir(out);
  std::vector<std::string> artifacts = {"metrics/summary.json"};
  write_file(fs::path(out) / "metrics/summary.json", metrics_to_json(agg) + "\n");
  int traces = std::min<int>(10, static_cast<int>(per_episode.size()));
  for (int e = 0; e < traces; ++e) {
    std::string rel = "traces/" + std::to_string(e + 1) + ".csv";
    write_file(fs::path(out) / rel, episode_trace_csv(e + 1, per_episode[e]));
    artifacts.push_back(rel);
  }
  write_manifest(out, cfg, cfg.scenario.rng_seed, subcommand, artifacts, args);
}

int cmd_evaluate(const CliOptions& opt) {
  ExperimentConfig cfg = load_config(opt);
  if (opt.checkpoint.empty()) throw ConfigError("evaluate requires --checkpoint");
  int episodes = opt.episodes.value_or(1000);

  LoadedCheckpoint loaded = load_checkpoint(opt.checkpoint);
  Environment env(cfg.scenario);
  check_compatible(*loaded.agent, loaded.obs_dim, env);
  AgentActor actor(*loaded.agent, /*greedy=*/true);
  std::vector<EpisodeMetrics> per_episode;
  AggregateMetrics agg = run_episodes(env, actor, episodes, &per_episode);
  if (!opt.out_dir.empty())
    write_eval_artifacts(opt.out_dir, cfg, "evaluate", agg, per_episode,
                         {{"episodes", std::to_string(episodes)},
                          {"checkpoint", opt.checkpoint}});
  std::cout << metrics_to_json(agg) << "\n";
  return 0;
}

int cmd_baseline(const CliOptions& opt) {
  ExperimentConfig cfg = load_config(opt);
  int episodes = opt.episodes.value_or(1000);
  PolicyKind kind = policy_kind_from_name(opt.policy);
  Environment env(cfg.scenario);
  HeuristicActor actor(kind, derive_seed(cfg.scenario.rng_seed, 9001));
  std::vector<EpisodeMetrics> per_episode;
  AggregateMetrics agg = run_episodes(env, actor, episodes, &per_episode);
  if (!opt.out_dir.empty())
    write_eval_artifacts(opt.out_dir, cfg, "baseline", agg, per_episode,
                         {{"episodes", std::to_string(episodes)}, {"policy", opt.policy}});
  std::cout << metrics_to_json(agg) << "\n";
  return 0;
}

int cmd_oracle(const CliOptions& opt) {
  ExperimentConfig base = load_config(opt);
  json failures = json::array();
  long long feasible_total = 0;
  for (int i = 0; i < opt.instances; ++i) {
    ScenarioConfig cfg = base.scenario;
    cfg.num_gus = 1 + i % 3;
    cfg.num_uavs = 1;
    cfg.num_orus = 2;
    cfg.rng_seed = derive_seed(base.scenario.rng_seed, 100 + i);
    Rng rng(cfg.rng_seed);
    WorldState state = generate_scenario(cfg, rng);
    std::vector<Vec2> lattice = make_lattice(cfg);
    SnapshotResult oracle = brute_force_snapshot(state, cfg, lattice);
    feasible_total += oracle.feasible_count;
    if (!oracle.best) continue;

    SnapshotEval check = evaluate_snapshot(state, *oracle.best, cfg);
    if (!check.feasible || std::abs(check.objective - oracle.best_objective) > 1e-9) {
      failures.push_back({{"instance", i},
                          {"kind", "evaluator_mismatch"},
                          {"oracle", oracle.best_objective},
                          {"evaluator", check.objective}});
      continue;
    }
    // heuristics must never beat exhaustive search (UAV moves snapped to the
    // oracle's candidate set)
    for (const char* name : {"nearest", "nouav", "random"}) {
      HeuristicPolicy policy(policy_kind_from_name(name), derive_seed(cfg.rng_seed, 7));
      DecisionVector decision = policy.act(state, cfg);
      for (auto& d : decision.displacement) {
        Vec2 target = {state.uavs[0].position.x + d.x, state.uavs[0].position.y + d.y};
        double best_d = std::numeric_limits<double>::infinity();
        Vec2 snapped = state.uavs[0].position;
        for (const Vec2& p : lattice) {
          double dd = ground_distance(target, p);
          if (dd < best_d) {
            best_d = dd;
            snapped = p;
          }
        }
        d = {snapped.x - state.uavs[0].position.x, snapped.y - state.uavs[0].position.y};
      }
      SnapshotEval h = evaluate_snapshot(state, decision, cfg);
      if (h.feasible && h.objective < oracle.best_objective - 1e-9)
        failures.push_back({{"instance", i},
                            {"kind", "heuristic_beats_oracle"},
                            {"policy", name},
                            {"heuristic", h.objective},
                            {"oracle", oracle.best_objective}});
    }
  }
  json report = {{"instances", opt.instances},
                 {"feasible_decisions_total", feasible_total},
                 {"failures", failures},
                 {"pass", failures.empty()}};
  std::cout << report.dump(2) << "\n";
  return failures.empty() ? 0 : 1;
}

json cell_json(const AggregateMetrics& m) {
  return {{"mean_norm_latency", m.mean_norm_latency},
          {"mean_norm_security", m.mean_norm_security},
          {"mean_norm_energy", m.mean_norm_energy},
          {"mean_cum_reward", m.mean_cum_reward},
          {"mean_disconnected_gus", m.mean_disconnected_gus},
          {"min_constraint_satisfaction", m.min_satisfaction()}};
}

/// RL metrics for one sweep cell: reuse the provided checkpoint when its
/// head layout matches, otherwise train a fresh policy on the cell config.
AggregateMetrics rl_cell_metrics(const ExperimentConfig& cfg, const CliOptions& opt,
                                 int eval_episodes, const std::vector<RadioUnit>* pinned_orus) {
  std::unique_ptr<PpoAgent> agent;
  Environment env(cfg.scenario);
  if (pinned_orus) env.pin_orus(*pinned_orus);
  if (!opt.checkpoint.empty() && !opt.train_per_cell) {
    LoadedCheckpoint loaded = load_checkpoint(opt.checkpoint);
    check_compatible(*loaded.agent, loaded.obs_dim, env);
    agent = std::move(loaded.agent);
  } else {
    Environment train_env(cfg.scenario);
    if (pinned_orus) train_env.pin_orus(*pinned_orus);
    agent = std::make_unique<PpoAgent>(train_env.observation_size(), train_env.action_spec(),
                                       cfg.ppo, cfg.scenario.rng_seed);
    train(train_env, *agent);
  }
  AgentActor actor(*agent, /*greedy=*/true);
  return run_episodes(env, actor, eval_episodes);
}

AggregateMetrics heuristic_cell_metrics(const ExperimentConfig& cfg, PolicyKind kind,
                                        int eval_episodes,
                                        const std::vector<RadioUnit>* pinned_orus) {
  Environment env(cfg.scenario);
  if (pinned_orus) env.pin_orus(*pinned_orus);
  HeuristicActor actor(kind, derive_seed(cfg.scenario.rng_seed, 9001));
  return run_episodes(env, actor, eval_episodes);
}

int cmd_compare(const CliOptions& opt) {
  ExperimentConfig base = load_config(opt);
  int eval_episodes = opt.episodes.value_or(100);
  json result;
  result["eval_episodes"] = eval_episodes;

  // sweep 1: number of ground users
  json gus_sweep = json::array();
  for (int num_gus : {10, 15, 20}) {
    ExperimentConfig cfg = base;
    cfg.scenario.num_gus = num_gus;
    json row = {{"num_gus", num_gus}};
    row["rl"] = cell_json(rl_cell_metrics(cfg, opt, eval_episodes, nullptr));
    row["nearest"] =
        cell_json(heuristic_cell_metrics(cfg, PolicyKind::NearestWithUavs, eval_episodes, nullptr));
    row["nouav"] =
        cell_json(heuristic_cell_metrics(cfg, PolicyKind::NoUav, eval_episodes, nullptr));
    gus_sweep.push_back(row);
  }
  result["num_gus_sweep"] = gus_sweep;

  // sweep 2: device-resource tiers scale the GU clock, battery and compute
  // budget ranges by {0.5, 1.0, 2.0}
  json tier_sweep = json::array();
  const std::pair<const char*, double> tiers[] = {{"low", 0.5}, {"medium", 1.0}, {"high", 2.0}};
  for (auto [name, scale] : tiers) {
    ExperimentConfig cfg = base;
    cfg.scenario.gu_clock_min *= scale;
    cfg.scenario.gu_clock_max *= scale;
    cfg.scenario.battery_min *= scale;
    cfg.scenario.battery_max *= scale;
    cfg.scenario.compute_budget_min *= scale;
    cfg.scenario.compute_budget_max *= scale;
    json row = {{"tier", name}, {"scale", scale}};
    row["rl"] = cell_json(rl_cell_metrics(cfg, opt, eval_episodes, nullptr));
    row["nearest"] =
        cell_json(heuristic_cell_metrics(cfg, PolicyKind::NearestWithUavs, eval_episodes, nullptr));
    row["nouav"] =
        cell_json(heuristic_cell_metrics(cfg, PolicyKind::NoUav, eval_episodes, nullptr));
    tier_sweep.push_back(row);
  }
  result["resource_tier_sweep"] = tier_sweep;

  // sweep 3: grid side length with the O-RU sites pinned to the base draw
  Rng base_rng(base.scenario.rng_seed);
  std::vector<RadioUnit> base_orus = generate_scenario(base.scenario, base_rng).orus;
  json grid_sweep = json::array();
  for (double side : {100.0, 200.0, 400.0}) {
    ExperimentConfig cfg = base;
    cfg.scenario.grid_width = side;
    cfg.scenario.grid_height = side;
    json row = {{"grid", side}};
    row["rl"] = cell_json(rl_cell_metrics(cfg, opt, eval_episodes, &base_orus));
    row["nearest"] = cell_json(
        heuristic_cell_metrics(cfg, PolicyKind::NearestWithUavs, eval_episodes, &base_orus));
    row["nouav"] =
        cell_json(heuristic_cell_metrics(cfg, PolicyKind::NoUav, eval_episodes, &base_orus));
    grid_sweep.push_back(row);
  }
  result["grid_sweep"] = grid_sweep;

  if (!opt.out_dir.empty()) {
    prepare_output_dir(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "compare.json", result.dump(2) + "\n");
    write_manifest(opt.out_dir, base, base.scenario.rng_seed, "compare", {"compare.json"},
                   {{"episodes", std::to_string(eval_episodes)},
                    {"train_per_cell", opt.train_per_cell ? "1" : "0"}});
  }
  std::cout << result.dump(2) << "\n";
  return 0;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const IntegrityError*>(&e)) return "integrity";
  if (dynamic_cast<const PersistenceError*>(&e)) return "persistence";
  if (dynamic_cast<const OracleCapError*>(&e)) return "oracle_cap";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
  return "runtime";
}

}  // namespace
}  // namespace uavsim

int main(int argc, char** argv) {
  using namespace uavsim;
  CLI::App app{"UAV-relay uplink simulator and PPO trainer"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "flat key = value config file");
    sub->add_option("--seed", opt.seed, "master RNG seed (overrides config)");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--episodes", opt.episodes, "episode count for this subcommand");
    sub->add_option("--checkpoint", opt.checkpoint, "policy checkpoint path");
    sub->add_option("--policy", opt.policy, "heuristic policy: nearest|nouav|random");
  };
  CLI::App* train_cmd = app.add_subcommand("train", "train a PPO policy");
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint greedily");
  CLI::App* base_cmd = app.add_subcommand("baseline", "run a heuristic policy");
  CLI::App* comp_cmd = app.add_subcommand("compare", "RL vs heuristics across sweeps");
  CLI::App* orac_cmd = app.add_subcommand("oracle", "brute-force cross-check report");
  for (CLI::App* sub : {train_cmd, eval_cmd, base_cmd, comp_cmd, orac_cmd}) add_common(sub);
  comp_cmd->add_flag("--train-per-cell", opt.train_per_cell,
                     "train a fresh policy in every sweep cell");
  orac_cmd->add_option("--instances", opt.instances, "number of random tiny instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(opt);
    if (eval_cmd->parsed()) return cmd_evaluate(opt);
    if (base_cmd->parsed()) return cmd_baseline(opt);
    if (comp_cmd->parsed()) return cmd_compare(opt);
    if (orac_cmd->parsed()) return cmd_oracle(opt);
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", error_kind(e)}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 2;
}
