#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavsim/harness.hpp"
#include "uavsim/oracle.hpp"
#include "uavsim/persistence.hpp"

namespace py = pybind11;
using namespace uavsim;

PYBIND11_MODULE(_core, m) {
  m.doc() = "UAV-relay uplink simulator: crypto/channel/energy models, MDP environment, "
            "PPO agent and heuristic baselines";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<PersistenceError>(m, "PersistenceError");

  // ---- configuration
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("from_text", &ExperimentConfig::from_text)
      .def_static("from_file", &ExperimentConfig::from_file)
      .def("validate", &ExperimentConfig::validate)
      .def("canonical_text", &ExperimentConfig::canonical_text)
      .def("hash", &ExperimentConfig::hash)
      .def("keys", &ExperimentConfig::keys)
      .def("get", &ExperimentConfig::get)
      .def("set", &ExperimentConfig::set);

  // ---- model-layer primitives
  py::enum_<CryptoDirection>(m, "CryptoDirection")
      .value("Encrypt", CryptoDirection::Encrypt)
      .value("Decrypt", CryptoDirection::Decrypt);
  m.def("key_lengths", [] { return std::vector<int>(kKeyLengths.begin(), kKeyLengths.end()); });
  m.def(
      "complexity",
      [](int key_length, CryptoDirection dir) {
        return complexity(suite_from_key_length(key_length), dir, CycleCosts{});
      },
      py::arg("key_length"), py::arg("direction") = CryptoDirection::Encrypt,
      "operation count for one block at unit cycle costs");
  m.def(
      "encryption_latency",
      [](int key_length, double data_bits, double clock_hz) {
        return encryption_latency(suite_from_key_length(key_length), data_bits, clock_hz,
                                  CycleCosts{});
      },
      py::arg("key_length"), py::arg("data_bits"), py::arg("clock_hz"));
  m.def("security_level", &security_level, py::arg("key_length"));
  m.def("bpsk_ber", &bpsk_ber, py::arg("snr"));
  m.def(
      "uav_slot_energy",
      [](double velocity, const ExperimentConfig& cfg) {
        return uav_slot_energy(velocity, UavEnergyParams::from_config(cfg.scenario));
      },
      py::arg("velocity"), py::arg("config"));
  m.def("compute_gae",
        [](const std::vector<double>& rewards, const std::vector<double>& values,
           const std::vector<double>& next_values, const std::vector<bool>& dones, double gamma,
           double lambda) {
          std::vector<std::uint8_t> d(dones.begin(), dones.end());
          return compute_gae(rewards, values, next_values, d, gamma, lambda);
        });
  m.def("brute_force_gae", &brute_force_gae);

  // ---- environment
  py::class_<Action>(m, "Action")
      .def(py::init<>())
      .def_readwrite("categorical", &Action::categorical)
      .def_readwrite("continuous", &Action::continuous);
  py::class_<ActionSpec>(m, "ActionSpec")
      .def_readonly("categorical_sizes", &ActionSpec::categorical_sizes)
      .def_readonly("continuous_dim", &ActionSpec::continuous_dim)
      .def_readonly("box_mode", &ActionSpec::box_mode);
  py::class_<StepOutcome>(m, "StepOutcome")
      .def_readonly("mean_norm_latency", &StepOutcome::mean_norm_latency)
      .def_readonly("mean_norm_energy", &StepOutcome::mean_norm_energy)
      .def_readonly("mean_norm_security", &StepOutcome::mean_norm_security)
      .def_readonly("penalty", &StepOutcome::penalty)
      .def_readonly("reward", &StepOutcome::reward)
      .def_readonly("reward_final", &StepOutcome::reward_final);
  py::class_<Transition>(m, "Transition")
      .def_readonly("observation", &Transition::observation)
      .def_readonly("reward_final", &Transition::reward_final)
      .def_readonly("next_observation", &Transition::next_observation)
      .def_readonly("done", &Transition::done)
      .def_readonly("outcome", &Transition::outcome);
  py::class_<Environment>(m, "Environment")
      .def(py::init([](const ExperimentConfig& cfg, std::uint64_t instance) {
             return new Environment(cfg.scenario, instance);
           }),
           py::arg("config"), py::arg("instance") = 0)
      .def("reset", [](Environment& env) { return env.reset(); })
      .def("reset_seeded", [](Environment& env, std::uint64_t seed) { return env.reset(seed); })
      .def("step", &Environment::step)
      .def("observe", &Environment::observe)
      .def("observation_size", &Environment::observation_size)
      .def("done", &Environment::done)
      .def("timestep", &Environment::timestep)
      .def_property_readonly("action_spec", &Environment::action_spec);

  // ---- agent and baselines
  py::class_<PpoAgent>(m, "PpoAgent")
      .def(py::init([](const ExperimentConfig& cfg, const Environment& env, std::uint64_t seed) {
             return new PpoAgent(env.observation_size(), env.action_spec(), cfg.ppo, seed);
           }),
           py::arg("config"), py::arg("env"), py::arg("seed"))
      .def("act", [](PpoAgent& agent, const std::vector<double>& obs, bool greedy) {
             return agent.act(obs, greedy).action;
           },
           py::arg("obs"), py::arg("greedy") = false)
      .def("value",
           [](PpoAgent& agent, const std::vector<double>& obs) { return agent.value(obs); });
  m.def(
      "train",
      [](Environment& env, PpoAgent& agent) {
        std::vector<double> rewards;
        for (const EpisodeLog& log : train(env, agent)) rewards.push_back(log.cum_reward);
        return rewards;
      },
      py::arg("env"), py::arg("agent"), "runs the configured training loop; returns per-episode "
                                        "cumulative rewards");
  m.def(
      "run_heuristic",
      [](Environment& env, const std::string& policy, std::uint64_t seed, int episodes) {
        HeuristicActor actor(policy_kind_from_name(policy), seed);
        return metrics_to_json(run_episodes(env, actor, episodes));
      },
      py::arg("env"), py::arg("policy"), py::arg("seed"), py::arg("episodes"),
      "aggregate metrics of a heuristic policy, as a JSON string");
  m.def(
      "run_agent",
      [](Environment& env, PpoAgent& agent, int episodes) {
        AgentActor actor(agent, /*greedy=*/true);
        return metrics_to_json(run_episodes(env, actor, episodes));
      },
      py::arg("env"), py::arg("agent"), py::arg("episodes"));
  m.def("save_checkpoint",
        [](const std::string& path, PpoAgent& agent, int episode, std::uint64_t seed,
           int obs_dim) { save_checkpoint(path, agent, episode, seed, obs_dim); });
}
