#include "uavsim/persistence.hpp"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace uavsim {

namespace {

constexpr char kMagic[] = "UAVSIMCKPT1\n";  // 12 bytes, no terminator written
constexpr std::size_t kMagicLen = 12;

void append_u64(std::string& out, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

std::uint64_t read_u64(const std::string& data, std::size_t offset) {
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i)
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[offset + i])) << (8 * i);
  return value;
}

void append_f64(std::string& out, double value) {
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  append_u64(out, bits);
}

double read_f64(const std::string& data, std::size_t offset) {
  std::uint64_t bits = read_u64(data, offset);
  double value;
  std::memcpy(&value, &bits, 8);
  return value;
}

nlohmann::json hyperparams_json(const PpoHyperparams& hp) {
  return {{"learning_rate", hp.learning_rate},
          {"discount", hp.discount},
          {"clip_range", hp.clip_range},
          {"epochs", hp.epochs},
          {"minibatch", hp.minibatch},
          {"gae_lambda", hp.gae_lambda},
          {"entropy_coef", hp.entropy_coef},
          {"value_coef", hp.value_coef},
          {"grad_clip", hp.grad_clip},
          {"rollout_episodes", hp.rollout_episodes},
          {"episodes", hp.episodes},
          {"hidden_size", hp.hidden_size},
          {"checkpoint_interval", hp.checkpoint_interval}};
}

PpoHyperparams hyperparams_from_json(const nlohmann::json& j) {
  PpoHyperparams hp;
  hp.learning_rate = j.at("learning_rate");
  hp.discount = j.at("discount");
  hp.clip_range = j.at("clip_range");
  hp.epochs = j.at("epochs");
  hp.minibatch = j.at("minibatch");
  hp.gae_lambda = j.at("gae_lambda");
  hp.entropy_coef = j.at("entropy_coef");
  hp.value_coef = j.at("value_coef");
  hp.grad_clip = j.at("grad_clip");
  hp.rollout_episodes = j.at("rollout_episodes");
  hp.episodes = j.at("episodes");
  hp.hidden_size = j.at("hidden_size");
  hp.checkpoint_interval = j.at("checkpoint_interval");
  return hp;
}

std::vector<Tensor*> all_tensors(PpoAgent& agent) {
  std::vector<Tensor*> tensors = agent.tensors();
  for (Tensor* t : agent.optimizer_tensors()) tensors.push_back(t);
  return tensors;
}

}  // namespace

void save_checkpoint(const std::string& path, PpoAgent& agent, int episode, std::uint64_t seed,
                     int obs_dim) {
  const ActionSpec& spec = agent.spec();
  nlohmann::json header = {
      {"schema_version", kCheckpointSchemaVersion},
      {"episode", episode},
      {"seed", seed},
      {"obs_dim", obs_dim},
      {"adam_step", agent.adam_step()},
      {"spec",
       {{"categorical_sizes", spec.categorical_sizes},
        {"continuous_dim", spec.continuous_dim},
        {"box_mode", spec.box_mode},
        {"num_gus", spec.num_gus},
        {"num_orus", spec.num_orus},
        {"num_uavs", spec.num_uavs}}},
      {"hyperparams", hyperparams_json(agent.hyperparams())},
  };
  nlohmann::json manifest = nlohmann::json::array();
  for (Tensor* t : all_tensors(agent))
    manifest.push_back({{"name", t->name}, {"shape", t->shape}});
  header["tensors"] = manifest;

  std::string blob(kMagic, kMagicLen);
  std::string header_text = header.dump();
  append_u64(blob, header_text.size());
  blob += header_text;
  for (Tensor* t : all_tensors(agent))
    for (double x : t->data) append_f64(blob, x);
  append_u64(blob, fnv1a(blob.data(), blob.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistenceError("cannot open checkpoint for writing: " + path);
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw PersistenceError("short write on checkpoint: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot open checkpoint: " + path);
  std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (blob.size() < kMagicLen + 16) throw IntegrityError("checkpoint truncated: " + path);
  if (blob.compare(0, kMagicLen, kMagic, kMagicLen) != 0)
    throw IntegrityError("bad checkpoint magic: " + path);
  std::uint64_t stored_hash = read_u64(blob, blob.size() - 8);
  if (fnv1a(blob.data(), blob.size() - 8) != stored_hash)
    throw IntegrityError("checkpoint integrity hash mismatch (truncated or corrupted): " + path);

  std::size_t offset = kMagicLen;
  std::uint64_t header_len = read_u64(blob, offset);
  offset += 8;
  if (offset + header_len > blob.size() - 8)
    throw IntegrityError("checkpoint header overruns file: " + path);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(blob.substr(offset, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("unparseable checkpoint header: ") + e.what());
  }
  offset += header_len;

  int schema = header.at("schema_version");
  if (schema != kCheckpointSchemaVersion)
    throw PersistenceError("unsupported checkpoint schema version " + std::to_string(schema));

  LoadedCheckpoint loaded;
  loaded.episode = header.at("episode");
  loaded.seed = header.at("seed");
  loaded.obs_dim = header.at("obs_dim");

  ActionSpec spec;
  const nlohmann::json& js = header.at("spec");
  spec.categorical_sizes = js.at("categorical_sizes").get<std::vector<int>>();
  spec.continuous_dim = js.at("continuous_dim");
  spec.box_mode = js.at("box_mode");
  spec.num_gus = js.at("num_gus");
  spec.num_orus = js.at("num_orus");
  spec.num_uavs = js.at("num_uavs");
  PpoHyperparams hp = hyperparams_from_json(header.at("hyperparams"));

  loaded.agent = std::make_unique<PpoAgent>(loaded.obs_dim, spec, hp, loaded.seed);
  loaded.agent->set_adam_step(header.at("adam_step"));

  std::vector<Tensor*> tensors = all_tensors(*loaded.agent);
  const nlohmann::json& manifest = header.at("tensors");
  if (manifest.size() != tensors.size())
    throw ShapeError("checkpoint holds " + std::to_string(manifest.size()) + " tensors, expected " +
                     std::to_string(tensors.size()));
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    Tensor* t = tensors[k];
    std::string name = manifest[k].at("name");
    std::vector<int> shape = manifest[k].at("shape").get<std::vector<int>>();
    if (name != t->name || shape != t->shape)
      throw ShapeError("tensor " + name + " does not match expected " + t->name +
                       " (head layout or dimensions differ)");
    std::size_t bytes = static_cast<std::size_t>(t->size()) * 8;
    if (offset + bytes > blob.size() - 8)
      throw IntegrityError("tensor payload overruns file at " + t->name);
    for (int i = 0; i < t->size(); ++i) t->data[i] = read_f64(blob, offset + 8 * i);
    offset += bytes;
  }
  if (offset != blob.size() - 8)
    throw IntegrityError("trailing bytes after tensor payload: " + path);
  return loaded;
}

namespace {
std::string describe_spec(const ActionSpec& spec, int obs_dim) {
  return "U=" + std::to_string(spec.num_gus) + " G=" + std::to_string(spec.num_orus) +
         " A=" + std::to_string(spec.num_uavs) +
         " heads=" + std::to_string(spec.categorical_sizes.size()) +
         " cont=" + std::to_string(spec.continuous_dim) + " obs=" + std::to_string(obs_dim);
}
}  // namespace

void ensure_compatible(const ActionSpec& checkpoint_spec, int checkpoint_obs_dim,
                       const ActionSpec& env_spec, int env_obs_dim) {
  if (checkpoint_spec.categorical_sizes != env_spec.categorical_sizes ||
      checkpoint_spec.continuous_dim != env_spec.continuous_dim ||
      checkpoint_spec.box_mode != env_spec.box_mode || checkpoint_obs_dim != env_obs_dim)
    throw ShapeError("checkpoint (" + describe_spec(checkpoint_spec, checkpoint_obs_dim) +
                     ") does not match the environment (" +
                     describe_spec(env_spec, env_obs_dim) + ")");
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot open for hashing: " + path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  return h;
}

void prepare_output_dir(const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "checkpoints");
  fs::create_directories(fs::path(out_dir) / "traces");
  fs::create_directories(fs::path(out_dir) / "metrics");
}

void write_manifest(const std::string& out_dir, const ExperimentConfig& config,
                    std::uint64_t seed, const std::string& subcommand,
                    const std::vector<std::string>& artifacts,
                    const std::vector<std::pair<std::string, std::string>>& args) {
  namespace fs = std::filesystem;
  nlohmann::json snapshot = nlohmann::json::object();
  for (const std::string& key : config.keys()) snapshot[key] = config.get(key);

  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

  nlohmann::json files = nlohmann::json::object();
  for (const std::string& rel : artifacts) {
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(hash_file((fs::path(out_dir) / rel).string())));
    files[rel] = hex;
  }

  char config_hex[20];
  std::snprintf(config_hex, sizeof config_hex, "%016llx",
                static_cast<unsigned long long>(config.hash()));

  nlohmann::json arg_map = nlohmann::json::object();
  for (const auto& [key, value] : args) arg_map[key] = value;

  nlohmann::json manifest = {{"schema_version", kManifestSchemaVersion},
                             {"created", stamp},
                             {"subcommand", subcommand},
                             {"seed", seed},
                             {"config", snapshot},
                             {"config_hash", config_hex},
                             {"args", arg_map},
                             {"artifacts", files}};
  std::ofstream out(fs::path(out_dir) / "manifest.json");
  if (!out) throw PersistenceError("cannot write manifest in " + out_dir);
  out << manifest.dump(2) << "\n";
}

}  // namespace uavsim
