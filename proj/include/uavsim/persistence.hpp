#pragma once

#include <memory>

#include "uavsim/ppo.hpp"

namespace uavsim {

struct PersistenceError : std::runtime_error {
  explicit PersistenceError(const std::string& what) : std::runtime_error(what) {}
};

/// File truncated, magic mismatch or trailing hash mismatch.
struct IntegrityError : PersistenceError {
  explicit IntegrityError(const std::string& what) : PersistenceError(what) {}
};

/// Stored tensor shapes disagree with the declared dimensions.
struct ShapeError : PersistenceError {
  explicit ShapeError(const std::string& what) : PersistenceError(what) {}
};

inline constexpr int kCheckpointSchemaVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;

struct LoadedCheckpoint {
  int episode = 0;
  std::uint64_t seed = 0;
  int obs_dim = 0;
  std::unique_ptr<PpoAgent> agent;
};

/// Binary checkpoint: magic line, length-prefixed JSON header (schema
/// version, dims, hyperparameters, tensor manifest), little-endian float64
/// tensor payloads including optimizer moments, then a trailing 64-bit
/// integrity hash over everything before it.
void save_checkpoint(const std::string& path, PpoAgent& agent, int episode, std::uint64_t seed,
                     int obs_dim);

/// Rebuilds the agent from the stored dims and parameters. Throws
/// IntegrityError for damaged files and ShapeError when a tensor does not
/// match the declared head layout.
LoadedCheckpoint load_checkpoint(const std::string& path);

/// Throws ShapeError when a checkpoint's head layout or observation size
/// cannot drive the given environment dimensions.
void ensure_compatible(const ActionSpec& checkpoint_spec, int checkpoint_obs_dim,
                       const ActionSpec& env_spec, int env_obs_dim);

/// 64-bit content hash of a file (streaming fnv1a).
std::uint64_t hash_file(const std::string& path);

/// Creates <out>/, <out>/checkpoints, <out>/traces, <out>/metrics.
void prepare_output_dir(const std::string& out_dir);

/// Writes <out>/manifest.json: schema version, subcommand, seed, creation
/// time, the full config snapshot with its hash, the subcommand's non-config
/// arguments, and a content hash per sibling artifact (paths relative to the
/// output dir). The snapshot, seed and args are everything needed to re-run
/// the subcommand and reproduce the artifacts byte-for-byte.
void write_manifest(const std::string& out_dir, const ExperimentConfig& config,
                    std::uint64_t seed, const std::string& subcommand,
                    const std::vector<std::string>& artifacts,
                    const std::vector<std::pair<std::string, std::string>>& args = {});

}  // namespace uavsim
