#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sumrl/embeddings.hpp"
#include "sumrl/policy.hpp"
#include "sumrl/reward.hpp"
#include "sumrl/rl.hpp"

namespace sumrl {

/// How to build an embedding provider: "hash" (dim, seed) or "file" (path, oov, seed).
struct ProviderSpec {
  std::string kind = "hash";
  std::size_t dim = 32;
  std::uint64_t seed = 17;
  std::string path;
  std::string oov = "hash_fallback";

  EmbeddingProvider build() const;
};

struct CorpusPaths {
  std::string train;
  std::string valid;
  std::string test;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t m = 3;  // sentences per summary at inference and for oracle labels
  CorpusPaths corpus;
  ProviderSpec encoder;   // sentence states
  ProviderSpec keyword;   // R_kw phrase embeddings
  ProviderSpec sequence;  // R_seq word vectors
  HeadKind head = HeadKind::linear;
  std::size_t hidden = 32;
  RewardConfig reward;
  std::string stopwords_path;  // empty = built-in list
  TrainConfig train;
  PpoConfig ppo;
  std::size_t bootstrap_resamples = 1000;
  std::string output_dir = "out";
  bool log_timing = true;  // false writes wall_ms = 0 so logs are byte-stable

  /// Pushes the run seed into every seeded component and loads the stopword list.
  void finalize();
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// Short stable hash of the serialized config, for report metadata.
std::string config_hash(const RunConfig& cfg);

}  // namespace sumrl
