// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_HARNESS_CONFIG_H_
#define SDNET_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdnet/inference/inference_module.h"
#include "sdnet/objectives/loss.h"
#include "sdnet/separation/model.h"

namespace sdnet::harness {

struct LossConfig {
  double lambda = objectives::kDefaultLambda;
  double clamp_db = objectives::kTrainClampDb;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double lr_factor = 0.5;     // applied on a dev plateau
  int patience = 3;           // dev evaluations without improvement
  int batch_size = 4;
  double segment_seconds = 4.0;
  int64_t max_steps = 200000;
  double grad_clip = 5.0;
  int64_t eval_every = 1000;
  int64_t checkpoint_every = 1000;
  int64_t log_every = 10;
  int dev_examples = 0;  // 0: whole dev manifest
  uint64_t seed = 1;
  int threads = 1;
  // Feed reference tokens to the global embedding instead of argmax.
  bool feed_labels = false;
  std::string out_dir = "runs/default";
};

struct DataConfig {
  std::string root = "data";
  std::string mode = "2&3";  // "2", "3" or "2&3"
  bool reverberant = false;
  double duration_seconds = 4.0;
  int n_train_speakers = 24;
  int n_test_speakers = 6;
  // Explicit speaker ids; empty means [0, n_train) and [n_train, n_train + n_test).
  std::vector<int> train_speakers;
  std::vector<int> test_speakers;
  int train_mixtures = 2000;
  int dev_mixtures = 200;
  int test_mixtures = 200;
  uint64_t seed = 7;

  std::vector<int> TrainSpeakers() const;
  std::vector<int> TestSpeakers() const;
  // Dataset root after applying the SDNET_DATA_DIR override.
  std::filesystem::path Root() const;
};

struct EvalConfig {
  std::string decode = "beam";  // "beam", "greedy" or "oracle"
  int beam_width = 3;
  std::string manifest = "test";  // split name or a path to a .jsonl file
  int max_examples = 0;
  std::string out_dir = "runs/default/eval";
};

struct RunConfig {
  separation::ModelOptions model;
  LossConfig loss;
  TrainConfig train;
  DataConfig data;
  EvalConfig eval;

  // Throws ConfigError on inconsistent settings.
  void Validate() const;

  static RunConfig Load(const std::filesystem::path &path);
  static RunConfig Parse(const std::string &toml_text);
  std::string ToToml() const;

  // Canonical text of the network hyperparameters.
  std::string ModelText() const;
  // ModelText() plus the objective weighting.
  std::string ArchitectureText() const;
  // FNV-1a 64 of ModelText(); checkpoints record it.
  uint64_t ModelHash() const;
  // FNV-1a 64 of ArchitectureText().
  uint64_t ArchitectureHash() const;
};

// Hash of the published configuration; RunConfig{}.ArchitectureHash() must equal it.
inline constexpr uint64_t kPaperArchitectureHash = 0x41c02cd5b2c5ada4ULL;

uint64_t Fnv1a64(const std::string &text);

}  // namespace sdnet::harness

#endif  // SDNET_HARNESS_CONFIG_H_
