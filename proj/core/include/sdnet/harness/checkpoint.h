// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_HARNESS_CHECKPOINT_H_
#define SDNET_HARNESS_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>

#include <torch/torch.h>

#include "sdnet/separation/model.h"

namespace sdnet::harness {

struct TrainerState {
  int64_t step = 0;
  double learning_rate = 0.0;
  double best_dev = -std::numeric_limits<double>::infinity();
  int bad_evals = 0;
  uint64_t sampler_seed = 0;  // batches are a pure function of (seed, step)
};

// Writes atomically (temp file + rename). `optimizer` may be null.
void SaveCheckpoint(const std::filesystem::path &path, separation::SdnetModel &model,
                    torch::optim::Adam *optimizer, uint64_t model_hash,
                    const TrainerState &state);

// Restores parameters, optimizer moments, the torch CPU generator and the
// trainer state. Throws ConfigError when the checkpoint was written for a
// different architecture and IoError when the file is unreadable.
TrainerState LoadCheckpoint(const std::filesystem::path &path, separation::SdnetModel &model,
                            torch::optim::Adam *optimizer, uint64_t model_hash);

}  // namespace sdnet::harness

#endif  // SDNET_HARNESS_CHECKPOINT_H_
