// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_HARNESS_DATASET_H_
#define SDNET_HARNESS_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "sdnet/datasim/manifest.h"
#include "sdnet/datasim/mixture.h"

namespace sdnet::harness {

struct Example {
  std::string id;
  torch::Tensor mixture;  // [2, L] float
  torch::Tensor targets;  // [n, L] float, energy order
  std::vector<int> speakers;
  std::vector<int> directions;

  int NumSources() const { return static_cast<int>(speakers.size()); }
};

struct Batch {
  torch::Tensor mixture;  // [B, 2, L]
  torch::Tensor targets;  // [sum n_b, L], rows ordered by (batch, source)
  std::vector<std::vector<int>> speakers;
  std::vector<std::vector<int>> directions;
};

Example ToExample(const datasim::MixtureExample &example, std::string id);

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Example> examples) : examples_(std::move(examples)) {}

  // Reads every entry of a JSON-lines manifest; max_examples == 0 reads all.
  static Dataset Load(const std::filesystem::path &manifest, int max_examples = 0);

  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const Example &at(std::size_t i) const { return examples_.at(i); }
  const std::vector<Example> &examples() const { return examples_; }

  // Crops (at `offsets[i]`) or zero-pads every example to `length` samples.
  Batch MakeBatch(std::span<const std::size_t> indices, int64_t length,
                  std::span<const int64_t> offsets = {}) const;

 private:
  std::vector<Example> examples_;
};

// Deterministic epoch-shuffled sampler: the batch drawn at a given step
// depends only on (seed, step), so resuming needs no sampler state.
class BatchSampler {
 public:
  BatchSampler(std::size_t dataset_size, int batch_size, uint64_t seed);

  std::vector<std::size_t> Indices(int64_t step) const;
  // Random crop start for each drawn example, in [0, max(0, len - length)].
  std::vector<int64_t> Offsets(const Dataset &data, std::span<const std::size_t> indices,
                               int64_t step, int64_t length) const;

 private:
  std::vector<std::size_t> Permutation(int64_t epoch) const;

  std::size_t size_;
  int batch_;
  uint64_t seed_;
};

}  // namespace sdnet::harness

#endif  // SDNET_HARNESS_DATASET_H_
