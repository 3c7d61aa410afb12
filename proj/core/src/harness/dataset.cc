// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/harness/dataset.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "sdnet/errors.h"
#include "sdnet/waveform.h"

namespace sdnet::harness {

namespace {

torch::Tensor ChannelsToTensor(const std::vector<std::vector<double>> &channels) {
  const auto n = static_cast<int64_t>(channels.size());
  const auto len = n ? static_cast<int64_t>(channels[0].size()) : 0;
  torch::Tensor out = torch::empty({n, len}, torch::kFloat);
  auto acc = out.accessor<float, 2>();
  for (int64_t c = 0; c < n; ++c)
    for (int64_t i = 0; i < len; ++i) acc[c][i] = static_cast<float>(channels[c][i]);
  return out;
}

torch::Tensor FitLength(const torch::Tensor &x, int64_t offset, int64_t length) {
  const int64_t have = x.size(-1);
  if (have >= length) return x.narrow(-1, std::min(offset, have - length), length);
  return torch::constant_pad_nd(x, {0, length - have});
}

}  // namespace

Example ToExample(const datasim::MixtureExample &example, std::string id) {
  Example out;
  out.id = std::move(id);
  out.mixture = ChannelsToTensor(example.mixture.channels);
  std::vector<std::vector<double>> targets;
  for (const auto &t : example.targets) targets.push_back(t.channels[0]);
  out.targets = ChannelsToTensor(targets);
  out.speakers = example.speaker_labels;
  out.directions = example.direction_labels;
  return out;
}

Dataset Dataset::Load(const std::filesystem::path &manifest, int max_examples) {
  const auto entries = datasim::ReadManifest(manifest);
  std::vector<Example> examples;
  for (const auto &e : entries) {
    if (max_examples > 0 && static_cast<int>(examples.size()) >= max_examples) break;
    Example ex;
    ex.id = std::filesystem::path(e.mixture_path).stem().stem().string();
    const WaveformSegment mix = ReadWav(datasim::ResolvePath(manifest, e.mixture_path));
    if (mix.NumChannels() != 2) {
      throw IoError(e.mixture_path + ": mixture must have two channels");
    }
    ex.mixture = ChannelsToTensor(mix.channels);
    std::vector<std::vector<double>> targets;
    for (const auto &p : e.target_paths) {
      const WaveformSegment t = ReadWav(datasim::ResolvePath(manifest, p));
      if (t.NumSamples() != mix.NumSamples()) {
        throw IoError(p + ": target length differs from its mixture");
      }
      targets.push_back(t.channels[0]);
    }
    ex.targets = ChannelsToTensor(targets);
    ex.speakers = e.speaker_labels;
    ex.directions = e.direction_labels;
    examples.push_back(std::move(ex));
  }
  return Dataset(std::move(examples));
}

Batch Dataset::MakeBatch(std::span<const std::size_t> indices, int64_t length,
                         std::span<const int64_t> offsets) const {
  if (indices.empty()) throw DomainError("MakeBatch: empty batch");
  if (!offsets.empty() && offsets.size() != indices.size()) {
    throw DomainError("MakeBatch: one offset per example is required");
  }
  Batch batch;
  std::vector<torch::Tensor> mixes, targets;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Example &ex = at(indices[i]);
    const int64_t off = offsets.empty() ? 0 : offsets[i];
    mixes.push_back(FitLength(ex.mixture, off, length));
    targets.push_back(FitLength(ex.targets, off, length));
    batch.speakers.push_back(ex.speakers);
    batch.directions.push_back(ex.directions);
  }
  batch.mixture = torch::stack(mixes);
  batch.targets = torch::cat(targets);
  return batch;
}

BatchSampler::BatchSampler(std::size_t dataset_size, int batch_size, uint64_t seed)
    : size_(dataset_size), batch_(batch_size), seed_(seed) {
  if (size_ == 0) throw DomainError("BatchSampler: empty dataset");
  if (batch_ < 1) throw DomainError("BatchSampler: batch size must be positive");
}

std::vector<std::size_t> BatchSampler::Permutation(int64_t epoch) const {
  std::vector<std::size_t> perm(size_);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::seed_seq seq{static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32),
                    static_cast<uint32_t>(epoch), 0x5eedu};
  std::mt19937_64 rng(seq);
  for (std::size_t i = size_; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(perm[i - 1], perm[pick(rng)]);
  }
  return perm;
}

std::vector<std::size_t> BatchSampler::Indices(int64_t step) const {
  std::vector<std::size_t> out;
  int64_t cached_epoch = -1;
  std::vector<std::size_t> perm;
  for (int j = 0; j < batch_; ++j) {
    const int64_t g = step * batch_ + j;
    const int64_t epoch = g / static_cast<int64_t>(size_);
    if (epoch != cached_epoch) {
      perm = Permutation(epoch);
      cached_epoch = epoch;
    }
    out.push_back(perm[g % static_cast<int64_t>(size_)]);
  }
  return out;
}

std::vector<int64_t> BatchSampler::Offsets(const Dataset &data,
                                           std::span<const std::size_t> indices, int64_t step,
                                           int64_t length) const {
  std::seed_seq seq{static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32),
                    static_cast<uint32_t>(step), static_cast<uint32_t>(step >> 32), 0x0ffu};
  std::mt19937_64 rng(seq);
  std::vector<int64_t> out;
  for (std::size_t i : indices) {
    const int64_t slack = std::max<int64_t>(0, data.at(i).mixture.size(-1) - length);
    std::uniform_int_distribution<int64_t> pick(0, slack);
    out.push_back(pick(rng));
  }
  return out;
}

}  // namespace sdnet::harness
