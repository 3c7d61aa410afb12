// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/harness/checkpoint.h"

#include <ATen/CPUGeneratorImpl.h>

#include "sdnet/errors.h"
#include "sdnet/fs.h"

namespace sdnet::harness {

namespace {

at::Generator CpuGenerator() {
  return at::detail::getDefaultCPUGenerator();
}

c10::IValue Read(torch::serialize::InputArchive &archive, const std::string &key,
                 const std::filesystem::path &path) {
  c10::IValue v;
  if (!archive.try_read(key, v)) {
    throw IoError("checkpoint " + path.string() + " lacks field '" + key + "'");
  }
  return v;
}

}  // namespace

void SaveCheckpoint(const std::filesystem::path &path, separation::SdnetModel &model,
                    torch::optim::Adam *optimizer, uint64_t model_hash,
                    const TrainerState &state) {
  EnsureParentDir(path);
  torch::serialize::OutputArchive archive;
  model->save(archive);
  if (optimizer) {
    torch::serialize::OutputArchive opt;
    optimizer->save(opt);
    archive.write("optimizer", opt);
  }
  archive.write("model_hash", c10::IValue(static_cast<int64_t>(model_hash)));
  archive.write("step", c10::IValue(state.step));
  archive.write("learning_rate", c10::IValue(state.learning_rate));
  archive.write("best_dev", c10::IValue(state.best_dev));
  archive.write("bad_evals", c10::IValue(static_cast<int64_t>(state.bad_evals)));
  archive.write("sampler_seed", c10::IValue(static_cast<int64_t>(state.sampler_seed)));
  {
    std::lock_guard<std::mutex> lock(CpuGenerator().mutex());
    archive.write("torch_rng", CpuGenerator().get_state(), /*is_buffer=*/true);
  }
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  try {
    archive.save_to(tmp.string());
  } catch (const c10::Error &e) {
    throw IoError("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TrainerState LoadCheckpoint(const std::filesystem::path &path, separation::SdnetModel &model,
                            torch::optim::Adam *optimizer, uint64_t model_hash) {
  if (!std::filesystem::exists(path)) throw IoError("checkpoint not found: " + path.string());
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path.string());
  } catch (const c10::Error &e) {
    throw IoError("cannot read checkpoint " + path.string());
  }
  const auto stored = static_cast<uint64_t>(Read(archive, "model_hash", path).toInt());
  if (stored != model_hash) {
    throw ConfigError("checkpoint " + path.string() +
                      " was written for a different model configuration");
  }
  model->load(archive);
  if (optimizer) {
    torch::serialize::InputArchive opt;
    if (!archive.try_read("optimizer", opt)) {
      throw IoError("checkpoint " + path.string() + " has no optimizer state");
    }
    optimizer->load(opt);
  }
  TrainerState state;
  state.step = Read(archive, "step", path).toInt();
  state.learning_rate = Read(archive, "learning_rate", path).toDouble();
  state.best_dev = Read(archive, "best_dev", path).toDouble();
  state.bad_evals = static_cast<int>(Read(archive, "bad_evals", path).toInt());
  state.sampler_seed = static_cast<uint64_t>(Read(archive, "sampler_seed", path).toInt());
  torch::Tensor rng;
  if (archive.try_read("torch_rng", rng, /*is_buffer=*/true)) {
    std::lock_guard<std::mutex> lock(CpuGenerator().mutex());
    CpuGenerator().set_state(rng);
  }
  return state;
}

}  // namespace sdnet::harness
