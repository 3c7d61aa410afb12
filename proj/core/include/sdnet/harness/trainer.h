// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_HARNESS_TRAINER_H_
#define SDNET_HARNESS_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <torch/torch.h>

#include "sdnet/harness/checkpoint.h"
#include "sdnet/harness/config.h"
#include "sdnet/harness/dataset.h"
#include "sdnet/objectives/loss.h"
#include "sdnet/separation/model.h"

namespace sdnet::harness {

struct StepRecord {
  int64_t step = 0;  // 1-based count of completed updates
  objectives::LossBreakdown loss;
  double learning_rate = 0.0;
};

struct DevRecord {
  int64_t step = 0;
  double sisnri = 0.0;
  double count_accuracy = 0.0;
  double learning_rate = 0.0;
};

class Trainer {
 public:
  // Seeds torch and builds the model and optimizer from `config`.
  Trainer(const RunConfig &config, Dataset train, std::optional<Dataset> dev = std::nullopt);

  // Restores model, optimizer, generator and schedule state.
  void Resume(const std::filesystem::path &checkpoint);
  void Save(const std::filesystem::path &checkpoint);

  // One optimizer update. Throws DivergenceError on a non-finite loss
  // before touching the parameters.
  StepRecord Step();

  // Trains until `config.train.max_steps`, writing logs, plots and
  // checkpoints under `out_dir`. `on_dev` may request an early stop.
  void Run(const std::filesystem::path &out_dir,
           const std::function<bool(const DevRecord &)> &on_dev = {});

  // Greedy-decoded SI-SNRi and count accuracy on the dev set.
  DevRecord EvaluateDev();

  separation::SdnetModel &model() { return model_; }
  torch::optim::Adam &optimizer() { return *optimizer_; }
  const RunConfig &config() const { return config_; }
  int64_t step() const { return state_.step; }
  double learning_rate() const;
  const std::vector<StepRecord> &history() const { return history_; }
  const std::vector<DevRecord> &dev_history() const { return dev_history_; }

 private:
  void SetLearningRate(double lr);
  void WriteLogs(const std::filesystem::path &out_dir) const;

  RunConfig config_;
  Dataset train_;
  std::optional<Dataset> dev_;
  BatchSampler sampler_;
  separation::SdnetModel model_{nullptr};
  std::unique_ptr<torch::optim::Adam> optimizer_;
  TrainerState state_;
  int64_t segment_samples_ = 0;
  std::vector<StepRecord> history_;
  std::vector<DevRecord> dev_history_;
};

}  // namespace sdnet::harness

#endif  // SDNET_HARNESS_TRAINER_H_
