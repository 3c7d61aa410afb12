// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_OBJECTIVES_LOSS_H_
#define SDNET_OBJECTIVES_LOSS_H_

#include <vector>

#include <torch/torch.h>

#include "sdnet/objectives/metrics.h"

namespace sdnet::objectives {

inline constexpr double kDefaultLambda = 5.0;

// total = -sisnr_ss + lambda * (ce_spk + ce_dir)
struct LossBreakdown {
  double sisnr_ss = 0.0;  // dB, mean over sources
  double ce_spk = 0.0;    // nats
  double ce_dir = 0.0;    // nats
  double total = 0.0;
  double lambda = kDefaultLambda;

  static LossBreakdown Combine(double sisnr_ss, double ce_spk, double ce_dir,
                               double lambda = kDefaultLambda);
};

// Differentiable SI-SNR per row. est, ref: [N, L] -> [N].
torch::Tensor SisnrTensor(const torch::Tensor &est, const torch::Tensor &ref,
                          double clamp_db = kTrainClampDb);

// Mean over steps of -log p(label_t). log_probs: [S, V]; labels include EOS.
torch::Tensor SequenceCeTensor(const torch::Tensor &log_probs,
                               const std::vector<int> &labels_with_eos);

struct LossTerms {
  torch::Tensor total;
  torch::Tensor sisnr;
  torch::Tensor ce_spk;
  torch::Tensor ce_dir;
  double lambda = kDefaultLambda;

  LossBreakdown Breakdown() const;
};

// Composite training loss. `separated` and `targets` are [N, L] with rows
// paired positionally (output i <-> energy-sorted target i). Log-prob tensors
// are [B, S, V]; labels exclude EOS, which is appended here.
LossTerms TotalLoss(const torch::Tensor &separated, const torch::Tensor &targets,
                    const torch::Tensor &speaker_log_probs,
                    const torch::Tensor &direction_log_probs,
                    const std::vector<std::vector<int>> &speaker_labels,
                    const std::vector<std::vector<int>> &direction_labels,
                    int speaker_eos, int direction_eos, double lambda = kDefaultLambda,
                    double clamp_db = kTrainClampDb);

}  // namespace sdnet::objectives

#endif  // SDNET_OBJECTIVES_LOSS_H_
