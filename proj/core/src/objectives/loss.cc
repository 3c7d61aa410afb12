// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/objectives/loss.h"

#include "sdnet/errors.h"

namespace sdnet::objectives {

LossBreakdown LossBreakdown::Combine(double sisnr_ss, double ce_spk, double ce_dir,
                                     double lambda) {
  LossBreakdown b;
  b.sisnr_ss = sisnr_ss;
  b.ce_spk = ce_spk;
  b.ce_dir = ce_dir;
  b.lambda = lambda;
  b.total = -sisnr_ss + lambda * (ce_spk + ce_dir);
  return b;
}

torch::Tensor SisnrTensor(const torch::Tensor &est, const torch::Tensor &ref,
                          double clamp_db) {
  if (est.sizes() != ref.sizes()) throw DomainError("SisnrTensor: shape mismatch");
  constexpr double kEps = 1e-8;
  torch::Tensor e = est - est.mean(-1, true);
  torch::Tensor s = ref - ref.mean(-1, true);
  torch::Tensor alpha = (e * s).sum(-1, true) / (s.pow(2).sum(-1, true) + kEps);
  torch::Tensor target = alpha * s;
  torch::Tensor noise = e - target;
  torch::Tensor ratio = (target.pow(2).sum(-1) + kEps) / (noise.pow(2).sum(-1) + kEps);
  return torch::clamp(10.0 * torch::log10(ratio), -clamp_db, clamp_db);
}

torch::Tensor SequenceCeTensor(const torch::Tensor &log_probs,
                               const std::vector<int> &labels_with_eos) {
  if (log_probs.dim() != 2 || log_probs.size(0) != static_cast<int64_t>(labels_with_eos.size())) {
    throw DomainError("SequenceCeTensor: one label per step is required");
  }
  std::vector<int64_t> labels(labels_with_eos.begin(), labels_with_eos.end());
  torch::Tensor index = torch::tensor(labels, torch::kLong).to(log_probs.device()).unsqueeze(1);
  return -log_probs.gather(1, index).mean();
}

LossBreakdown LossTerms::Breakdown() const {
  return LossBreakdown::Combine(sisnr.item<double>(), ce_spk.item<double>(),
                                ce_dir.item<double>(), lambda);
}

LossTerms TotalLoss(const torch::Tensor &separated, const torch::Tensor &targets,
                    const torch::Tensor &speaker_log_probs,
                    const torch::Tensor &direction_log_probs,
                    const std::vector<std::vector<int>> &speaker_labels,
                    const std::vector<std::vector<int>> &direction_labels,
                    int speaker_eos, int direction_eos, double lambda, double clamp_db) {
  if (separated.size(0) != targets.size(0)) {
    throw DomainError("TotalLoss: " + std::to_string(separated.size(0)) +
                      " separated sources for " + std::to_string(targets.size(0)) +
                      " targets");
  }
  const auto B = static_cast<int64_t>(speaker_labels.size());
  if (speaker_log_probs.size(0) != B || direction_log_probs.size(0) != B ||
      static_cast<int64_t>(direction_labels.size()) != B) {
    throw DomainError("TotalLoss: batch sizes differ");
  }
  LossTerms terms;
  terms.lambda = lambda;
  terms.sisnr = SisnrTensor(separated, targets, clamp_db).mean();
  std::vector<torch::Tensor> ce_s, ce_d;
  for (int64_t b = 0; b < B; ++b) {
    std::vector<int> ls = speaker_labels[b], ld = direction_labels[b];
    ls.push_back(speaker_eos);
    ld.push_back(direction_eos);
    const auto steps = static_cast<int64_t>(ls.size());
    ce_s.push_back(SequenceCeTensor(speaker_log_probs[b].narrow(0, 0, steps), ls));
    ce_d.push_back(SequenceCeTensor(direction_log_probs[b].narrow(0, 0, steps), ld));
  }
  terms.ce_spk = torch::stack(ce_s).mean();
  terms.ce_dir = torch::stack(ce_d).mean();
  terms.total = -terms.sisnr + lambda * (terms.ce_spk + terms.ce_dir);
  return terms;
}

}  // namespace sdnet::objectives
