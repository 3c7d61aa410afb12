// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_SEPARATION_MODEL_H_
#define SDNET_SEPARATION_MODEL_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "sdnet/frontend/feature_extractor.h"
#include "sdnet/inference/inference_module.h"
#include "sdnet/separation/tcn.h"

namespace sdnet::separation {

struct ModelOptions {
  frontend::FrontendOptions frontend;
  inference::InferenceOptions inference;
  SeparatorOptions separator;

  // Throws ConfigError when widths disagree between stages.
  void Validate() const;
  static ModelOptions Paper();
};

struct TeacherForcedSeparation {
  torch::Tensor separated;  // [N, L], rows ordered by (batch, step)
  std::vector<std::pair<int64_t, int64_t>> rows;  // (batch, step) per row
  inference::TeacherForcedOutput inference;
};

struct SeparatedSource {
  std::vector<double> waveform;
  int speaker_token = 0;
  int direction_token = 0;
};

struct SeparationOutput {
  std::vector<SeparatedSource> sources;
  inference::InferenceResult inference;
  // The decoder emitted EOS first; no source was extracted.
  bool no_sources() const { return sources.empty(); }
};

class SdnetModelImpl : public torch::nn::Module {
 public:
  explicit SdnetModelImpl(const ModelOptions &opts);

  const ModelOptions &options() const { return opts_; }

  // Shared separator trunk: F~ and TCN_o for mixture [B, 2, L].
  struct Trunk {
    frontend::FrontendFeatures features;
    torch::Tensor bottleneck;  // [B, T, E]
    torch::Tensor tcn_out;     // [B, T, E]
  };
  Trunk RunTrunk(const torch::Tensor &mixture);

  // Masks Z_t = F~ * TCN_o * sm_t and decodes them. `masks` is [N, E] with
  // `batch_index` selecting the trunk row of each mask.
  torch::Tensor DecodeMasks(const Trunk &trunk, const torch::Tensor &masks,
                            const std::vector<int64_t> &batch_index, int64_t length);

  TeacherForcedSeparation ForwardTeacherForced(
      const torch::Tensor &mixture, const std::vector<std::vector<int>> &speakers,
      const std::vector<std::vector<int>> &directions, bool feed_labels = false);

  frontend::FeatureExtractor frontend{nullptr};
  inference::InferenceModule inference{nullptr};
  Bottleneck bottleneck{nullptr};
  Tcn tcn{nullptr};
  WaveformDecoder decoder{nullptr};

 private:
  ModelOptions opts_;
};
TORCH_MODULE(SdnetModel);

struct OracleLabels {
  std::vector<int> speakers;
  std::vector<int> directions;
};

// Separates one two-channel mixture [2, L]. kTeacherForced requires labels.
SeparationOutput Separate(SdnetModel &model, const torch::Tensor &mixture,
                          inference::DecodeMode mode, int beam_width = 1,
                          const std::optional<OracleLabels> &labels = std::nullopt);

}  // namespace sdnet::separation

#endif  // SDNET_SEPARATION_MODEL_H_
