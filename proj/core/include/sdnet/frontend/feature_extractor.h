// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_FRONTEND_FEATURE_EXTRACTOR_H_
#define SDNET_FRONTEND_FEATURE_EXTRACTOR_H_

#include <cstdint>
#include <utility>

#include <torch/torch.h>

namespace sdnet::frontend {

enum class EncoderActivation { kLinear, kRelu };

struct FrontendOptions {
  int channels = 256;
  int kernel = 40;  // 5 ms at 8 kHz
  int stride = 20;  // 2.5 ms hop
  bool bias = false;
  EncoderActivation activation = EncoderActivation::kLinear;
  // When false the IAC block of F_o is zeros (ablation).
  bool use_iac = true;
  // Divide E1 E2^T by sqrt(channels) before the softmax.
  bool iac_scaled = false;
};

// floor((L - kernel) / stride) + 1. Throws DomainError when L < kernel.
int64_t NumFrames(int64_t num_samples, int kernel = 40, int stride = 20);

// Learned 1-D convolution from one waveform channel to a frame-major feature
// map. Input [L] or [B, L]; output [T, C] or [B, T, C].
class ChannelEncoderImpl : public torch::nn::Module {
 public:
  explicit ChannelEncoderImpl(const FrontendOptions &opts);
  torch::Tensor forward(const torch::Tensor &waveform);

  torch::nn::Conv1d conv{nullptr};

 private:
  FrontendOptions opts_;
};
TORCH_MODULE(ChannelEncoder);

struct InterChannelAttention {
  torch::Tensor attention;  // [.., T, T], rows sum to one
  torch::Tensor features;   // [.., T, C] = attention @ E2
};

// Row-wise softmax of E1 E2^T over channel-2 frames, applied to E2 so the
// result stays frame-aligned with channel 1. Accepts [T, C] or [B, T, C].
InterChannelAttention ComputeInterChannelAttention(const torch::Tensor &e1,
                                                   const torch::Tensor &e2,
                                                   bool scaled = false);

// Returns (F, F_o) = ([E1, E2], [IAC, E1, E2]) along the feature axis.
std::pair<torch::Tensor, torch::Tensor> AssembleFeatures(
    const torch::Tensor &e1, const torch::Tensor &e2, const torch::Tensor &iac);

struct FrontendFeatures {
  torch::Tensor e1, e2;
  torch::Tensor attention;
  torch::Tensor iac;
  torch::Tensor separation_input;  // F   [B, T, 2C]
  torch::Tensor inference_input;   // F_o [B, T, 3C]
};

class FeatureExtractorImpl : public torch::nn::Module {
 public:
  explicit FeatureExtractorImpl(const FrontendOptions &opts);
  // mixture: [2, L] or [B, 2, L]; outputs carry a batch axis.
  FrontendFeatures forward(const torch::Tensor &mixture);

  const FrontendOptions &options() const { return opts_; }

  ChannelEncoder encoder1{nullptr};
  ChannelEncoder encoder2{nullptr};

 private:
  FrontendOptions opts_;
};
TORCH_MODULE(FeatureExtractor);

}  // namespace sdnet::frontend

#endif  // SDNET_FRONTEND_FEATURE_EXTRACTOR_H_
