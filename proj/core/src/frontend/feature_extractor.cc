// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/frontend/feature_extractor.h"

#include <cmath>
#include <string>

#include "sdnet/errors.h"

namespace sdnet::frontend {

int64_t NumFrames(int64_t num_samples, int kernel, int stride) {
  if (num_samples < kernel) {
    throw DomainError("input of " + std::to_string(num_samples) +
                      " samples is shorter than one frame (" +
                      std::to_string(kernel) + ")");
  }
  return (num_samples - kernel) / stride + 1;
}

ChannelEncoderImpl::ChannelEncoderImpl(const FrontendOptions &opts) : opts_(opts) {
  conv = register_module(
      "conv", torch::nn::Conv1d(torch::nn::Conv1dOptions(1, opts.channels, opts.kernel)
                                    .stride(opts.stride)
                                    .bias(opts.bias)));
}

torch::Tensor ChannelEncoderImpl::forward(const torch::Tensor &waveform) {
  if (waveform.dim() != 1 && waveform.dim() != 2) {
    throw DomainError("ChannelEncoder: expected [L] or [B, L] waveform");
  }
  NumFrames(waveform.size(-1), opts_.kernel, opts_.stride);
  const bool batched = waveform.dim() == 2;
  torch::Tensor x = batched ? waveform.unsqueeze(1) : waveform.view({1, 1, -1});
  torch::Tensor y = conv->forward(x);  // [B, C, T]
  if (opts_.activation == EncoderActivation::kRelu) y = torch::relu(y);
  y = y.transpose(1, 2);
  return batched ? y : y.squeeze(0);
}

InterChannelAttention ComputeInterChannelAttention(const torch::Tensor &e1,
                                                   const torch::Tensor &e2,
                                                   bool scaled) {
  if (e1.sizes() != e2.sizes() || e1.dim() < 2) {
    throw DomainError("InterChannelAttention: E1 and E2 must have equal [.., T, C] shapes");
  }
  torch::Tensor scores = torch::matmul(e1, e2.transpose(-1, -2));
  if (scaled) scores = scores / std::sqrt(static_cast<double>(e1.size(-1)));
  InterChannelAttention out;
  out.attention = torch::softmax(scores, -1);
  out.features = torch::matmul(out.attention, e2);
  return out;
}

std::pair<torch::Tensor, torch::Tensor> AssembleFeatures(const torch::Tensor &e1,
                                                         const torch::Tensor &e2,
                                                         const torch::Tensor &iac) {
  if (e1.dim() < 2 || e1.sizes() != e2.sizes() || iac.dim() != e1.dim() ||
      iac.size(-2) != e1.size(-2)) {
    throw DomainError("AssembleFeatures: frame counts or ranks differ");
  }
  return {torch::cat({e1, e2}, -1), torch::cat({iac, e1, e2}, -1)};
}

FeatureExtractorImpl::FeatureExtractorImpl(const FrontendOptions &opts) : opts_(opts) {
  encoder1 = register_module("encoder1", ChannelEncoder(opts));
  encoder2 = register_module("encoder2", ChannelEncoder(opts));
}

FrontendFeatures FeatureExtractorImpl::forward(const torch::Tensor &mixture) {
  torch::Tensor x = mixture.dim() == 2 ? mixture.unsqueeze(0) : mixture;
  if (x.dim() != 3 || x.size(1) != 2) {
    throw DomainError("FeatureExtractor: expected a [B, 2, L] stereo mixture");
  }
  FrontendFeatures f;
  f.e1 = encoder1->forward(x.select(1, 0));
  f.e2 = encoder2->forward(x.select(1, 1));
  if (opts_.use_iac) {
    InterChannelAttention iac = ComputeInterChannelAttention(f.e1, f.e2, opts_.iac_scaled);
    f.attention = iac.attention;
    f.iac = iac.features;
  } else {
    f.iac = torch::zeros_like(f.e1);
  }
  std::tie(f.separation_input, f.inference_input) = AssembleFeatures(f.e1, f.e2, f.iac);
  return f;
}

}  // namespace sdnet::frontend
