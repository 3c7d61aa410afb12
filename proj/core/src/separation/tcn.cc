// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/separation/tcn.h"

#include "sdnet/errors.h"

namespace sdnet::separation {

namespace nn = torch::nn;

int64_t SeparatorOptions::ReceptiveFieldPerSide() const {
  return static_cast<int64_t>(blocks) * ((int64_t{1} << layers_per_block) - 1) *
         (kernel - 1) / 2;
}

NormKind ParseNormKind(const std::string &name) {
  if (name == "cln" || name == "channel") return NormKind::kChannel;
  if (name == "gln" || name == "global") return NormKind::kGlobal;
  throw DomainError("unknown normalization '" + name + "' (expected cln or gln)");
}

std::string NormKindName(NormKind kind) {
  return kind == NormKind::kChannel ? "cln" : "gln";
}

BottleneckImpl::BottleneckImpl(int input_dim, int output_dim) {
  proj = register_module("proj", nn::Linear(input_dim, output_dim));
}

torch::Tensor BottleneckImpl::forward(const torch::Tensor &features) {
  return proj->forward(features);
}

FeatureNormImpl::FeatureNormImpl(int channels, NormKind kind) : kind_(kind) {
  gamma = register_parameter("gamma", torch::ones({1, channels, 1}));
  beta = register_parameter("beta", torch::zeros({1, channels, 1}));
}

torch::Tensor FeatureNormImpl::forward(const torch::Tensor &x) {
  constexpr double kEps = 1e-8;
  std::vector<int64_t> dims = kind_ == NormKind::kChannel ? std::vector<int64_t>{1}
                                                          : std::vector<int64_t>{1, 2};
  torch::Tensor mean = x.mean(dims, /*keepdim=*/true);
  torch::Tensor var = (x - mean).pow(2).mean(dims, /*keepdim=*/true);
  return gamma * (x - mean) / torch::sqrt(var + kEps) + beta;
}

TcnLayerImpl::TcnLayerImpl(int channels, int hidden, int kernel, int dilation,
                           NormKind norm) {
  if (kernel % 2 == 0) throw DomainError("TCN kernel width must be odd");
  expand = register_module("expand", nn::Conv1d(nn::Conv1dOptions(channels, hidden, 1)));
  act1 = register_module("act1", nn::PReLU());
  norm1 = register_module("norm1", FeatureNorm(hidden, norm));
  depthwise = register_module(
      "depthwise", nn::Conv1d(nn::Conv1dOptions(hidden, hidden, kernel)
                                  .groups(hidden)
                                  .dilation(dilation)
                                  .padding(dilation * (kernel - 1) / 2)));
  act2 = register_module("act2", nn::PReLU());
  norm2 = register_module("norm2", FeatureNorm(hidden, norm));
  project = register_module("project", nn::Conv1d(nn::Conv1dOptions(hidden, channels, 1)));
}

torch::Tensor TcnLayerImpl::forward(const torch::Tensor &x) {
  torch::Tensor y = norm1->forward(act1->forward(expand->forward(x)));
  y = norm2->forward(act2->forward(depthwise->forward(y)));
  return x + project->forward(y);
}

TcnImpl::TcnImpl(const SeparatorOptions &opts) {
  layers = register_module("layers", nn::Sequential());
  for (int b = 0; b < opts.blocks; ++b) {
    for (int r = 0; r < opts.layers_per_block; ++r) {
      layers->push_back(TcnLayer(opts.bottleneck_dim, opts.hidden_dim, opts.kernel, 1 << r,
                                 opts.norm));
    }
  }
  output = register_module(
      "output", nn::Conv1d(nn::Conv1dOptions(opts.bottleneck_dim, opts.bottleneck_dim, 1)));
}

torch::Tensor TcnImpl::forward(const torch::Tensor &features) {
  const bool batched = features.dim() == 3;
  if (!batched && features.dim() != 2) throw DomainError("Tcn: expected [T, C] or [B, T, C]");
  torch::Tensor x = (batched ? features : features.unsqueeze(0)).transpose(1, 2);
  x = layers->forward(x);
  x = torch::sigmoid(output->forward(x)).transpose(1, 2);
  return batched ? x : x.squeeze(0);
}

torch::Tensor ApplyMask(const torch::Tensor &bottleneck, const torch::Tensor &tcn_out,
                        const torch::Tensor &mask) {
  if (bottleneck.sizes() != tcn_out.sizes()) {
    throw DomainError("ApplyMask: F~ and TCN_o shapes differ");
  }
  if (mask.size(-1) != bottleneck.size(-1)) {
    throw DomainError("ApplyMask: mask width does not match feature width");
  }
  if (mask.dim() == 2) {
    if (bottleneck.dim() != 3 || mask.size(0) != bottleneck.size(0)) {
      throw DomainError("ApplyMask: one mask row per batch entry is required");
    }
    return bottleneck * tcn_out * mask.unsqueeze(1);
  }
  if (mask.dim() != 1) throw DomainError("ApplyMask: mask must be [C] or [B, C]");
  return bottleneck * tcn_out * mask;
}

WaveformDecoderImpl::WaveformDecoderImpl(int channels, int kernel, int stride, bool bias)
    : kernel_(kernel), stride_(stride) {
  deconv = register_module(
      "deconv", nn::ConvTranspose1d(
                    nn::ConvTranspose1dOptions(channels, 1, kernel).stride(stride).bias(bias)));
}

torch::Tensor WaveformDecoderImpl::forward(const torch::Tensor &features) {
  const bool batched = features.dim() == 3;
  if (!batched && features.dim() != 2) {
    throw DomainError("WaveformDecoder: expected [T, C] or [B, T, C]");
  }
  torch::Tensor x = (batched ? features : features.unsqueeze(0)).transpose(1, 2);
  torch::Tensor y = deconv->forward(x).squeeze(1);
  return batched ? y : y.squeeze(0);
}

int64_t WaveformDecoderImpl::OutputLength(int64_t frames) const {
  return (frames - 1) * stride_ + kernel_;
}

}  // namespace sdnet::separation
