// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_SEPARATION_TCN_H_
#define SDNET_SEPARATION_TCN_H_

#include <cstdint>
#include <string>

#include <torch/torch.h>

namespace sdnet::separation {

// kChannel normalizes each frame over channels; kGlobal normalizes each
// utterance over (frame, channel).
enum class NormKind { kChannel, kGlobal };

struct SeparatorOptions {
  int input_dim = 512;       // width of F = [E1, E2]
  int bottleneck_dim = 256;  // width of F~, TCN_o and the source masks
  int hidden_dim = 512;
  int blocks = 4;
  int layers_per_block = 8;  // dilations 1, 2, ..., 2^(R-1)
  int kernel = 3;
  NormKind norm = NormKind::kChannel;
  int decoder_kernel = 40;
  int decoder_stride = 20;
  bool decoder_bias = false;

  // Frames of context on each side of an output frame.
  int64_t ReceptiveFieldPerSide() const;
};

NormKind ParseNormKind(const std::string &name);
std::string NormKindName(NormKind kind);

// Learned 1x1 convolution F [.., T, 512] -> F~ [.., T, 256].
class BottleneckImpl : public torch::nn::Module {
 public:
  BottleneckImpl(int input_dim, int output_dim);
  torch::Tensor forward(const torch::Tensor &features);

  torch::nn::Linear proj{nullptr};
};
TORCH_MODULE(Bottleneck);

class FeatureNormImpl : public torch::nn::Module {
 public:
  FeatureNormImpl(int channels, NormKind kind);
  // x: [B, C, T]
  torch::Tensor forward(const torch::Tensor &x);

  torch::Tensor gamma, beta;

 private:
  NormKind kind_;
};
TORCH_MODULE(FeatureNorm);

// 1x1 expand -> PReLU -> norm -> depth-wise dilated conv -> PReLU -> norm
// -> 1x1 project, added to the input.
class TcnLayerImpl : public torch::nn::Module {
 public:
  TcnLayerImpl(int channels, int hidden, int kernel, int dilation, NormKind norm);
  torch::Tensor forward(const torch::Tensor &x);  // [B, C, T]

  torch::nn::Conv1d expand{nullptr}, depthwise{nullptr}, project{nullptr};
  torch::nn::PReLU act1{nullptr}, act2{nullptr};
  FeatureNorm norm1{nullptr}, norm2{nullptr};
};
TORCH_MODULE(TcnLayer);

// Stack of blocks x layers_per_block residual layers followed by a 1x1
// convolution and a sigmoid. [.., T, C] -> [.., T, C] in (0, 1).
class TcnImpl : public torch::nn::Module {
 public:
  explicit TcnImpl(const SeparatorOptions &opts);
  torch::Tensor forward(const torch::Tensor &features);

  torch::nn::Sequential layers{nullptr};
  torch::nn::Conv1d output{nullptr};
};
TORCH_MODULE(Tcn);

// Z = F~ * TCN_o * sm with sm broadcast over frames. F~ and TCN_o are
// [T, C] or [B, T, C]; sm is [C] or one row per batch entry [B, C].
torch::Tensor ApplyMask(const torch::Tensor &bottleneck, const torch::Tensor &tcn_out,
                        const torch::Tensor &mask);

// Transposed 1-D convolution back to samples. [.., T, C] -> [.., (T-1)*stride + kernel].
class WaveformDecoderImpl : public torch::nn::Module {
 public:
  WaveformDecoderImpl(int channels, int kernel, int stride, bool bias);
  torch::Tensor forward(const torch::Tensor &features);
  int64_t OutputLength(int64_t frames) const;

  torch::nn::ConvTranspose1d deconv{nullptr};

 private:
  int kernel_, stride_;
};
TORCH_MODULE(WaveformDecoder);

}  // namespace sdnet::separation

#endif  // SDNET_SEPARATION_TCN_H_
