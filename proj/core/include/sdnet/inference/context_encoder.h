// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_INFERENCE_CONTEXT_ENCODER_H_
#define SDNET_INFERENCE_CONTEXT_ENCODER_H_

#include <torch/torch.h>

namespace sdnet::inference {

// Stacked bidirectional LSTM over F_o. [T, D] or [B, T, D] -> [.., T, 2H].
class ContextEncoderImpl : public torch::nn::Module {
 public:
  ContextEncoderImpl(int input_dim, int hidden, int layers);
  torch::Tensor forward(const torch::Tensor &features);

  int output_dim() const { return 2 * hidden_; }

  torch::nn::LSTM blstm{nullptr};

 private:
  int hidden_;
};
TORCH_MODULE(ContextEncoder);

}  // namespace sdnet::inference

#endif  // SDNET_INFERENCE_CONTEXT_ENCODER_H_
