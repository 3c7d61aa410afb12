// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/inference/context_encoder.h"

#include "sdnet/errors.h"

namespace sdnet::inference {

ContextEncoderImpl::ContextEncoderImpl(int input_dim, int hidden, int layers)
    : hidden_(hidden) {
  blstm = register_module(
      "blstm", torch::nn::LSTM(torch::nn::LSTMOptions(input_dim, hidden)
                                   .num_layers(layers)
                                   .bidirectional(true)
                                   .batch_first(true)));
}

torch::Tensor ContextEncoderImpl::forward(const torch::Tensor &features) {
  if (features.dim() != 2 && features.dim() != 3) {
    throw DomainError("ContextEncoder: expected [T, D] or [B, T, D]");
  }
  if (features.size(-2) == 0) throw DomainError("ContextEncoder: empty input");
  const bool batched = features.dim() == 3;
  torch::Tensor x = batched ? features : features.unsqueeze(0);
  torch::Tensor h = std::get<0>(blstm->forward(x));
  return batched ? h : h.squeeze(0);
}

}  // namespace sdnet::inference
