// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/inference/attentive_decoder.h"

#include <limits>
#include <string>

#include "sdnet/errors.h"

namespace sdnet::inference {

namespace nn = torch::nn;

DecoderState DecoderState::Select(const torch::Tensor &index) const {
  DecoderState out;
  for (const auto &t : h) out.h.push_back(t.index_select(0, index));
  for (const auto &t : c) out.c.push_back(t.index_select(0, index));
  return out;
}

AttentiveDecoderImpl::AttentiveDecoderImpl(const DecoderOptions &opts) : opts_(opts) {
  const int V = vocab().size(), E = opts.embedding_dim, D = opts.context_dim,
            H = opts.hidden, A = opts.attention_dim, R = opts.readout_dim;
  embedding = register_module("embedding", nn::Embedding(V, E));
  w1 = register_module("w1", nn::Linear(nn::LinearOptions(H, A).bias(false)));
  u1 = register_module("u1", nn::Linear(D, A));
  v = register_module("v", nn::Linear(nn::LinearOptions(A, 1).bias(false)));
  w2 = register_module("w2", nn::Linear(E, E));
  u2 = register_module("u2", nn::Linear(nn::LinearOptions(E, E).bias(false)));
  w4 = register_module("w4", nn::Linear(H, R));
  w5 = register_module("w5", nn::Linear(nn::LinearOptions(D, R).bias(false)));
  w3 = register_module("w3", nn::Linear(R, V));
  for (int l = 0; l < opts.layers; ++l) {
    cells.push_back(register_module("cell" + std::to_string(l),
                                    nn::LSTMCell(l == 0 ? E + D : H, H)));
  }
}

DecoderState AttentiveDecoderImpl::InitialState(int64_t batch,
                                                const torch::TensorOptions &to) const {
  DecoderState s;
  for (int l = 0; l < opts_.layers; ++l) {
    s.h.push_back(torch::zeros({batch, opts_.hidden}, to));
    s.c.push_back(torch::zeros({batch, opts_.hidden}, to));
  }
  return s;
}

torch::Tensor AttentiveDecoderImpl::BosDistribution(int64_t batch,
                                                    const torch::TensorOptions &to) const {
  torch::Tensor y = torch::zeros({batch, vocab().size()}, to);
  y.select(1, vocab().bos()).fill_(1.0);
  return y;
}

torch::Tensor AttentiveDecoderImpl::ProjectKeys(const torch::Tensor &h) {
  return u1->forward(h);
}

AttentionOutput AttentiveDecoderImpl::Attend(const DecoderState &state,
                                             const torch::Tensor &h,
                                             const torch::Tensor &keys) {
  torch::Tensor scores =
      v->forward(torch::tanh(w1->forward(state.top()).unsqueeze(1) + keys)).squeeze(-1);
  AttentionOutput out;
  out.weights = torch::softmax(scores, -1);
  out.context = torch::bmm(out.weights.unsqueeze(1), h).squeeze(1);
  return out;
}

AttentionOutput AttentiveDecoderImpl::Attend(const DecoderState &state,
                                             const torch::Tensor &h) {
  return Attend(state, h, ProjectKeys(h));
}

torch::Tensor AttentiveDecoderImpl::GlobalEmbedding(const torch::Tensor &y_prev,
                                                    const torch::Tensor &tokens) {
  if (y_prev.dim() != 2 || y_prev.size(1) != vocab().size()) {
    throw DomainError("GlobalEmbedding: y_prev must be [B, " +
                      std::to_string(vocab().size()) + "]");
  }
  const double deviation = (y_prev.detach().sum(-1) - 1.0).abs().max().item<double>();
  if (deviation > 1e-4) {
    throw DomainError("GlobalEmbedding: y_prev rows must sum to one (off by " +
                      std::to_string(deviation) + ")");
  }
  torch::Tensor averaged = torch::matmul(y_prev, embedding->weight);
  torch::Tensor picked = embedding->forward(tokens);
  torch::Tensor gate = torch::sigmoid(w2->forward(picked) + u2->forward(averaged));
  return gate * picked + (1.0 - gate) * averaged;
}

torch::Tensor AttentiveDecoderImpl::GlobalEmbedding(const torch::Tensor &y_prev) {
  return GlobalEmbedding(y_prev, y_prev.detach().argmax(-1));
}

DecoderStepOutput AttentiveDecoderImpl::Step(const DecoderState &prev,
                                             const torch::Tensor &embedding_in,
                                             const torch::Tensor &context) {
  DecoderStepOutput out;
  torch::Tensor x = torch::cat({embedding_in, context}, -1);
  for (int l = 0; l < opts_.layers; ++l) {
    auto [h, c] = cells[l]->forward(x, std::make_tuple(prev.h[l], prev.c[l]));
    out.state.h.push_back(h);
    out.state.c.push_back(c);
    x = h;
  }
  torch::Tensor pre = w4->forward(out.state.top()) + w5->forward(context);
  pre = opts_.readout == ReadoutActivation::kTanh ? torch::tanh(pre) : torch::relu(pre);
  torch::Tensor logits = w3->forward(pre).index_fill(
      1, torch::tensor({static_cast<int64_t>(vocab().bos())}, torch::kLong),
      -std::numeric_limits<double>::infinity());
  out.log_probs = torch::log_softmax(logits, -1);
  out.probs = out.log_probs.exp();
  return out;
}

}  // namespace sdnet::inference
