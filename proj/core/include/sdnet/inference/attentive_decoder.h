// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_INFERENCE_ATTENTIVE_DECODER_H_
#define SDNET_INFERENCE_ATTENTIVE_DECODER_H_

#include <cstdint>
#include <vector>

#include <torch/torch.h>

namespace sdnet::inference {

// Closed label set plus EOS and BOS. Class ids come first:
// [0, n) classes, n = EOS, n + 1 = BOS.
struct Vocabulary {
  int num_classes = 0;
  int eos() const { return num_classes; }
  int bos() const { return num_classes + 1; }
  int size() const { return num_classes + 2; }
};

enum class ReadoutActivation { kTanh, kRelu };

struct DecoderOptions {
  int num_classes = 101;
  int embedding_dim = 256;
  int context_dim = 512;
  int hidden = 512;
  int layers = 3;
  int attention_dim = 256;
  int readout_dim = 256;
  ReadoutActivation readout = ReadoutActivation::kTanh;
};

// Per-layer LSTM hidden and cell states, each [B, hidden].
struct DecoderState {
  std::vector<torch::Tensor> h;
  std::vector<torch::Tensor> c;

  const torch::Tensor &top() const { return h.back(); }
  // Rows `index` of every state tensor (beam reordering).
  DecoderState Select(const torch::Tensor &index) const;
};

struct AttentionOutput {
  torch::Tensor weights;  // [B, T]
  torch::Tensor context;  // [B, context_dim]
};

struct DecoderStepOutput {
  DecoderState state;
  torch::Tensor log_probs;  // [B, V]; BOS is -inf
  torch::Tensor probs;      // [B, V]
};

// One attentive recurrent decoder (speaker or direction stream).
class AttentiveDecoderImpl : public torch::nn::Module {
 public:
  explicit AttentiveDecoderImpl(const DecoderOptions &opts);

  const DecoderOptions &options() const { return opts_; }
  Vocabulary vocab() const { return {opts_.num_classes}; }

  DecoderState InitialState(int64_t batch, const torch::TensorOptions &to) const;
  // One-hot BOS rows: the "previous output" at the first step.
  torch::Tensor BosDistribution(int64_t batch, const torch::TensorOptions &to) const;

  // U1 h, computed once per utterance. h: [B, T, context_dim].
  torch::Tensor ProjectKeys(const torch::Tensor &h);
  // alpha = softmax_i(v^T tanh(W1 s_top + U1 h_i)); c = sum_i alpha_i h_i.
  AttentionOutput Attend(const DecoderState &state, const torch::Tensor &h,
                         const torch::Tensor &keys);
  AttentionOutput Attend(const DecoderState &state, const torch::Tensor &h);

  // e_a = y_prev @ E; e_t = E[tokens]; g = sigmoid(W2 e_t + U2 e_a);
  // returns g * e_t + (1 - g) * e_a. Throws DomainError when a row of y_prev
  // does not sum to one.
  torch::Tensor GlobalEmbedding(const torch::Tensor &y_prev,
                                const torch::Tensor &tokens);
  // Same with tokens = argmax(y_prev).
  torch::Tensor GlobalEmbedding(const torch::Tensor &y_prev);

  // s_t = LSTM(s_prev, [e_s; c]); y = softmax(W3 f(W4 s_t + W5 c)).
  DecoderStepOutput Step(const DecoderState &prev, const torch::Tensor &embedding,
                         const torch::Tensor &context);

  torch::nn::Embedding embedding{nullptr};
  torch::nn::Linear w1{nullptr}, u1{nullptr}, v{nullptr};
  torch::nn::Linear w2{nullptr}, u2{nullptr};
  torch::nn::Linear w3{nullptr}, w4{nullptr}, w5{nullptr};
  std::vector<torch::nn::LSTMCell> cells;

 private:
  DecoderOptions opts_;
};
TORCH_MODULE(AttentiveDecoder);

}  // namespace sdnet::inference

#endif  // SDNET_INFERENCE_ATTENTIVE_DECODER_H_
