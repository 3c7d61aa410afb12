// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_INFERENCE_INFERENCE_MODULE_H_
#define SDNET_INFERENCE_INFERENCE_MODULE_H_

#include <cstdint>
#include <vector>

#include <torch/torch.h>

#include "sdnet/inference/attentive_decoder.h"
#include "sdnet/inference/context_encoder.h"

namespace sdnet::inference {

struct InferenceOptions {
  int input_dim = 768;
  int encoder_hidden = 256;
  int encoder_layers = 3;
  int decoder_hidden = 512;
  int decoder_layers = 3;
  int embedding_dim = 256;
  int attention_dim = 256;
  int readout_dim = 256;
  ReadoutActivation readout = ReadoutActivation::kTanh;
  int n_speakers = 101;
  int n_directions = 37;
  int max_steps = 5;

  DecoderOptions SpeakerDecoder() const;
  DecoderOptions DirectionDecoder() const;
};

// Per-source mask: speaker embedding plus direction embedding.
struct SourceMask {
  torch::Tensor sm;  // [embedding_dim]
  int speaker_token = 0;
  int direction_token = 0;
};

struct InferenceStep {
  torch::Tensor speaker_probs;    // [V_spk]
  torch::Tensor direction_probs;  // [V_dir]
  int speaker_token = 0;
  int direction_token = 0;
};

// Decoded steps (the terminating EOS step included, when reached) and one
// mask per non-EOS step.
struct InferenceResult {
  std::vector<InferenceStep> steps;
  std::vector<SourceMask> masks;
  double log_score = 0.0;
  // Hit max_steps without either stream emitting EOS.
  bool truncated = false;

  int NumSources() const { return static_cast<int>(masks.size()); }
};

// Batched teacher-forced decoding. S = max label count + 1 (EOS step).
struct TeacherForcedOutput {
  torch::Tensor speaker_log_probs;    // [B, S, V_spk]
  torch::Tensor direction_log_probs;  // [B, S, V_dir]
  torch::Tensor masks;                // [B, S - 1, E]; row t valid for t < n_b
  std::vector<int64_t> num_sources;   // n_b
};

class InferenceModuleImpl : public torch::nn::Module {
 public:
  explicit InferenceModuleImpl(const InferenceOptions &opts);

  const InferenceOptions &options() const { return opts_; }

  // h = BLSTM(F_o). Throws DomainError on an empty sequence.
  torch::Tensor EncodeContext(const torch::Tensor &features);

  // Runs both decoders for len(labels) + 1 steps. The global embedding sees
  // the decoders' own distributions; with feed_labels the argmax token is
  // replaced by the reference label (oracle ablation).
  TeacherForcedOutput TeacherForced(const torch::Tensor &h,
                                    const std::vector<std::vector<int>> &speakers,
                                    const std::vector<std::vector<int>> &directions,
                                    bool feed_labels = false);

  // Single-utterance decoders. h: [T, D] or [1, T, D].
  InferenceResult Greedy(const torch::Tensor &h);
  // Oracle decoding: the reference tokens drive the global embedding.
  InferenceResult TeacherForcedResult(const torch::Tensor &h,
                                      const std::vector<int> &speakers,
                                      const std::vector<int> &directions);
  // Joint beam over (speaker, direction) token pairs; score is the sum of
  // both streams' log-probabilities. width == 1 reproduces Greedy.
  InferenceResult BeamSearch(const torch::Tensor &h, int width);

  ContextEncoder encoder{nullptr};
  AttentiveDecoder speaker_decoder{nullptr};
  AttentiveDecoder direction_decoder{nullptr};

 private:
  InferenceOptions opts_;
};
TORCH_MODULE(InferenceModule);

enum class DecodeMode { kGreedy, kTeacherForced, kBeam };

}  // namespace sdnet::inference

#endif  // SDNET_INFERENCE_INFERENCE_MODULE_H_
