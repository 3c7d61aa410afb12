// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/inference/inference_module.h"

#include <algorithm>

#include "sdnet/errors.h"

namespace sdnet::inference {

DecoderOptions InferenceOptions::SpeakerDecoder() const {
  DecoderOptions d;
  d.num_classes = n_speakers;
  d.embedding_dim = embedding_dim;
  d.context_dim = 2 * encoder_hidden;
  d.hidden = decoder_hidden;
  d.layers = decoder_layers;
  d.attention_dim = attention_dim;
  d.readout_dim = readout_dim;
  d.readout = readout;
  return d;
}

DecoderOptions InferenceOptions::DirectionDecoder() const {
  DecoderOptions d = SpeakerDecoder();
  d.num_classes = n_directions;
  return d;
}

InferenceModuleImpl::InferenceModuleImpl(const InferenceOptions &opts) : opts_(opts) {
  encoder = register_module(
      "encoder", ContextEncoder(opts.input_dim, opts.encoder_hidden, opts.encoder_layers));
  speaker_decoder = register_module("speaker_decoder", AttentiveDecoder(opts.SpeakerDecoder()));
  direction_decoder =
      register_module("direction_decoder", AttentiveDecoder(opts.DirectionDecoder()));
}

torch::Tensor InferenceModuleImpl::EncodeContext(const torch::Tensor &features) {
  return encoder->forward(features);
}

namespace {

torch::Tensor Batched(const torch::Tensor &h) {
  if (h.dim() == 2) return h.unsqueeze(0);
  if (h.dim() == 3) return h;
  throw DomainError("inference: context states must be [T, D] or [B, T, D]");
}

torch::Tensor TokenTensor(const std::vector<int64_t> &tokens) {
  return torch::tensor(tokens, torch::kLong);
}

}  // namespace

TeacherForcedOutput InferenceModuleImpl::TeacherForced(
    const torch::Tensor &h_in, const std::vector<std::vector<int>> &speakers,
    const std::vector<std::vector<int>> &directions, bool feed_labels) {
  const torch::Tensor h = Batched(h_in);
  const int64_t B = h.size(0);
  if (static_cast<int64_t>(speakers.size()) != B ||
      static_cast<int64_t>(directions.size()) != B) {
    throw DomainError("TeacherForced: one label sequence per batch row is required");
  }
  TeacherForcedOutput out;
  int64_t max_sources = 0;
  for (int64_t b = 0; b < B; ++b) {
    if (speakers[b].size() != directions[b].size()) {
      throw DomainError("TeacherForced: speaker and direction labels differ in length");
    }
    out.num_sources.push_back(static_cast<int64_t>(speakers[b].size()));
    max_sources = std::max(max_sources, out.num_sources.back());
  }
  const int64_t S = max_sources + 1;
  auto &spk = speaker_decoder;
  auto &dir = direction_decoder;
  const auto to = h.options();

  const torch::Tensor keys_s = spk->ProjectKeys(h), keys_d = dir->ProjectKeys(h);
  DecoderState state_s = spk->InitialState(B, to), state_d = dir->InitialState(B, to);
  torch::Tensor bos_s = spk->BosDistribution(B, to), bos_d = dir->BosDistribution(B, to);
  torch::Tensor e_s = spk->GlobalEmbedding(bos_s), e_d = dir->GlobalEmbedding(bos_d);

  std::vector<torch::Tensor> lp_s, lp_d, masks;
  for (int64_t t = 0; t < S; ++t) {
    AttentionOutput att_s = spk->Attend(state_s, h, keys_s);
    AttentionOutput att_d = dir->Attend(state_d, h, keys_d);
    DecoderStepOutput step_s = spk->Step(state_s, e_s, att_s.context);
    DecoderStepOutput step_d = dir->Step(state_d, e_d, att_d.context);
    lp_s.push_back(step_s.log_probs);
    lp_d.push_back(step_d.log_probs);
    state_s = std::move(step_s.state);
    state_d = std::move(step_d.state);
    if (t == S - 1) break;
    if (feed_labels) {
      std::vector<int64_t> ts(B), td(B);
      for (int64_t b = 0; b < B; ++b) {
        const bool in_range = t < out.num_sources[b];
        ts[b] = in_range ? speakers[b][t] : spk->vocab().eos();
        td[b] = in_range ? directions[b][t] : dir->vocab().eos();
      }
      e_s = spk->GlobalEmbedding(step_s.probs, TokenTensor(ts).to(h.device()));
      e_d = dir->GlobalEmbedding(step_d.probs, TokenTensor(td).to(h.device()));
    } else {
      e_s = spk->GlobalEmbedding(step_s.probs);
      e_d = dir->GlobalEmbedding(step_d.probs);
    }
    masks.push_back(e_s + e_d);
  }
  out.speaker_log_probs = torch::stack(lp_s, 1);
  out.direction_log_probs = torch::stack(lp_d, 1);
  out.masks = masks.empty() ? torch::zeros({B, 0, opts_.embedding_dim}, to)
                            : torch::stack(masks, 1);
  return out;
}

InferenceResult InferenceModuleImpl::TeacherForcedResult(const torch::Tensor &h,
                                                         const std::vector<int> &speakers,
                                                         const std::vector<int> &directions) {
  TeacherForcedOutput tf = TeacherForced(Batched(h), {speakers}, {directions}, true);
  InferenceResult result;
  const int64_t n = tf.num_sources[0];
  for (int64_t t = 0; t <= n; ++t) {
    InferenceStep step;
    step.speaker_probs = tf.speaker_log_probs[0][t].exp();
    step.direction_probs = tf.direction_log_probs[0][t].exp();
    step.speaker_token = t < n ? speakers[t] : speaker_decoder->vocab().eos();
    step.direction_token = t < n ? directions[t] : direction_decoder->vocab().eos();
    result.log_score += tf.speaker_log_probs[0][t][step.speaker_token].item<double>() +
                        tf.direction_log_probs[0][t][step.direction_token].item<double>();
    result.steps.push_back(step);
    if (t < n) result.masks.push_back({tf.masks[0][t], step.speaker_token, step.direction_token});
  }
  return result;
}

InferenceResult InferenceModuleImpl::Greedy(const torch::Tensor &h_in) {
  const torch::Tensor h = Batched(h_in);
  if (h.size(0) != 1) throw DomainError("Greedy: decodes one utterance at a time");
  auto &spk = speaker_decoder;
  auto &dir = direction_decoder;
  const auto to = h.options();
  const torch::Tensor keys_s = spk->ProjectKeys(h), keys_d = dir->ProjectKeys(h);
  DecoderState state_s = spk->InitialState(1, to), state_d = dir->InitialState(1, to);
  torch::Tensor e_s = spk->GlobalEmbedding(spk->BosDistribution(1, to));
  torch::Tensor e_d = dir->GlobalEmbedding(dir->BosDistribution(1, to));

  InferenceResult result;
  for (int t = 0; t < opts_.max_steps; ++t) {
    DecoderStepOutput step_s = spk->Step(state_s, e_s, spk->Attend(state_s, h, keys_s).context);
    DecoderStepOutput step_d = dir->Step(state_d, e_d, dir->Attend(state_d, h, keys_d).context);
    const int64_t a = step_s.log_probs[0].argmax().item<int64_t>();
    const int64_t b = step_d.log_probs[0].argmax().item<int64_t>();
    result.log_score = result.log_score + step_s.log_probs[0][a].item<double>() +
                       step_d.log_probs[0][b].item<double>();
    result.steps.push_back({step_s.probs[0], step_d.probs[0], static_cast<int>(a),
                            static_cast<int>(b)});
    if (a == spk->vocab().eos() || b == dir->vocab().eos()) return result;
    e_s = spk->GlobalEmbedding(step_s.probs, TokenTensor({a}).to(h.device()));
    e_d = dir->GlobalEmbedding(step_d.probs, TokenTensor({b}).to(h.device()));
    result.masks.push_back({(e_s + e_d)[0], static_cast<int>(a), static_cast<int>(b)});
    state_s = std::move(step_s.state);
    state_d = std::move(step_d.state);
  }
  result.truncated = true;
  return result;
}

}  // namespace sdnet::inference
