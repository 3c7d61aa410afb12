// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Independent reference computations shared by the unit and acceptance suites.

#ifndef SDNET_TESTS_ORACLES_H_
#define SDNET_TESTS_ORACLES_H_

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "sdnet/frontend/feature_extractor.h"
#include "sdnet/inference/inference_module.h"
#include "sdnet/objectives/loss.h"
#include "sdnet/separation/model.h"
#include "test_util.h"

namespace sdnet::testing {

struct PairSequence {
  std::vector<std::pair<int, int>> tokens;  // includes the terminating pair
  double score = -std::numeric_limits<double>::infinity();
  bool truncated = false;
};

// Enumerates every (speaker, direction) token-pair sequence of at most
// max_steps steps, one decoder call per node, and returns the best finished
// sequence. A pair containing EOS ends a sequence; sequences reaching
// max_steps without EOS end truncated.
inline PairSequence ExhaustiveSearch(inference::InferenceModule &m, const torch::Tensor &h_in) {
  torch::NoGradGuard ng;
  const torch::Tensor h = h_in.dim() == 2 ? h_in.unsqueeze(0) : h_in;
  auto &spk = m->speaker_decoder;
  auto &dir = m->direction_decoder;
  const auto to = h.options();
  const int eos_s = spk->vocab().eos(), eos_d = dir->vocab().eos();
  const int bos_s = spk->vocab().bos(), bos_d = dir->vocab().bos();
  const int max_steps = m->options().max_steps;
  PairSequence best;

  struct Node {
    inference::DecoderState s, d;
    torch::Tensor e_s, e_d;
    double score;
    std::vector<std::pair<int, int>> tokens;
  };
  std::vector<Node> frontier;
  frontier.push_back({spk->InitialState(1, to), dir->InitialState(1, to),
                      spk->GlobalEmbedding(spk->BosDistribution(1, to)),
                      dir->GlobalEmbedding(dir->BosDistribution(1, to)), 0.0, {}});
  for (int t = 0; t < max_steps; ++t) {
    std::vector<Node> next;
    for (const Node &node : frontier) {
      auto os = spk->Step(node.s, node.e_s, spk->Attend(node.s, h).context);
      auto od = dir->Step(node.d, node.e_d, dir->Attend(node.d, h).context);
      for (int a = 0; a < spk->vocab().size(); ++a) {
        if (a == bos_s) continue;
        for (int b = 0; b < dir->vocab().size(); ++b) {
          if (b == bos_d) continue;
          const double score = node.score + os.log_probs[0][a].item<double>() +
                               od.log_probs[0][b].item<double>();
          auto tokens = node.tokens;
          tokens.emplace_back(a, b);
          const bool ends = a == eos_s || b == eos_d;
          if (ends || t + 1 == max_steps) {
            if (score > best.score) best = {tokens, score, !ends};
            continue;
          }
          next.push_back({os.state, od.state,
                          spk->GlobalEmbedding(os.probs, torch::tensor({int64_t{a}})),
                          dir->GlobalEmbedding(od.probs, torch::tensor({int64_t{b}})), score,
                          std::move(tokens)});
        }
      }
    }
    frontier = std::move(next);
  }
  return best;
}

inline std::vector<std::pair<int, int>> ResultTokens(const inference::InferenceResult &r) {
  std::vector<std::pair<int, int>> out;
  for (const auto &s : r.steps) out.emplace_back(s.speaker_token, s.direction_token);
  return out;
}

// Toy inference module: 1-layer stacks, `classes` labels per stream.
inline inference::InferenceOptions ToyInferenceOptions(int classes, int max_steps) {
  inference::InferenceOptions o;
  o.input_dim = 6;
  o.encoder_hidden = 4;
  o.encoder_layers = 1;
  o.decoder_hidden = 6;
  o.decoder_layers = 1;
  o.embedding_dim = 5;
  o.attention_dim = 4;
  o.readout_dim = 5;
  o.n_speakers = classes;
  o.n_directions = classes;
  o.max_steps = max_steps;
  return o;
}

// Scales every parameter so that decisions are not near-ties.
inline void Sharpen(torch::nn::Module &m, double gain) {
  torch::NoGradGuard ng;
  for (auto &p : m.parameters()) p.mul_(gain);
}

struct BeamCaseOutcome {
  bool beam_matches_exhaustive = false;
  bool width1_matches_greedy = false;
};

// Frozen toy model (3 classes, vocab 5 per stream, 2 steps) drawn from `seed`.
inline BeamCaseOutcome RunBeamOracleCase(uint64_t seed, int wide_width = 25) {
  torch::manual_seed(seed);
  inference::InferenceModule m(ToyInferenceOptions(3, 2));
  m->to(torch::kDouble);
  Sharpen(*m, 1.0 + static_cast<double>(seed % 4));
  torch::NoGradGuard ng;
  const torch::Tensor h = m->EncodeContext(torch::randn({1, 6, 6}, torch::kDouble));
  const PairSequence best = ExhaustiveSearch(m, h);
  const auto beam = m->BeamSearch(h, wide_width);
  const auto beam1 = m->BeamSearch(h, 1);
  const auto greedy = m->Greedy(h);
  BeamCaseOutcome out;
  out.beam_matches_exhaustive = ResultTokens(beam) == best.tokens &&
                                std::abs(beam.log_score - best.score) < 1e-9 &&
                                beam.truncated == best.truncated;
  out.width1_matches_greedy = ResultTokens(beam1) == ResultTokens(greedy) &&
                              std::abs(beam1.log_score - greedy.log_score) < 1e-12 &&
                              beam1.truncated == greedy.truncated;
  return out;
}

// (a) Frontend with IAC: scalar functional of F_o w.r.t. both encoders.
inline GradCheckResult FrontendGradCheck(uint64_t seed) {
  torch::manual_seed(seed);
  frontend::FrontendOptions opts;
  opts.channels = 6;
  opts.kernel = 8;
  opts.stride = 4;
  frontend::FeatureExtractor fe(opts);
  fe->to(torch::kDouble);
  const torch::Tensor mix = 0.5 * torch::randn({1, 2, 36}, torch::kDouble);  // T = 8
  const torch::Tensor probe = torch::randn({1, 8, 18}, torch::kDouble);
  auto loss = [&] {
    auto f = fe->forward(mix);
    return (f.inference_input * probe).sum() + f.inference_input.pow(2).sum() * 0.1;
  };
  return GradCheck(loss, fe->parameters(), 24);
}

// (b) Inference: CE through BLSTM, attention, global embedding and decoders.
inline GradCheckResult InferenceGradCheck(uint64_t seed) {
  torch::manual_seed(seed);
  inference::InferenceModule m(ToyInferenceOptions(3, 4));  // vocab 5 per stream
  m->to(torch::kDouble);
  const torch::Tensor fo = torch::randn({1, 6, 6}, torch::kDouble);  // T = 6
  const std::vector<std::vector<int>> spk{{2, 0}}, dir{{1, 2}};
  auto loss = [&] {
    torch::Tensor h = m->EncodeContext(fo);
    auto tf = m->TeacherForced(h, spk, dir);
    const int es = m->speaker_decoder->vocab().eos(), ed = m->direction_decoder->vocab().eos();
    return objectives::SequenceCeTensor(tf.speaker_log_probs[0], {2, 0, es}) +
           objectives::SequenceCeTensor(tf.direction_log_probs[0], {1, 2, ed}) +
           tf.masks.pow(2).sum() * 0.05;
  };
  return GradCheck(loss, m->parameters(), 12);
}

inline separation::ModelOptions MicroModelOptions() {
  separation::ModelOptions o;
  o.frontend.channels = 8;
  o.frontend.kernel = 8;
  o.frontend.stride = 4;
  o.inference = ToyInferenceOptions(3, 4);
  o.inference.input_dim = 24;
  o.inference.embedding_dim = 6;
  o.separator.input_dim = 16;
  o.separator.bottleneck_dim = 6;
  o.separator.hidden_dim = 8;
  o.separator.blocks = 1;
  o.separator.layers_per_block = 2;
  o.separator.decoder_kernel = 8;
  o.separator.decoder_stride = 4;
  return o;
}

// (c) Micro-model (8-channel encoder, 1 block, R = 2) with the full loss.
inline GradCheckResult MicroModelGradCheck(uint64_t seed) {
  torch::manual_seed(seed);
  separation::SdnetModel model(MicroModelOptions());
  model->to(torch::kDouble);
  const torch::Tensor mix = 0.5 * torch::randn({2, 2, 44}, torch::kDouble);  // T = 10
  const std::vector<std::vector<int>> spk{{1, 0}, {2, 1, 0}}, dir{{0, 2}, {1, 0, 2}};
  const torch::Tensor targets = torch::randn({5, 44}, torch::kDouble);
  auto loss = [&] {
    auto out = model->ForwardTeacherForced(mix, spk, dir);
    auto &inf = model->inference;
    return objectives::TotalLoss(out.separated, targets, out.inference.speaker_log_probs,
                                 out.inference.direction_log_probs, spk, dir,
                                 inf->speaker_decoder->vocab().eos(),
                                 inf->direction_decoder->vocab().eos(), 5.0, 30.0)
        .total;
  };
  return GradCheck(loss, model->parameters(), 6);
}

}  // namespace sdnet::testing

#endif  // SDNET_TESTS_ORACLES_H_
