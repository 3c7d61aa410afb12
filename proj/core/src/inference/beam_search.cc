// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <limits>
#include <tuple>

#include "sdnet/errors.h"
#include "sdnet/inference/inference_module.h"

namespace sdnet::inference {

namespace {

struct Hypothesis {
  double score = 0.0;
  std::vector<InferenceStep> steps;
  std::vector<SourceMask> masks;
  bool truncated = false;
};

struct Candidate {
  double score;
  int64_t parent;
  int64_t spk;
  int64_t dir;
};

// Indices of the k most probable tokens of one row, most probable first.
std::vector<int64_t> TopTokens(const torch::Tensor &log_probs_row, int64_t k) {
  auto idx = std::get<1>(log_probs_row.topk(k, -1, true, true));
  std::vector<int64_t> out(k);
  for (int64_t i = 0; i < k; ++i) out[i] = idx[i].item<int64_t>();
  return out;
}

}  // namespace

InferenceResult InferenceModuleImpl::BeamSearch(const torch::Tensor &h_in, int width) {
  if (width < 1) throw DomainError("BeamSearch: width must be >= 1");
  torch::Tensor h = h_in.dim() == 2 ? h_in.unsqueeze(0) : h_in;
  if (h.dim() != 3 || h.size(0) != 1) {
    throw DomainError("BeamSearch: decodes one utterance at a time");
  }
  auto &spk = speaker_decoder;
  auto &dir = direction_decoder;
  const auto to = h.options();
  const int eos_s = spk->vocab().eos(), eos_d = dir->vocab().eos();
  // BOS carries -inf and is never proposed.
  const int64_t k_s = std::min<int64_t>(width, spk->vocab().size() - 1);
  const int64_t k_d = std::min<int64_t>(width, dir->vocab().size() - 1);

  const torch::Tensor keys_s1 = spk->ProjectKeys(h), keys_d1 = dir->ProjectKeys(h);
  DecoderState state_s = spk->InitialState(1, to), state_d = dir->InitialState(1, to);
  torch::Tensor e_s = spk->GlobalEmbedding(spk->BosDistribution(1, to));
  torch::Tensor e_d = dir->GlobalEmbedding(dir->BosDistribution(1, to));
  std::vector<Hypothesis> live(1), finished;

  for (int t = 0; t < opts_.max_steps && !live.empty(); ++t) {
    const int64_t n = static_cast<int64_t>(live.size());
    const torch::Tensor hn = h.expand({n, h.size(1), h.size(2)});
    const torch::Tensor keys_s = keys_s1.expand({n, -1, -1});
    const torch::Tensor keys_d = keys_d1.expand({n, -1, -1});
    DecoderStepOutput step_s = spk->Step(state_s, e_s, spk->Attend(state_s, hn, keys_s).context);
    DecoderStepOutput step_d = dir->Step(state_d, e_d, dir->Attend(state_d, hn, keys_d).context);
    const torch::Tensor lp_s = step_s.log_probs.to(torch::kDouble).cpu();
    const torch::Tensor lp_d = step_d.log_probs.to(torch::kDouble).cpu();
    auto acc_s = lp_s.accessor<double, 2>();
    auto acc_d = lp_d.accessor<double, 2>();

    std::vector<Candidate> cands;
    for (int64_t i = 0; i < n; ++i) {
      const std::vector<int64_t> top_s = TopTokens(lp_s[i], k_s);
      const std::vector<int64_t> top_d = TopTokens(lp_d[i], k_d);
      for (int64_t a : top_s) {
        for (int64_t b : top_d) {
          cands.push_back({live[i].score + acc_s[i][a] + acc_d[i][b], i, a, b});
        }
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate &x, const Candidate &y) {
      if (x.score != y.score) return x.score > y.score;
      return std::tie(x.parent, x.spk, x.dir) < std::tie(y.parent, y.spk, y.dir);
    });
    if (static_cast<int64_t>(cands.size()) > width) cands.resize(width);

    std::vector<Hypothesis> next;
    std::vector<int64_t> parents, tok_s, tok_d;
    for (const Candidate &cand : cands) {
      Hypothesis hyp;
      hyp.score = cand.score;
      hyp.steps = live[cand.parent].steps;
      hyp.masks = live[cand.parent].masks;
      hyp.steps.push_back({step_s.probs[cand.parent], step_d.probs[cand.parent],
                           static_cast<int>(cand.spk), static_cast<int>(cand.dir)});
      if (cand.spk == eos_s || cand.dir == eos_d) {
        finished.push_back(std::move(hyp));
        continue;
      }
      parents.push_back(cand.parent);
      tok_s.push_back(cand.spk);
      tok_d.push_back(cand.dir);
      next.push_back(std::move(hyp));
    }
    if (next.empty()) {
      live.clear();
      break;
    }

    const torch::Tensor index = torch::tensor(parents, torch::kLong).to(h.device());
    e_s = spk->GlobalEmbedding(step_s.probs.index_select(0, index),
                               torch::tensor(tok_s, torch::kLong).to(h.device()));
    e_d = dir->GlobalEmbedding(step_d.probs.index_select(0, index),
                               torch::tensor(tok_d, torch::kLong).to(h.device()));
    const torch::Tensor masks = e_s + e_d;
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j].masks.push_back({masks[static_cast<int64_t>(j)], static_cast<int>(tok_s[j]),
                               static_cast<int>(tok_d[j])});
    }
    if (t == opts_.max_steps - 1) {
      for (auto &hyp : next) {
        hyp.truncated = true;
        finished.push_back(std::move(hyp));
      }
      live.clear();
      break;
    }
    state_s = step_s.state.Select(index);
    state_d = step_d.state.Select(index);
    live = std::move(next);

    // Scores only decrease, so a live hypothesis can no longer win.
    double best_finished = -std::numeric_limits<double>::infinity();
    for (const auto &f : finished) best_finished = std::max(best_finished, f.score);
    if (best_finished >= live.front().score) break;
  }

  const auto best = std::max_element(
      finished.begin(), finished.end(),
      [](const Hypothesis &a, const Hypothesis &b) { return a.score < b.score; });
  InferenceResult result;
  result.steps = std::move(best->steps);
  result.masks = std::move(best->masks);
  result.log_score = best->score;
  result.truncated = best->truncated;
  return result;
}

}  // namespace sdnet::inference
