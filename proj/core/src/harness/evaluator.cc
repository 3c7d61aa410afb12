// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/harness/evaluator.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sdnet/errors.h"
#include "sdnet/harness/plot.h"
#include "sdnet/objectives/metrics.h"

namespace sdnet::harness {

namespace {

std::vector<double> Row(const torch::Tensor &t) {
  torch::Tensor d = t.to(torch::kDouble).contiguous();
  return std::vector<double>(d.data_ptr<double>(), d.data_ptr<double>() + d.numel());
}

double Mean(const std::vector<double> &v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

}  // namespace

ExampleRecord ScoreExample(const Example &example,
                           const std::vector<std::vector<double>> &estimates,
                           bool compute_sdr) {
  using objectives::kEvalClampDb;
  ExampleRecord rec;
  rec.example_id = example.id;
  rec.n_true = example.NumSources();
  rec.n_pred = static_cast<int>(estimates.size());
  const std::vector<double> mix = Row(example.mixture[0]);
  std::vector<std::vector<double>> refs;
  for (int i = 0; i < rec.n_true; ++i) refs.push_back(Row(example.targets[i]));

  // Positional pairing: estimate i scores against energy-sorted reference i.
  for (int i = 0; i < rec.n_true; ++i) {
    rec.assignment.push_back(i < rec.n_pred ? i : -1);
    if (i < rec.n_pred && estimates[i].size() != refs[i].size()) {
      throw DomainError("ScoreExample: estimate length differs from reference");
    }
  }
  for (int i = 0; i < rec.n_true; ++i) {
    const int j = rec.assignment[i];
    rec.source_sisnri.push_back(
        j >= 0 ? objectives::Improvement(
                     [](auto e, auto r) { return objectives::Sisnr(e, r, kEvalClampDb); },
                     estimates[j], refs[i], mix)
               : 0.0);
    if (compute_sdr) {
      rec.source_sdri.push_back(j >= 0 ? objectives::Improvement(
                                             [](auto e, auto r) { return objectives::Sdr(e, r); },
                                             estimates[j], refs[i], mix)
                                       : 0.0);
    }
  }
  rec.sisnri = Mean(rec.source_sisnri);
  rec.sdri = Mean(rec.source_sdri);
  return rec;
}

EvalReport Evaluate(separation::SdnetModel &model, const Dataset &data,
                    const EvalOptions &options) {
  const bool was_training = model->is_training();
  model->eval();
  const auto dtype = model->parameters().front().scalar_type();
  EvalReport report;
  std::vector<int> pred_counts, true_counts;
  for (const Example &ex : data.examples()) {
    std::optional<separation::OracleLabels> labels;
    if (options.mode == inference::DecodeMode::kTeacherForced) {
      labels = separation::OracleLabels{ex.speakers, ex.directions};
    }
    separation::SeparationOutput out = separation::Separate(
        model, ex.mixture.to(dtype), options.mode, options.beam_width, labels);
    std::vector<std::vector<double>> estimates;
    for (auto &s : out.sources) estimates.push_back(std::move(s.waveform));
    ExampleRecord rec = ScoreExample(ex, estimates, options.compute_sdr);
    for (const auto &m : out.inference.masks) {
      rec.speaker_tokens.push_back(m.speaker_token);
      rec.direction_tokens.push_back(m.direction_token);
    }
    rec.log_score = out.inference.log_score;
    rec.truncated = out.inference.truncated;
    pred_counts.push_back(rec.n_pred);
    true_counts.push_back(rec.n_true);
    report.records.push_back(std::move(rec));
  }
  model->train(was_training);
  std::vector<double> si, sd;
  for (const auto &r : report.records) {
    si.push_back(r.sisnri);
    sd.push_back(r.sdri);
  }
  report.mean_sisnri = Mean(si);
  report.mean_sdri = Mean(sd);
  report.count_accuracy = objectives::CountAccuracy(pred_counts, true_counts);
  return report;
}

void WriteReport(const EvalReport &report, const std::filesystem::path &out_dir) {
  std::ostringstream jsonl;
  for (const auto &r : report.records) {
    nlohmann::json j = {{"example_id", r.example_id},
                        {"n_true", r.n_true},
                        {"n_pred", r.n_pred},
                        {"sisnri", r.sisnri},
                        {"sdri", r.sdri},
                        {"source_sisnri", r.source_sisnri},
                        {"source_sdri", r.source_sdri},
                        {"assignment", r.assignment},
                        {"speaker_tokens", r.speaker_tokens},
                        {"direction_tokens", r.direction_tokens},
                        {"log_score", r.log_score},
                        {"truncated", r.truncated}};
    jsonl << j.dump() << "\n";
  }
  WriteText(out_dir / "per_example.jsonl", jsonl.str());

  std::ostringstream csv;
  csv << "examples,mean_sisnri_db,mean_sdri_db,count_accuracy\n"
      << report.records.size() << "," << report.mean_sisnri << "," << report.mean_sdri << ","
      << report.count_accuracy << "\n";
  WriteText(out_dir / "summary.csv", csv.str());

  std::vector<double> si;
  std::map<int, std::pair<int, int>> by_count;  // n_true -> (correct, total)
  for (const auto &r : report.records) {
    si.push_back(r.sisnri);
    auto &c = by_count[r.n_true];
    c.first += r.n_pred == r.n_true;
    c.second += 1;
  }
  WriteText(out_dir / "sisnri_hist.svg",
            HistogramSvg({"SI-SNR improvement per example", "SI-SNRi (dB)", "examples"}, si));
  std::vector<std::string> cats;
  std::vector<double> acc;
  for (const auto &[n, c] : by_count) {
    cats.push_back(std::to_string(n) + " sources");
    acc.push_back(static_cast<double>(c.first) / c.second);
  }
  WriteText(out_dir / "count_accuracy.svg",
            BarChartSvg({"Source count accuracy", "reference count", "accuracy"}, cats, acc));
}

}  // namespace sdnet::harness
