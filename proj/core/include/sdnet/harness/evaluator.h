// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_HARNESS_EVALUATOR_H_
#define SDNET_HARNESS_EVALUATOR_H_

#include <filesystem>
#include <string>
#include <vector>

#include "sdnet/harness/dataset.h"
#include "sdnet/inference/inference_module.h"
#include "sdnet/separation/model.h"

namespace sdnet::harness {

struct EvalOptions {
  inference::DecodeMode mode = inference::DecodeMode::kBeam;
  int beam_width = 3;
  bool compute_sdr = true;
};

struct ExampleRecord {
  std::string example_id;
  int n_true = 0;
  int n_pred = 0;
  // Means over reference sources; a reference left without an estimate
  // scores 0 dB (the mixture itself).
  double sisnri = 0.0;
  double sdri = 0.0;
  std::vector<double> source_sisnri;
  std::vector<double> source_sdri;
  std::vector<int> assignment;  // estimate index per reference, -1 if none
  std::vector<int> speaker_tokens;
  std::vector<int> direction_tokens;
  double log_score = 0.0;
  bool truncated = false;
};

struct EvalReport {
  std::vector<ExampleRecord> records;
  double mean_sisnri = 0.0;
  double mean_sdri = 0.0;
  double count_accuracy = 0.0;
};

// Estimate i is scored against reference i (references are energy-sorted).
ExampleRecord ScoreExample(const Example &example,
                           const std::vector<std::vector<double>> &estimates,
                           bool compute_sdr);

EvalReport Evaluate(separation::SdnetModel &model, const Dataset &data,
                    const EvalOptions &options);

// per_example.jsonl, summary.csv, sisnri_hist.svg, count_accuracy.svg
void WriteReport(const EvalReport &report, const std::filesystem::path &out_dir);

}  // namespace sdnet::harness

#endif  // SDNET_HARNESS_EVALUATOR_H_
