// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_OBJECTIVES_METRICS_H_
#define SDNET_OBJECTIVES_METRICS_H_

#include <functional>
#include <span>
#include <vector>

namespace sdnet::objectives {

inline constexpr double kTrainClampDb = 30.0;
inline constexpr double kEvalClampDb = 60.0;
inline constexpr int kSdrFilterLength = 512;

// Scale-invariant SNR in dB. Both signals are mean-centered; the target is
// the projection of est onto ref. Clamped to [-clamp_db, clamp_db].
double Sisnr(std::span<const double> est, std::span<const double> ref,
             double clamp_db = kTrainClampDb);

// Projection SDR: est is projected onto ref delayed by 0..filter_len-1
// samples (Toeplitz normal equations, ridge fallback when singular).
double Sdr(std::span<const double> est, std::span<const double> ref,
           int filter_len = kSdrFilterLength, double clamp_db = kEvalClampDb);

using Metric = std::function<double(std::span<const double>, std::span<const double>)>;

// metric(est, ref) - metric(mixture, ref)
double Improvement(const Metric &metric, std::span<const double> est,
                   std::span<const double> ref, std::span<const double> mixture);

// Mean over steps of -log p(label). `distributions[t]` is the step-t
// distribution; labels end with EOS.
double SequenceCe(const std::vector<std::vector<double>> &distributions,
                  std::span<const int> labels_with_eos);

// Fraction of examples whose predicted source count matches the truth.
double CountAccuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace sdnet::objectives

#endif  // SDNET_OBJECTIVES_METRICS_H_
