// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/objectives/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include "sdnet/log.h"

#include "sdnet/errors.h"

namespace sdnet::objectives {

namespace {

double RatioDb(double num, double den, double clamp_db) {
  if (den <= 0.0) return clamp_db;
  if (num <= 0.0) return -clamp_db;
  return std::clamp(10.0 * std::log10(num / den), -clamp_db, clamp_db);
}

}  // namespace

double Sisnr(std::span<const double> est, std::span<const double> ref, double clamp_db) {
  if (est.size() != ref.size()) throw DomainError("Sisnr: length mismatch");
  if (ref.empty()) throw DomainError("Sisnr: empty signals");
  const double n = static_cast<double>(ref.size());
  const double mean_e = std::accumulate(est.begin(), est.end(), 0.0) / n;
  const double mean_s = std::accumulate(ref.begin(), ref.end(), 0.0) / n;
  double dot = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double s = ref[i] - mean_s;
    dot += (est[i] - mean_e) * s;
    ss += s * s;
  }
  if (ss == 0.0) throw DomainError("Sisnr: reference is zero after mean removal");
  const double alpha = dot / ss;
  double target = 0.0, noise = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double st = alpha * (ref[i] - mean_s);
    const double e = (est[i] - mean_e) - st;
    target += st * st;
    noise += e * e;
  }
  return RatioDb(target, noise, clamp_db);
}

double Sdr(std::span<const double> est, std::span<const double> ref, int filter_len,
           double clamp_db) {
  if (est.size() != ref.size()) throw DomainError("Sdr: length mismatch");
  if (filter_len < 1 || ref.size() <= static_cast<std::size_t>(filter_len)) {
    throw DomainError("Sdr: signals must be longer than the projection filter");
  }
  const std::size_t n = ref.size();
  const int L = filter_len;
  Eigen::VectorXd cross(L);
  Eigen::MatrixXd gram(L, L);
  for (int k = 0; k < L; ++k) {
    double r = 0.0, c = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      r += ref[i] * ref[i - k];
      c += est[i] * ref[i - k];
    }
    cross[k] = c;
    // Shifts are truncated at the signal end, so each diagonal loses one
    // trailing product per step.
    gram(0, k) = r;
    for (int i = 1; i + k < L; ++i) {
      const std::size_t u = n - static_cast<std::size_t>(i + k);
      gram(i, i + k) = gram(i - 1, i + k - 1) - ref[u] * ref[u + k];
    }
  }
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < i; ++j) gram(i, j) = gram(j, i);

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  Eigen::VectorXd coef;
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || dmax == 0.0 ||
      d.minCoeff() <= 1e-12 * dmax) {
    const double eps = 1e-8 * gram.trace();
    log::Warn("Sdr: singular normal equations, ridge ", eps);
    gram.diagonal().array() += eps > 0.0 ? eps : 1e-12;
    coef = gram.ldlt().solve(cross);
  } else {
    coef = ldlt.solve(cross);
  }

  double proj_energy = 0.0, err_energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = 0.0;
    const int kmax = static_cast<int>(std::min<std::size_t>(L - 1, i));
    for (int k = 0; k <= kmax; ++k) p += coef[k] * ref[i - k];
    proj_energy += p * p;
    err_energy += (est[i] - p) * (est[i] - p);
  }
  return RatioDb(proj_energy, err_energy, clamp_db);
}

double Improvement(const Metric &metric, std::span<const double> est,
                   std::span<const double> ref, std::span<const double> mixture) {
  return metric(est, ref) - metric(mixture, ref);
}

double SequenceCe(const std::vector<std::vector<double>> &distributions,
                  std::span<const int> labels_with_eos) {
  if (distributions.size() != labels_with_eos.size()) {
    throw DomainError("SequenceCe: one label per step is required");
  }
  if (distributions.empty()) throw DomainError("SequenceCe: empty sequence");
  double total = 0.0;
  for (std::size_t t = 0; t < distributions.size(); ++t) {
    const int label = labels_with_eos[t];
    if (label < 0 || static_cast<std::size_t>(label) >= distributions[t].size()) {
      throw DomainError("SequenceCe: label outside the vocabulary");
    }
    total -= std::log(distributions[t][label]);
  }
  return total / static_cast<double>(distributions.size());
}

double CountAccuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw DomainError("CountAccuracy: list lengths differ");
  }
  if (truth.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

}  // namespace sdnet::objectives
