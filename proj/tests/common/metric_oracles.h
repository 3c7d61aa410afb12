// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Reference constructions for the metric property tests.

#ifndef SDNET_TESTS_METRIC_ORACLES_H_
#define SDNET_TESTS_METRIC_ORACLES_H_

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sdnet/objectives/metrics.h"
#include "test_util.h"

namespace sdnet::testing {

inline double Energy(const std::vector<double> &x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

// ref shifted by `lag` samples (positive delays, negative advances), zero filled.
inline std::vector<double> Shift(const std::vector<double> &x, int lag) {
  const int n = static_cast<int>(x.size());
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int j = i - lag;
    if (j >= 0 && j < n) y[i] = x[j];
  }
  return y;
}

// Random noise supported on [0, support) and orthogonal to every shift of
// `ref` with lag in [lo, hi], scaled to the requested energy.
inline std::vector<double> OrthogonalNoise(const std::vector<double> &ref, int support, int lo,
                                           int hi, double energy, Gen &gen) {
  const int k = hi - lo + 1;
  Eigen::MatrixXd basis(support, k);
  for (int lag = lo; lag <= hi; ++lag) {
    const std::vector<double> s = Shift(ref, lag);
    for (int i = 0; i < support; ++i) basis(i, lag - lo) = s[i];
  }
  Eigen::VectorXd z(support);
  for (int i = 0; i < support; ++i) z[i] = gen.Normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(support, k);
  z -= q * (q.transpose() * z);
  z -= q * (q.transpose() * z);
  z *= std::sqrt(energy / z.squaredNorm());
  std::vector<double> out(ref.size(), 0.0);
  for (int i = 0; i < support; ++i) out[i] = z[i];
  return out;
}

// est = h * ref + noise with the filter inside the projection span and the
// noise orthogonal to it, so the projection SDR equals the construction SNR
// both before and after delaying est by up to `max_delay` samples.
struct SdrDelayCase {
  double snr_db = 0.0;
  double sdr = 0.0;
  double sdr_delayed = 0.0;
  int delay = 0;
};

inline SdrDelayCase RunSdrDelayCase(Gen &gen, int filter_len = 16, int n = 320) {
  const int max_delay = filter_len / 2;
  const int body = n - filter_len;
  std::vector<double> ref(n, 0.0);
  for (int i = 0; i < body; ++i) ref[i] = gen.Normal();
  const int taps = filter_len - max_delay;
  std::vector<double> h(taps);
  for (double &v : h) v = gen.Normal();
  std::vector<double> clean(n, 0.0);
  for (int k = 0; k < taps; ++k) {
    const std::vector<double> s = Shift(ref, k);
    for (int i = 0; i < n; ++i) clean[i] += h[k] * s[i];
  }
  SdrDelayCase c;
  c.snr_db = gen.Uniform(-10.0, 30.0);
  const double noise_energy = Energy(clean) * std::pow(10.0, -c.snr_db / 10.0);
  const std::vector<double> noise =
      OrthogonalNoise(ref, n - max_delay, -max_delay, filter_len - 1, noise_energy, gen);
  std::vector<double> est(n);
  for (int i = 0; i < n; ++i) est[i] = clean[i] + noise[i];
  c.delay = gen.Int(0, max_delay);
  c.sdr = objectives::Sdr(est, ref, filter_len);
  c.sdr_delayed = objectives::Sdr(Shift(est, c.delay), ref, filter_len);
  return c;
}

struct SisnrScaleCase {
  double alpha = 1.0;
  double base = 0.0;
  double scaled = 0.0;
};

inline SisnrScaleCase RunSisnrScaleCase(Gen &gen, int n = 256) {
  const std::vector<double> ref = gen.Signal(n);
  std::vector<double> est = gen.Signal(n, gen.Uniform(0.05, 2.0));
  for (int i = 0; i < n; ++i) est[i] += ref[i];
  SisnrScaleCase c;
  c.alpha = std::pow(10.0, gen.Uniform(-3.0, 3.0));
  std::vector<double> scaled(est);
  for (double &v : scaled) v *= c.alpha;
  c.base = objectives::Sisnr(est, ref);
  c.scaled = objectives::Sisnr(scaled, ref);
  return c;
}

}  // namespace sdnet::testing

#endif  // SDNET_TESTS_METRIC_ORACLES_H_
