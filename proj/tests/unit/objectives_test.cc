// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "metric_oracles.h"
#include "sdnet/errors.h"
#include "sdnet/objectives/loss.h"

namespace sdnet::objectives {
namespace {

using sdnet::testing::Gen;
using sdnet::testing::Shift;

TEST(Sisnr, HandCase) {
  const std::vector<double> s{0, 1, 0, -1}, e{0.1, 1, -0.1, -1};
  EXPECT_NEAR(Sisnr(e, s), 20.0, 1e-6);
}

TEST(Sisnr, ClampAndErrors) {
  Gen gen(1);
  const std::vector<double> s = gen.Signal(100);
  EXPECT_EQ(Sisnr(s, s), 30.0);
  EXPECT_EQ(Sisnr(s, s, kEvalClampDb), 60.0);
  std::vector<double> neg(s);
  for (double &v : neg) v = -v;
  EXPECT_EQ(Sisnr(neg, s), 30.0);
  EXPECT_EQ(Sisnr(std::vector<double>{0, 1, 0, 1}, std::vector<double>{1, 0, -1, 0}), -30.0);
  EXPECT_THROW(Sisnr(s, std::vector<double>(100, 2.0)), DomainError);
  EXPECT_THROW(Sisnr(s, std::vector<double>(99, 1.0)), DomainError);
}

TEST(Sisnr, ScaleInvariance) {
  const std::vector<double> s{0, 1, 0, -1}, e{0.1, 1, -0.1, -1};
  for (double alpha : {0.1, 3.0, 100.0}) {
    std::vector<double> scaled(e);
    for (double &v : scaled) v *= alpha;
    EXPECT_NEAR(Sisnr(scaled, s), Sisnr(e, s), 1e-6);
  }
  Gen gen(2);
  for (int i = 0; i < 200; ++i) {
    const auto c = sdnet::testing::RunSisnrScaleCase(gen);
    EXPECT_NEAR(c.scaled, c.base, 1e-6) << "alpha " << c.alpha;
  }
}

TEST(Sisnr, OffsetInvariance) {
  Gen gen(3);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> s = gen.Signal(64);
    std::vector<double> e = gen.Signal(64);
    const double base = Sisnr(e, s);
    const double a = gen.Uniform(-5, 5), b = gen.Uniform(-5, 5);
    std::vector<double> s2(s), e2(e);
    for (double &v : s2) v += a;
    for (double &v : e2) v += b;
    EXPECT_NEAR(Sisnr(e2, s2), base, 1e-9);
  }
}

TEST(SisnrTensor, MatchesScalarMetric) {
  Gen gen(4);
  const std::vector<double> s = gen.Signal(128), e = gen.Signal(128);
  const auto ts = torch::tensor(s, torch::kDouble), te = torch::tensor(e, torch::kDouble);
  EXPECT_NEAR(SisnrTensor(te, ts).item<double>(), Sisnr(e, s), 1e-6);
  EXPECT_NEAR(SisnrTensor(ts, ts).item<double>(), 30.0, 1e-9);
}

TEST(Sdr, PerfectAndDelayedReference) {
  Gen gen(5);
  const std::vector<double> s = gen.Signal(600);
  EXPECT_EQ(Sdr(s, s), 60.0);
  EXPECT_GE(Sdr(Shift(s, 5), s, 6), 60.0 - 1e-9);
  EXPECT_GE(Sdr(Shift(s, 5), s, 512), 60.0 - 1e-9);
  EXPECT_THROW(Sdr(s, s, 600), DomainError);
  EXPECT_THROW(Sdr(s, std::vector<double>(599)), DomainError);
}

TEST(Sdr, OrthogonalNoiseAtMinusTen) {
  Gen gen(6);
  const int n = 3000, L = 512;
  std::vector<double> s(n, 0.0);
  for (int i = 0; i < n - L; ++i) s[i] = gen.Normal();
  const auto noise = sdnet::testing::OrthogonalNoise(s, n, 0, L - 1,
                                                     0.1 * sdnet::testing::Energy(s), gen);
  std::vector<double> est(n);
  for (int i = 0; i < n; ++i) est[i] = s[i] + noise[i];
  EXPECT_NEAR(Sdr(est, s, L), 10.0, 0.5);
}

TEST(Sdr, DelayInvariance) {
  Gen gen(7);
  for (int i = 0; i < 100; ++i) {
    const auto c = sdnet::testing::RunSdrDelayCase(gen);
    EXPECT_NEAR(c.sdr_delayed, c.sdr, 1e-6) << "delay " << c.delay;
    EXPECT_NEAR(c.sdr, c.snr_db, 1e-6);
  }
}

TEST(Sdr, SingularSystemFallsBackToRidge) {
  std::vector<double> s(100, 0.0), e(100, 0.0);
  s[0] = 1.0;
  e[3] = 1.0;
  const double v = Sdr(e, s, 8);
  EXPECT_TRUE(std::isfinite(v));
  std::vector<double> z(100, 0.0);
  EXPECT_TRUE(std::isfinite(Sdr(e, z, 8)));
}

TEST(Improvement, Cases) {
  Gen gen(8);
  const std::vector<double> s = gen.Signal(64), m = gen.Signal(64);
  const Metric sisnr = [](std::span<const double> a, std::span<const double> b) {
    return Sisnr(a, b);
  };
  EXPECT_EQ(Improvement(sisnr, m, s, m), 0.0);
  EXPECT_NEAR(Improvement(sisnr, s, s, m), 30.0 - Sisnr(m, s), 1e-12);
  // Two orthogonal zero-mean sources at 0 dB: the mixture scores 0 dB.
  const std::vector<double> a{1, -1, 1, -1}, ab{2, 0, 0, -2};
  std::vector<double> est{1.1, -1.1, 0.9, -0.9};
  EXPECT_NEAR(Sisnr(ab, a), 0.0, 1e-12);
  EXPECT_NEAR(Improvement(sisnr, est, a, ab), Sisnr(est, a), 1e-12);
}

TEST(SequenceCe, Cases) {
  const std::vector<int> labels{0, 1};
  EXPECT_NEAR(SequenceCe({{0.5, 0.5}, {0.75, 0.25}}, labels), 1.0397207708399179, 1e-12);
  EXPECT_EQ(SequenceCe({{1.0, 0.0}, {0.0, 1.0}}, labels), 0.0);
  const std::vector<double> uniform(7, 1.0 / 7);
  EXPECT_NEAR(SequenceCe({uniform, uniform}, std::vector<int>{3, 6}), std::log(7.0), 1e-12);
  EXPECT_THROW(SequenceCe({uniform}, labels), DomainError);
  EXPECT_THROW(SequenceCe({uniform}, std::vector<int>{7}), DomainError);
}

TEST(SequenceCeTensor, MatchesScalar) {
  const auto lp = torch::log(torch::tensor({{0.5, 0.5}, {0.75, 0.25}}, torch::kDouble));
  EXPECT_NEAR(SequenceCeTensor(lp, {0, 1}).item<double>(), 1.0397207708399179, 1e-12);
  EXPECT_THROW(SequenceCeTensor(lp, {0}), DomainError);
}

TEST(LossBreakdown, Combination) {
  const auto b = LossBreakdown::Combine(10.0, 0.2, 0.3);
  EXPECT_NEAR(b.total, -7.5, 1e-12);
  EXPECT_EQ(LossBreakdown::Combine(10.0, 0.2, 0.3, 0.0).total, -10.0);
}

struct LossFixture {
  torch::Tensor refs, lp_s, lp_d;
  std::vector<std::vector<int>> spk{{1, 0}}, dir{{2, 2}};
};

LossFixture PerfectTokens() {
  LossFixture f;
  f.refs = torch::randn({2, 200}, torch::kDouble);
  // Vocabulary of 5: classes 0..2, EOS 3, BOS 4.
  f.lp_s = torch::full({1, 3, 5}, -1e9, torch::kDouble);
  f.lp_d = f.lp_s.clone();
  const int s[3] = {1, 0, 3}, d[3] = {2, 2, 3};
  for (int t = 0; t < 3; ++t) {
    f.lp_s[0][t][s[t]] = 0.0;
    f.lp_d[0][t][d[t]] = 0.0;
  }
  return f;
}

TEST(TotalLoss, FloorAndAblation) {
  torch::manual_seed(9);
  LossFixture f = PerfectTokens();
  const auto terms = TotalLoss(f.refs, f.refs, f.lp_s, f.lp_d, f.spk, f.dir, 3, 3);
  EXPECT_NEAR(terms.total.item<double>(), -30.0, 1e-9);
  const torch::Tensor noisy = f.refs + 0.3 * torch::randn_like(f.refs);
  const auto lp_u = torch::log(torch::full({1, 3, 5}, 0.25, torch::kDouble));
  const auto zero_lambda = TotalLoss(noisy, f.refs, lp_u, lp_u, f.spk, f.dir, 3, 3, 0.0);
  EXPECT_NEAR(zero_lambda.total.item<double>(), -zero_lambda.sisnr.item<double>(), 1e-12);
  const auto full = TotalLoss(noisy, f.refs, lp_u, lp_u, f.spk, f.dir, 3, 3);
  EXPECT_NEAR(full.ce_spk.item<double>(), std::log(4.0), 1e-12);
  const auto b = full.Breakdown();
  EXPECT_NEAR(b.total, -b.sisnr_ss + 5.0 * (b.ce_spk + b.ce_dir), 1e-9);
}

TEST(TotalLoss, RejectsMismatchedCounts) {
  LossFixture f = PerfectTokens();
  EXPECT_THROW(TotalLoss(f.refs.narrow(0, 0, 1), f.refs, f.lp_s, f.lp_d, f.spk, f.dir, 3, 3),
               DomainError);
  EXPECT_THROW(TotalLoss(f.refs, f.refs, f.lp_s, f.lp_d, {{1, 0}, {0}}, f.dir, 3, 3),
               DomainError);
}

TEST(TotalLoss, DecreasesTowardReference) {
  torch::manual_seed(10);
  LossFixture f = PerfectTokens();
  for (int trial = 0; trial < 20; ++trial) {
    const torch::Tensor mix = f.refs.sum(0, true).expand({2, -1}) +
                              0.5 * torch::randn({2, 200}, torch::kDouble);
    double prev = std::numeric_limits<double>::infinity();
    for (double a = 0.0; a <= 1.0; a += 0.1) {
      const torch::Tensor est = (1.0 - a) * mix + a * f.refs;
      const double loss =
          TotalLoss(est, f.refs, f.lp_s, f.lp_d, f.spk, f.dir, 3, 3).total.item<double>();
      EXPECT_LE(loss, prev + 1e-9) << "trial " << trial << " a " << a;
      prev = loss;
    }
  }
}

TEST(CountAccuracy, Cases) {
  EXPECT_EQ(CountAccuracy(std::vector<int>{2, 3}, std::vector<int>{2, 3}), 1.0);
  EXPECT_EQ(CountAccuracy(std::vector<int>{2, 2, 3, 0}, std::vector<int>{2, 3, 3, 2}), 0.5);
  EXPECT_THROW(CountAccuracy(std::vector<int>{2}, std::vector<int>{2, 3}), DomainError);
}

}  // namespace
}  // namespace sdnet::objectives
