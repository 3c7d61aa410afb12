// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/datasim/speaker.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "sdnet/errors.h"

namespace sdnet::datasim {

double SpeakerF0(int speaker_id) { return 90.0 + 3.0 * speaker_id; }

double SpeakerFormant(int speaker_id) {
  return 500.0 + 60.0 * ((speaker_id * 7) % 11);
}

namespace {

// Piecewise-constant syllable gates, then two passes of a 20 ms box filter.
std::vector<double> SyllableEnvelope(std::size_t n, int fs, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> dur(0.08, 0.25), level(0.4, 1.0),
      coin(0.0, 1.0);
  std::vector<double> gate(n, 0.0);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t len = static_cast<std::size_t>(dur(rng) * fs);
    double g = coin(rng) < 0.75 ? level(rng) : 0.05;
    for (std::size_t i = pos; i < std::min(n, pos + len); ++i) gate[i] = g;
    pos += std::max<std::size_t>(len, 1);
  }
  const std::size_t w = std::max(1, fs / 50);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> out(n, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += gate[i];
      if (i >= w) acc -= gate[i - w];
      out[i] = acc / static_cast<double>(std::min(i + 1, w));
    }
    gate.swap(out);
  }
  return gate;
}

}  // namespace

WaveformSegment SynthSpeakerSignal(int speaker_id, double duration_s,
                                   uint64_t seed,
                                   const SpeakerSynthOptions &opts) {
  if (speaker_id < 0 || speaker_id >= opts.n_speakers) {
    throw DomainError("SynthSpeakerSignal: speaker id " +
                      std::to_string(speaker_id) + " outside [0, " +
                      std::to_string(opts.n_speakers) + ")");
  }
  if (!(duration_s > 0.0)) {
    throw DomainError("SynthSpeakerSignal: duration must be positive");
  }
  const int fs = opts.sample_rate;
  const auto n = static_cast<std::size_t>(std::lround(duration_s * fs));
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(speaker_id)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  const double f0 = SpeakerF0(speaker_id);
  std::vector<double> harmonics(n, 0.0);
  for (int k = 1; k * f0 < 0.45 * fs; ++k) {
    const double amp = 1.0 / k;
    const double w = 2.0 * std::numbers::pi * k * f0 / fs;
    const double ph = phase(rng);
    for (std::size_t i = 0; i < n; ++i) harmonics[i] += amp * std::sin(w * i + ph);
  }

  // y[i] = x[i] + 2 r cos(theta) y[i-1] - r^2 y[i-2], 200 Hz bandwidth.
  const double r = std::exp(-std::numbers::pi * 200.0 / fs);
  const double theta = 2.0 * std::numbers::pi * SpeakerFormant(speaker_id) / fs;
  const double a1 = 2.0 * r * std::cos(theta), a2 = -r * r;
  std::vector<double> voiced(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double y = harmonics[i];
    if (i >= 1) y += a1 * voiced[i - 1];
    if (i >= 2) y += a2 * voiced[i - 2];
    voiced[i] = y;
  }

  const std::vector<double> env = SyllableEnvelope(n, fs, rng);
  double power = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    voiced[i] *= env[i];
    power += voiced[i] * voiced[i];
  }
  const double rms = std::sqrt(power / std::max<std::size_t>(n, 1));
  const double noise_rms = rms * std::pow(10.0, opts.noise_floor_db / 20.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    voiced[i] += noise_rms * noise(rng);
    peak = std::max(peak, std::abs(voiced[i]));
  }
  if (peak > 0.0) {
    const double g = opts.peak / peak;
    for (double &x : voiced) x *= g;
  }
  return WaveformSegment::Mono(std::move(voiced), fs);
}

}  // namespace sdnet::datasim
