// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_WAVEFORM_H_
#define SDNET_WAVEFORM_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace sdnet {

inline constexpr int kSampleRate = 8000;

// Fixed-rate sampled audio, channel-major. All channels share one length.
struct WaveformSegment {
  int sample_rate = kSampleRate;
  std::vector<std::vector<double>> channels;

  WaveformSegment() = default;
  WaveformSegment(int rate, std::vector<std::vector<double>> data);

  static WaveformSegment Mono(std::vector<double> samples,
                              int rate = kSampleRate);

  int NumChannels() const { return static_cast<int>(channels.size()); }
  std::size_t NumSamples() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  std::span<const double> Channel(int c) const { return channels.at(c); }
  double Energy(int channel = 0) const;
  double PeakAbs() const;

  bool operator==(const WaveformSegment &) const = default;
};

// 16-bit PCM RIFF/WAVE. Samples are clipped to [-1, 1) on write.
WaveformSegment ReadWav(const std::filesystem::path &path);
void WriteWav(const std::filesystem::path &path, const WaveformSegment &wave);

}  // namespace sdnet

#endif  // SDNET_WAVEFORM_H_
