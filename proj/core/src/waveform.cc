// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/waveform.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sdnet/errors.h"

namespace sdnet {

WaveformSegment::WaveformSegment(int rate,
                                 std::vector<std::vector<double>> data)
    : sample_rate(rate), channels(std::move(data)) {
  for (const auto &c : channels) {
    if (c.size() != channels.front().size()) {
      throw DomainError("WaveformSegment: channels differ in length");
    }
  }
}

WaveformSegment WaveformSegment::Mono(std::vector<double> samples, int rate) {
  WaveformSegment w;
  w.sample_rate = rate;
  w.channels.push_back(std::move(samples));
  return w;
}

double WaveformSegment::Energy(int channel) const {
  double e = 0.0;
  for (double x : channels.at(channel)) e += x * x;
  return e;
}

double WaveformSegment::PeakAbs() const {
  double peak = 0.0;
  for (const auto &c : channels)
    for (double x : c) peak = std::max(peak, std::abs(x));
  return peak;
}

namespace {

template <typename T>
void PutLE(std::ostream &os, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<uint64_t>(value) >> (8 * i)) & 0xff);
  }
  os.write(bytes.data(), bytes.size());
}

template <typename T>
T GetLE(const unsigned char *p) {
  uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= uint64_t(p[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void WriteWav(const std::filesystem::path &path, const WaveformSegment &wave) {
  if (wave.NumChannels() == 0) throw DomainError("WriteWav: no channels");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  const uint16_t nch = static_cast<uint16_t>(wave.NumChannels());
  const uint32_t n = static_cast<uint32_t>(wave.NumSamples());
  const uint32_t data_bytes = n * nch * 2;
  os.write("RIFF", 4);
  PutLE<uint32_t>(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  PutLE<uint32_t>(os, 16);
  PutLE<uint16_t>(os, 1);  // PCM
  PutLE<uint16_t>(os, nch);
  PutLE<uint32_t>(os, static_cast<uint32_t>(wave.sample_rate));
  PutLE<uint32_t>(os, static_cast<uint32_t>(wave.sample_rate) * nch * 2);
  PutLE<uint16_t>(os, static_cast<uint16_t>(nch * 2));
  PutLE<uint16_t>(os, 16);
  os.write("data", 4);
  PutLE<uint32_t>(os, data_bytes);
  std::vector<char> buf(data_bytes);
  std::size_t k = 0;
  for (uint32_t i = 0; i < n; ++i) {
    for (uint16_t c = 0; c < nch; ++c) {
      double x = std::clamp(wave.channels[c][i] * 32768.0, -32768.0, 32767.0);
      auto s = static_cast<int16_t>(std::lround(x));
      auto u = static_cast<uint16_t>(s);
      buf[k++] = static_cast<char>(u & 0xff);
      buf[k++] = static_cast<char>(u >> 8);
    }
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw IoError("write failed: " + path.string());
}

WaveformSegment ReadWav(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  auto bad = [&](const std::string &why) {
    return IoError("invalid WAV file " + path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw bad("missing RIFF/WAVE header");
  }
  uint16_t format = 0, nch = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char *data = nullptr;
  uint32_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    uint32_t size = GetLE<uint32_t>(chunk + 4);
    if (pos + 8 + size > bytes.size()) size = uint32_t(bytes.size() - pos - 8);
    if (std::memcmp(chunk, "fmt ", 4) == 0 && size >= 16) {
      format = GetLE<uint16_t>(chunk + 8);
      nch = GetLE<uint16_t>(chunk + 10);
      rate = GetLE<uint32_t>(chunk + 12);
      bits = GetLE<uint16_t>(chunk + 22);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos += 8 + size + (size & 1);
  }
  if (format != 1 || bits != 16) throw bad("only 16-bit PCM is supported");
  if (nch == 0 || data == nullptr) throw bad("missing fmt or data chunk");
  const std::size_t n = data_size / (2u * nch);
  WaveformSegment w;
  w.sample_rate = static_cast<int>(rate);
  w.channels.assign(nch, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (uint16_t c = 0; c < nch; ++c) {
      auto s = static_cast<int16_t>(GetLE<uint16_t>(data + 2 * (i * nch + c)));
      w.channels[c][i] = s / 32768.0;
    }
  }
  return w;
}

}  // namespace sdnet
