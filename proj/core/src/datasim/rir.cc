// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/datasim/rir.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdnet/errors.h"

namespace sdnet::datasim {

namespace {

constexpr int kHalfTaps = kFractionalDelayTaps / 2;

double WindowedSinc(double t) {
  // Hann window reaching zero one sample beyond the outermost tap.
  const double w = 0.5 * (1.0 + std::cos(std::numbers::pi * t / (kHalfTaps + 1)));
  if (t == 0.0) return w;
  const double x = std::numbers::pi * t;
  return w * std::sin(x) / x;
}

}  // namespace

double SabineReflection(const RoomSpec &room) {
  if (room.rt60 <= 0.0) return 0.0;
  const auto &d = room.dims;
  const double volume = d[0] * d[1] * d[2];
  const double surface = 2.0 * (d[0] * d[1] + d[0] * d[2] + d[1] * d[2]);
  // T60 = 24 ln(10) V / (c S alpha); beta = sqrt(1 - alpha).
  const double alpha =
      24.0 * std::log(10.0) * volume / (room.sound_speed * surface * room.rt60);
  // Fully absorbing walls when the target is below the room's Sabine minimum.
  return std::sqrt(std::max(0.0, 1.0 - alpha));
}

std::size_t RirLength(const RoomSpec &room, const Vec3 &source,
                      const Vec3 &mic) {
  const double delay = Distance(source, mic) / room.sound_speed * room.sample_rate;
  const auto tail = static_cast<std::size_t>(std::ceil(room.rt60 * room.sample_rate));
  return tail + static_cast<std::size_t>(std::ceil(delay)) + kHalfTaps + 1;
}

WaveformSegment GenerateRir(const RoomSpec &room, const Vec3 &source,
                            const Vec3 &mic, int max_order) {
  if (!room.Contains(source)) throw DomainError("GenerateRir: source outside room");
  if (!room.Contains(mic)) throw DomainError("GenerateRir: mic outside room");
  if (room.rt60 < 0.0) throw DomainError("GenerateRir: negative rt60");
  if (Distance(source, mic) == 0.0) {
    throw DomainError("GenerateRir: source coincides with microphone");
  }
  const double fs = room.sample_rate, c = room.sound_speed;
  const std::size_t length = RirLength(room, source, mic);
  std::vector<double> h(length, 0.0);

  auto add_image = [&](double dist, double gain) {
    const double tau = dist / c * fs;
    const auto center = static_cast<long>(std::lround(tau));
    if (center - kHalfTaps >= static_cast<long>(length)) return;
    const double amp = gain / (4.0 * std::numbers::pi * dist);
    for (long n = std::max(0L, center - kHalfTaps);
         n <= center + kHalfTaps && n < static_cast<long>(length); ++n) {
      h[n] += amp * WindowedSinc(static_cast<double>(n) - tau);
    }
  };

  if (room.rt60 == 0.0) {
    add_image(Distance(source, mic), 1.0);
    return WaveformSegment::Mono(std::move(h), room.sample_rate);
  }

  const double beta = SabineReflection(room);
  const double reach = static_cast<double>(length) / fs * c;
  std::array<int, 3> order{};
  for (int i = 0; i < 3; ++i) {
    order[i] = std::min(max_order,
                        static_cast<int>(std::ceil(reach / (2.0 * room.dims[i]))) + 1);
  }
  for (int mx = -order[0]; mx <= order[0]; ++mx) {
    for (int my = -order[1]; my <= order[1]; ++my) {
      for (int mz = -order[2]; mz <= order[2]; ++mz) {
        const std::array<int, 3> m{mx, my, mz};
        for (int q = 0; q < 8; ++q) {
          const std::array<int, 3> p{q & 1, (q >> 1) & 1, (q >> 2) & 1};
          double d2 = 0.0;
          int reflections = 0;
          for (int i = 0; i < 3; ++i) {
            const double img = (1 - 2 * p[i]) * source[i] + 2.0 * m[i] * room.dims[i];
            d2 += (img - mic[i]) * (img - mic[i]);
            reflections += std::abs(m[i] - p[i]) + std::abs(m[i]);
          }
          add_image(std::sqrt(d2), std::pow(beta, reflections));
        }
      }
    }
  }
  return WaveformSegment::Mono(std::move(h), room.sample_rate);
}

std::vector<double> ConvolveTruncated(std::span<const double> signal,
                                      std::span<const double> filter) {
  std::vector<double> out(signal.size(), 0.0);
  if (filter.empty()) return out;
  // Skip the zero lead-in of the response.
  std::size_t first = 0;
  while (first < filter.size() && filter[first] == 0.0) ++first;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    double acc = 0.0;
    const std::size_t kmax = std::min(filter.size() - 1, i);
    for (std::size_t k = first; k <= kmax; ++k) {
      acc += filter[k] * signal[i - k];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace sdnet::datasim
