// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_DATASIM_GEOMETRY_H_
#define SDNET_DATASIM_GEOMETRY_H_

#include <array>

#include "sdnet/waveform.h"

namespace sdnet::datasim {

using Vec3 = std::array<double, 3>;

inline constexpr double kMicSpacing = 0.10;      // meters
inline constexpr double kSoundSpeed = 343.0;     // m/s
inline constexpr double kAzimuthStepDeg = 5.0;
inline constexpr int kNumDirections = 37;        // 0..180 deg in 5 deg steps

double Distance(const Vec3 &a, const Vec3 &b);

// Shoebox room with a two-microphone pair. rt60 == 0 means anechoic.
struct RoomSpec {
  Vec3 dims{5.0, 4.0, 3.0};
  double rt60 = 0.0;
  std::array<Vec3, 2> mics{};
  double sound_speed = kSoundSpeed;
  int sample_rate = kSampleRate;

  // Mic pair centered in the room, 10 cm apart along x. Mic 1 sits on the -x
  // side, so endfire towards -x is 0 degrees.
  static RoomSpec Centered(const Vec3 &dims, double rt60);

  Vec3 MicCenter() const;
  bool Contains(const Vec3 &p) const;
  // Throws DomainError on any violated invariant.
  void Validate() const;

  bool operator==(const RoomSpec &) const = default;
};

struct SourcePlacement {
  Vec3 position{};
  int speaker_id = 0;
  double azimuth_deg = 0.0;
  int azimuth_class = 0;

  bool operator==(const SourcePlacement &) const = default;
};

// Angle in degrees between (source - mic center) and the unit vector pointing
// from mic 2 to mic 1. Range [0, 180].
double ComputeAzimuth(const Vec3 &source, const RoomSpec &room);

// round(azimuth / 5), in [0, 36].
int AzimuthToClass(double azimuth_deg);

}  // namespace sdnet::datasim

#endif  // SDNET_DATASIM_GEOMETRY_H_
