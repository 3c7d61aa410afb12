// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/datasim/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sdnet/errors.h"

namespace sdnet::datasim {

double Distance(const Vec3 &a, const Vec3 &b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

RoomSpec RoomSpec::Centered(const Vec3 &dims, double rt60) {
  RoomSpec room;
  room.dims = dims;
  room.rt60 = rt60;
  const Vec3 c{dims[0] / 2, dims[1] / 2, dims[2] / 2};
  room.mics[0] = {c[0] - kMicSpacing / 2, c[1], c[2]};
  room.mics[1] = {c[0] + kMicSpacing / 2, c[1], c[2]};
  return room;
}

Vec3 RoomSpec::MicCenter() const {
  return {(mics[0][0] + mics[1][0]) / 2, (mics[0][1] + mics[1][1]) / 2,
          (mics[0][2] + mics[1][2]) / 2};
}

bool RoomSpec::Contains(const Vec3 &p) const {
  for (int i = 0; i < 3; ++i) {
    if (!(p[i] > 0.0 && p[i] < dims[i])) return false;
  }
  return true;
}

void RoomSpec::Validate() const {
  for (double d : dims) {
    if (!(d > 0.0)) throw DomainError("RoomSpec: non-positive dimension");
  }
  for (const auto &m : mics) {
    if (!Contains(m)) throw DomainError("RoomSpec: microphone outside room");
  }
  if (std::abs(Distance(mics[0], mics[1]) - kMicSpacing) > 1e-9) {
    throw DomainError("RoomSpec: microphone spacing must be 0.10 m");
  }
  if (!(rt60 == 0.0 || (rt60 >= 0.04 && rt60 <= 0.2))) {
    throw DomainError("RoomSpec: rt60 must be 0 or in [0.04, 0.2] s, got " +
                      std::to_string(rt60));
  }
  if (!(sound_speed > 0.0) || sample_rate <= 0) {
    throw DomainError("RoomSpec: invalid sound speed or sample rate");
  }
}

double ComputeAzimuth(const Vec3 &source, const RoomSpec &room) {
  const Vec3 c = room.MicCenter();
  Vec3 v{}, u{};
  for (int i = 0; i < 3; ++i) {
    v[i] = source[i] - c[i];
    u[i] = room.mics[0][i] - room.mics[1][i];
  }
  const double nv = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  const double nu = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  if (nv == 0.0) throw DomainError("ComputeAzimuth: source at mic center");
  if (nu == 0.0) throw DomainError("ComputeAzimuth: coincident microphones");
  double cosine = (v[0] * u[0] + v[1] * u[1] + v[2] * u[2]) / (nv * nu);
  cosine = std::clamp(cosine, -1.0, 1.0);
  return std::acos(cosine) * 180.0 / std::numbers::pi;
}

int AzimuthToClass(double azimuth_deg) {
  if (!(azimuth_deg >= 0.0 && azimuth_deg <= 180.0)) {
    throw DomainError("AzimuthToClass: azimuth out of [0, 180]: " +
                      std::to_string(azimuth_deg));
  }
  return static_cast<int>(std::lround(azimuth_deg / kAzimuthStepDeg));
}

}  // namespace sdnet::datasim
