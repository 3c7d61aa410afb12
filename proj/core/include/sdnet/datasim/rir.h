// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_DATASIM_RIR_H_
#define SDNET_DATASIM_RIR_H_

#include <cstddef>
#include <span>
#include <vector>

#include "sdnet/datasim/geometry.h"

namespace sdnet::datasim {

inline constexpr int kFractionalDelayTaps = 81;
inline constexpr int kDefaultMaxOrder = 20;

// Uniform wall pressure reflection coefficient from Sabine's formula.
// Returns 0 for an anechoic room.
double SabineReflection(const RoomSpec &room);

// Samples needed to hold the direct path plus ceil(rt60 * fs) of tail.
std::size_t RirLength(const RoomSpec &room, const Vec3 &source,
                      const Vec3 &mic);

// Image-method impulse response from `source` to `mic`. Each image source
// contributes beta^reflections / (4 pi d), placed at d / c * fs samples with
// an 81-tap Hann-windowed sinc. `max_order` bounds the image index per axis;
// images that land past the response length are skipped.
WaveformSegment GenerateRir(const RoomSpec &room, const Vec3 &source,
                            const Vec3 &mic, int max_order = kDefaultMaxOrder);

// Linear convolution truncated to the length of `signal`.
std::vector<double> ConvolveTruncated(std::span<const double> signal,
                                      std::span<const double> filter);

}  // namespace sdnet::datasim

#endif  // SDNET_DATASIM_RIR_H_
