// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_DATASIM_MIXTURE_H_
#define SDNET_DATASIM_MIXTURE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sdnet/datasim/geometry.h"
#include "sdnet/datasim/rir.h"
#include "sdnet/datasim/speaker.h"

namespace sdnet::datasim {

struct MixtureOptions {
  double duration_s = 4.0;
  // Non-first sources are attenuated by U[0, max_level_db] dB.
  double max_level_db = 5.0;
  double wall_margin = 0.5;
  double min_mic_distance = 0.5;
  int max_order = kDefaultMaxOrder;
  // Mixture and targets are jointly scaled so that no sample exceeds this.
  double peak = 0.9;
  SpeakerSynthOptions synth;
};

// A stereo mixture with reference-channel (mic 1) targets. Targets, labels
// and placements share one order: non-increasing target energy.
struct MixtureExample {
  WaveformSegment mixture;
  std::vector<WaveformSegment> targets;
  std::vector<int> speaker_labels;
  std::vector<int> direction_labels;
  uint64_t seed = 0;
  RoomSpec room;
  std::vector<SourcePlacement> sources;

  std::size_t NumSources() const { return targets.size(); }
};

MixtureExample SimulateMixture(std::span<const int> speakers,
                               const RoomSpec &room, uint64_t seed,
                               const MixtureOptions &opts = {});

// Stateless 64-bit mixer used to derive per-example and per-source seeds.
uint64_t SplitMix64(uint64_t x);

// Random room: dims in [4, 8] x [4, 7] x [2.5, 3.5] m, mics centered. rt60 is
// 0 when anechoic, otherwise U[0.04, 0.2] s.
RoomSpec SampleRoom(uint64_t seed, bool reverberant);

}  // namespace sdnet::datasim

#endif  // SDNET_DATASIM_MIXTURE_H_
