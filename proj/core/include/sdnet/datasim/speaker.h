// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_DATASIM_SPEAKER_H_
#define SDNET_DATASIM_SPEAKER_H_

#include <cstdint>

#include "sdnet/waveform.h"

namespace sdnet::datasim {

struct SpeakerSynthOptions {
  // Size of the synthetic speaker population; ids must lie in [0, n_speakers).
  int n_speakers = 119;
  int sample_rate = kSampleRate;
  double peak = 0.9;
  double noise_floor_db = -30.0;
};

// Fundamental frequency of a synthetic speaker: 90 + 3 * id Hz.
double SpeakerF0(int speaker_id);
// Center frequency of the speaker's formant resonator.
double SpeakerFormant(int speaker_id);

// Synthetic voiced "utterance": harmonic series on SpeakerF0, shaped by a
// two-pole formant filter, gated by a random syllable-rate envelope, plus a
// white noise floor. Peak-normalized. Pure function of (speaker_id, seed).
WaveformSegment SynthSpeakerSignal(int speaker_id, double duration_s,
                                   uint64_t seed,
                                   const SpeakerSynthOptions &opts = {});

}  // namespace sdnet::datasim

#endif  // SDNET_DATASIM_SPEAKER_H_
