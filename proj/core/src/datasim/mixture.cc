// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/datasim/mixture.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "sdnet/errors.h"

namespace sdnet::datasim {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 MakeRng(uint64_t seed, uint32_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

Vec3 PlaceSource(const RoomSpec &room, const MixtureOptions &opts,
                 std::mt19937_64 &rng) {
  const Vec3 center = room.MicCenter();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec3 p{};
    for (int i = 0; i < 3; ++i) {
      const double lo = std::min(opts.wall_margin, room.dims[i] / 2);
      std::uniform_real_distribution<double> u(lo, room.dims[i] - lo);
      p[i] = u(rng);
    }
    if (Distance(p, center) >= opts.min_mic_distance && room.Contains(p)) return p;
  }
  throw DomainError("SimulateMixture: room too small to place a source");
}

}  // namespace

MixtureExample SimulateMixture(std::span<const int> speakers,
                               const RoomSpec &room, uint64_t seed,
                               const MixtureOptions &opts) {
  room.Validate();
  if (speakers.size() < 2 || speakers.size() > 3) {
    throw DomainError("SimulateMixture: need 2 or 3 speakers");
  }
  if (std::set<int>(speakers.begin(), speakers.end()).size() != speakers.size()) {
    throw DomainError("SimulateMixture: duplicate speakers");
  }
  if (room.sample_rate != opts.synth.sample_rate) {
    throw DomainError("SimulateMixture: room and synth sample rates differ");
  }

  std::mt19937_64 rng = MakeRng(seed, 0x6d6978u);
  std::uniform_real_distribution<double> level(0.0, opts.max_level_db);
  const std::size_t n_src = speakers.size();

  std::vector<SourcePlacement> placements(n_src);
  std::vector<std::array<std::vector<double>, 2>> images(n_src);
  for (std::size_t i = 0; i < n_src; ++i) {
    SourcePlacement &sp = placements[i];
    sp.speaker_id = speakers[i];
    sp.position = PlaceSource(room, opts, rng);
    sp.azimuth_deg = ComputeAzimuth(sp.position, room);
    sp.azimuth_class = AzimuthToClass(sp.azimuth_deg);

    WaveformSegment dry = SynthSpeakerSignal(
        sp.speaker_id, opts.duration_s, SplitMix64(seed ^ (i + 1)), opts.synth);
    std::vector<double> &x = dry.channels[0];
    const double rms = std::sqrt(dry.Energy() / static_cast<double>(x.size()));
    const double gain_db = i == 0 ? 0.0 : level(rng);
    const double g = std::pow(10.0, -gain_db / 20.0) / std::max(rms, 1e-12);
    for (double &v : x) v *= g;

    for (int m = 0; m < 2; ++m) {
      WaveformSegment rir = GenerateRir(room, sp.position, room.mics[m], opts.max_order);
      images[i][m] = ConvolveTruncated(x, rir.channels[0]);
    }
  }

  std::vector<double> energy(n_src, 0.0);
  for (std::size_t i = 0; i < n_src; ++i) {
    for (double v : images[i][0]) energy[i] += v * v;
  }
  std::vector<std::size_t> order(n_src);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energy[a] > energy[b]; });

  const std::size_t n = images[0][0].size();
  std::vector<std::vector<double>> mix(2, std::vector<double>(n, 0.0));
  for (std::size_t i : order) {
    for (int m = 0; m < 2; ++m) {
      for (std::size_t t = 0; t < n; ++t) mix[m][t] += images[i][m][t];
    }
  }
  double peak = 0.0;
  for (const auto &c : mix)
    for (double v : c) peak = std::max(peak, std::abs(v));
  for (const auto &img : images)
    for (double v : img[0]) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0.0 ? opts.peak / peak : 1.0;

  MixtureExample ex;
  ex.seed = seed;
  ex.room = room;
  for (auto &c : mix)
    for (double &v : c) v *= scale;
  ex.mixture = WaveformSegment(room.sample_rate, std::move(mix));
  for (std::size_t i : order) {
    std::vector<double> t = std::move(images[i][0]);
    for (double &v : t) v *= scale;
    ex.targets.push_back(WaveformSegment::Mono(std::move(t), room.sample_rate));
    ex.speaker_labels.push_back(placements[i].speaker_id);
    ex.direction_labels.push_back(placements[i].azimuth_class);
    ex.sources.push_back(placements[i]);
  }
  return ex;
}

RoomSpec SampleRoom(uint64_t seed, bool reverberant) {
  std::mt19937_64 rng = MakeRng(seed, 0x726f6fu);
  std::uniform_real_distribution<double> lx(4.0, 8.0), ly(4.0, 7.0), lz(2.5, 3.5),
      t60(0.04, 0.2);
  Vec3 dims{lx(rng), ly(rng), lz(rng)};
  const double rt60 = t60(rng);
  return RoomSpec::Centered(dims, reverberant ? rt60 : 0.0);
}

}  // namespace sdnet::datasim
