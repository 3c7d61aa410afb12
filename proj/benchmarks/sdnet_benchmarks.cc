// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <torch/torch.h>

#include "sdnet/datasim/rir.h"
#include "sdnet/frontend/feature_extractor.h"
#include "sdnet/objectives/metrics.h"
#include "sdnet/separation/tcn.h"

namespace {

// Inter-channel attention over one second of frames; arg is the channel count.
void BM_InterChannelAttention(benchmark::State &state) {
  torch::manual_seed(0);
  torch::NoGradGuard ng;
  const torch::Tensor e1 = torch::randn({1, 399, state.range(0)});
  const torch::Tensor e2 = torch::randn({1, 399, state.range(0)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdnet::frontend::ComputeInterChannelAttention(e1, e2).features);
  }
}
BENCHMARK(BM_InterChannelAttention)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

// Separator TCN over one second; arg is blocks (R = 8 layers each).
void BM_TcnForward(benchmark::State &state) {
  torch::manual_seed(0);
  torch::NoGradGuard ng;
  sdnet::separation::SeparatorOptions opts;
  opts.blocks = static_cast<int>(state.range(0));
  sdnet::separation::Tcn tcn(opts);
  const torch::Tensor x = torch::randn({1, 399, opts.bottleneck_dim});
  for (auto _ : state) benchmark::DoNotOptimize(tcn->forward(x));
}
BENCHMARK(BM_TcnForward)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

// Image-method impulse response; arg is rt60 in milliseconds.
void BM_GenerateRir(benchmark::State &state) {
  const auto room = sdnet::datasim::RoomSpec::Centered({6.0, 5.0, 3.0},
                                                       static_cast<double>(state.range(0)) / 1000);
  const sdnet::datasim::Vec3 src{1.5, 1.2, 1.6};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdnet::datasim::GenerateRir(room, src, room.mics[0]));
  }
}
BENCHMARK(BM_GenerateRir)->Arg(0)->Arg(200)->Unit(benchmark::kMillisecond);

// Projection SDR on one second of audio; arg is the filter length.
void BM_Sdr(benchmark::State &state) {
  std::mt19937_64 rng(0);
  std::normal_distribution<double> n;
  std::vector<double> ref(8000), est(8000);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ref[i] = n(rng);
    est[i] = ref[i] + 0.3 * n(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sdnet::objectives::Sdr(est, ref, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Sdr)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
