// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/harness/commands.h"

#include <algorithm>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sdnet/datasim/mixture.h"
#include "sdnet/errors.h"
#include "sdnet/fs.h"
#include "sdnet/harness/checkpoint.h"
#include "sdnet/harness/dataset.h"
#include "sdnet/harness/plot.h"
#include "sdnet/harness/trainer.h"
#include "sdnet/log.h"
#include "sdnet/waveform.h"

namespace sdnet::harness {

namespace {

uint64_t SplitSeed(uint64_t seed, const std::string &split, int index) {
  return datasim::SplitMix64(seed ^ datasim::SplitMix64(Fnv1a64(split) + index));
}

int SourcesFor(const std::string &mode, int index) {
  if (mode == "2") return 2;
  if (mode == "3") return 3;
  return index % 2 == 0 ? 2 : 3;
}

std::string Stem(int index) {
  std::ostringstream os;
  os << "ex" << std::setw(5) << std::setfill('0') << index;
  return os.str();
}

separation::SdnetModel LoadModel(const RunConfig &config,
                                 const std::filesystem::path &checkpoint) {
  torch::set_num_threads(config.train.threads);
  separation::SdnetModel model(config.model);
  LoadCheckpoint(checkpoint, model, nullptr, config.ModelHash());
  model->eval();
  return model;
}

inference::DecodeMode ParseDecode(const std::string &decode) {
  if (decode == "greedy") return inference::DecodeMode::kGreedy;
  if (decode == "oracle") return inference::DecodeMode::kTeacherForced;
  return inference::DecodeMode::kBeam;
}

}  // namespace

std::filesystem::path ManifestPath(const DataConfig &data, const std::string &split) {
  if (split.size() > 6 && split.ends_with(".jsonl")) return split;
  return data.Root() / (split + ".jsonl");
}

std::vector<datasim::ManifestEntry> SimulateSplit(const DataConfig &data,
                                                  const std::vector<int> &speakers,
                                                  const std::string &split, int count,
                                                  const std::filesystem::path &root) {
  datasim::MixtureOptions opts;
  opts.duration_s = data.duration_seconds;
  opts.synth.n_speakers =
      std::max(opts.synth.n_speakers, *std::max_element(speakers.begin(), speakers.end()) + 1);
  std::vector<datasim::ManifestEntry> entries;
  for (int i = 0; i < count; ++i) {
    const uint64_t seed = SplitSeed(data.seed, split, i);
    std::mt19937_64 rng(seed);
    std::vector<int> pool = speakers;
    const int n = SourcesFor(data.mode, i);
    std::vector<int> chosen;
    for (int k = 0; k < n; ++k) {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      const std::size_t j = pick(rng);
      chosen.push_back(pool[j]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    const datasim::RoomSpec room =
        datasim::SampleRoom(datasim::SplitMix64(seed + 1), data.reverberant);
    const datasim::MixtureExample ex =
        datasim::SimulateMixture(chosen, room, datasim::SplitMix64(seed + 2), opts);
    datasim::ManifestEntry e = datasim::SaveExample(ex, root / split, Stem(i));
    e.mixture_path = split + "/" + e.mixture_path;
    for (auto &p : e.target_paths) p = split + "/" + p;
    entries.push_back(std::move(e));
  }
  return entries;
}

SimulateSummary CmdSimulate(const RunConfig &config) {
  config.Validate();
  const DataConfig &data = config.data;
  const auto train_spk = data.TrainSpeakers(), test_spk = data.TestSpeakers();
  const std::set<int> train_set(train_spk.begin(), train_spk.end());
  for (int s : test_spk) {
    if (train_set.count(s)) {
      throw ConfigError("speaker " + std::to_string(s) + " is in both train and test splits");
    }
  }
  const auto root = data.Root();
  CreateDirectories(root);
  SimulateSummary out;
  out.train_manifest = root / "train.jsonl";
  out.dev_manifest = root / "dev.jsonl";
  out.test_manifest = root / "test.jsonl";
  log::Info("simulating ", data.train_mixtures, "/", data.dev_mixtures, "/",
            data.test_mixtures, " mixtures into ", root.string());
  datasim::WriteManifest(out.train_manifest,
                         SimulateSplit(data, train_spk, "train", data.train_mixtures, root));
  datasim::WriteManifest(out.dev_manifest,
                         SimulateSplit(data, train_spk, "dev", data.dev_mixtures, root));
  datasim::WriteManifest(out.test_manifest,
                         SimulateSplit(data, test_spk, "test", data.test_mixtures, root));
  return out;
}

void CmdTrain(const RunConfig &config, const std::filesystem::path &checkpoint) {
  Dataset train = Dataset::Load(ManifestPath(config.data, "train"));
  std::optional<Dataset> dev;
  const auto dev_path = ManifestPath(config.data, "dev");
  if (std::filesystem::exists(dev_path)) dev = Dataset::Load(dev_path);
  log::Info("training on ", train.size(), " mixtures", dev ? " with a dev set" : "");
  Trainer trainer(config, std::move(train), std::move(dev));
  if (!checkpoint.empty()) {
    trainer.Resume(checkpoint);
    log::Info("resumed at step ", trainer.step());
  }
  trainer.Run(config.train.out_dir);
}

EvalReport CmdEval(const RunConfig &config, const std::filesystem::path &checkpoint) {
  const auto manifest = ManifestPath(config.data, config.eval.manifest);
  if (!std::filesystem::exists(manifest)) throw IoError("manifest not found: " + manifest.string());
  separation::SdnetModel model = LoadModel(config, checkpoint);
  const Dataset data = Dataset::Load(manifest, config.eval.max_examples);
  EvalOptions opts;
  opts.mode = ParseDecode(config.eval.decode);
  opts.beam_width = config.eval.beam_width;
  const EvalReport report = Evaluate(model, data, opts);
  WriteReport(report, config.eval.out_dir);
  log::Info("evaluated ", report.records.size(), " examples: SI-SNRi ", report.mean_sisnri,
            " dB, SDRi ", report.mean_sdri, " dB, count accuracy ", report.count_accuracy);
  return report;
}

std::vector<std::filesystem::path> CmdSeparate(const RunConfig &config,
                                               const std::filesystem::path &checkpoint,
                                               const std::filesystem::path &input,
                                               const std::filesystem::path &out_dir,
                                               int beam_width) {
  const WaveformSegment wav = ReadWav(input);
  if (wav.NumChannels() != 2) {
    throw UsageError(input.string() + " has " + std::to_string(wav.NumChannels()) +
                     " channel(s); sdnet separate needs a two-channel (stereo) 8 kHz recording");
  }
  if (wav.sample_rate != kSampleRate) {
    throw UsageError(input.string() + " is sampled at " + std::to_string(wav.sample_rate) +
                     " Hz; resample to 8000 Hz first");
  }
  separation::SdnetModel model = LoadModel(config, checkpoint);
  const auto dtype = model->parameters().front().scalar_type();
  torch::Tensor mix = torch::empty({2, static_cast<int64_t>(wav.NumSamples())}, torch::kDouble);
  for (int c = 0; c < 2; ++c) {
    std::copy(wav.channels[c].begin(), wav.channels[c].end(), mix[c].data_ptr<double>());
  }
  const auto out = separation::Separate(model, mix.to(dtype), inference::DecodeMode::kBeam,
                                        beam_width);
  CreateDirectories(out_dir);
  const std::string stem = input.stem().string();
  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < out.sources.size(); ++i) {
    const auto &src = out.sources[i];
    std::vector<double> samples = src.waveform;
    const double peak = std::max(
        1.0, std::abs(*std::max_element(samples.begin(), samples.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); })));
    for (double &v : samples) v /= peak;
    const auto wav_path = out_dir / (stem + ".s" + std::to_string(i) + ".wav");
    WriteWav(wav_path, WaveformSegment(kSampleRate, {samples}));
    nlohmann::json sidecar = {{"source_index", i},
                              {"speaker_token", src.speaker_token},
                              {"direction_token", src.direction_token},
                              {"azimuth_deg", src.direction_token * datasim::kAzimuthStepDeg},
                              {"log_score", out.inference.log_score},
                              {"truncated", out.inference.truncated}};
    WriteText(out_dir / (stem + ".s" + std::to_string(i) + ".json"), sidecar.dump(2) + "\n");
    written.push_back(wav_path);
  }
  log::Info("wrote ", written.size(), " source(s) to ", out_dir.string());
  return written;
}

}  // namespace sdnet::harness
