// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdlib>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "harness_fixtures.h"
#include "sdnet/errors.h"
#include "sdnet/harness/checkpoint.h"
#include "sdnet/harness/evaluator.h"
#include "sdnet/harness/plot.h"
#include "sdnet/harness/trainer.h"
#include "sdnet/waveform.h"

namespace sdnet::harness {
namespace {

using sdnet::testing::ReadFile;
using sdnet::testing::ScratchDir;
using sdnet::testing::SimulateDataset;
using sdnet::testing::TinyConfig;

const std::filesystem::path kConfigDir = SDNET_CONFIG_DIR;

bool SameTensors(const std::vector<torch::Tensor> &a, const std::vector<torch::Tensor> &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!torch::equal(a[i], b[i])) return false;
  }
  return true;
}

TEST(RunConfig, DefaultsReproducePaperSetup) {
  const RunConfig c;
  const auto &m = c.model;
  EXPECT_EQ(m.frontend.channels, 256);
  EXPECT_EQ(m.frontend.kernel, 40);
  EXPECT_EQ(m.frontend.stride, 20);
  EXPECT_EQ(m.inference.encoder_layers, 3);
  EXPECT_EQ(m.inference.encoder_hidden, 256);
  EXPECT_EQ(m.inference.decoder_layers, 3);
  EXPECT_EQ(m.inference.decoder_hidden, 512);
  EXPECT_EQ(m.inference.embedding_dim, 256);
  EXPECT_EQ(m.inference.n_directions, 37);
  EXPECT_EQ(m.separator.blocks, 4);
  EXPECT_EQ(m.separator.layers_per_block, 8);
  EXPECT_EQ(m.separator.decoder_kernel, 40);
  EXPECT_EQ(m.separator.decoder_stride, 20);
  EXPECT_EQ(c.loss.lambda, 5.0);
  EXPECT_EQ(c.eval.beam_width, 3);
  EXPECT_NO_THROW(c.Validate());
}

TEST(RunConfig, GoldenArchitectureHash) {
  EXPECT_EQ(RunConfig{}.ArchitectureHash(), kPaperArchitectureHash)
      << RunConfig{}.ArchitectureText();
  RunConfig c;
  c.loss.lambda = 4.0;
  EXPECT_NE(c.ArchitectureHash(), kPaperArchitectureHash);
  EXPECT_EQ(c.ModelHash(), RunConfig{}.ModelHash());
  c.model.frontend.use_iac = false;
  EXPECT_NE(c.ModelHash(), RunConfig{}.ModelHash());
}

TEST(RunConfig, ShippedConfigsLoad) {
  const RunConfig def = RunConfig::Load(kConfigDir / "default.toml");
  EXPECT_EQ(def.ArchitectureText(), RunConfig{}.ArchitectureText());
  const RunConfig desk = RunConfig::Load(kConfigDir / "desk.toml");
  EXPECT_EQ(desk.model.frontend.channels, 128);
  EXPECT_EQ(desk.data.mode, "2&3");
}

TEST(RunConfig, TomlRoundTrip) {
  ScratchDir dir("cfg");
  for (const RunConfig &c : {RunConfig{}, TinyConfig(dir.path())}) {
    const std::string text = c.ToToml();
    const RunConfig back = RunConfig::Parse(text);
    EXPECT_EQ(back.ToToml(), text);
    EXPECT_EQ(back.ModelHash(), c.ModelHash());
  }
}

TEST(RunConfig, RejectsBadInput) {
  EXPECT_THROW(RunConfig::Parse("[model]\nencoder_chanels = 3\n"), ConfigError);
  EXPECT_THROW(RunConfig::Parse("[modle]\n"), ConfigError);
  EXPECT_THROW(RunConfig::Parse("[model\n"), ConfigError);
  EXPECT_THROW(RunConfig::Parse("[model]\nencoder_channels = \"wide\"\n"), ConfigError);
  EXPECT_THROW(RunConfig::Parse("[model]\nn_directions = 36\n"), ConfigError);
  EXPECT_THROW(RunConfig::Parse("[model]\ntcn_norm = \"batch\"\n"), ConfigError);
  EXPECT_THROW(
      RunConfig::Parse("[data]\ntrain_speakers = [0, 1, 2]\ntest_speakers = [2, 3]\n"),
      ConfigError);
  EXPECT_THROW(RunConfig::Load("/nonexistent/sdnet.toml"), IoError);
}

TEST(RunConfig, DataDirOverride) {
  DataConfig d;
  d.root = "somewhere";
  ::setenv("SDNET_DATA_DIR", "/tmp/elsewhere", 1);
  EXPECT_EQ(d.Root(), std::filesystem::path("/tmp/elsewhere"));
  ::unsetenv("SDNET_DATA_DIR");
  EXPECT_EQ(d.Root(), std::filesystem::path("somewhere"));
}

TEST(Simulate, DeterministicDisjointAndMixedCounts) {
  ScratchDir a("sim_a"), b("sim_b");
  RunConfig ca = TinyConfig(a.path()), cb = TinyConfig(b.path());
  for (RunConfig *c : {&ca, &cb}) {
    c->data.mode = "2&3";
    c->data.duration_seconds = 0.1;
    c->data.train_mixtures = 4;
    c->data.dev_mixtures = 2;
    c->data.test_mixtures = 3;
  }
  const auto sa = CmdSimulate(ca);
  CmdSimulate(cb);
  const auto train_a = datasim::ReadManifest(sa.train_manifest);
  EXPECT_EQ(train_a, datasim::ReadManifest(b.path() / "data" / "train.jsonl"));
  EXPECT_EQ(ReadFile(a.path() / "data" / train_a[1].mixture_path),
            ReadFile(b.path() / "data" / train_a[1].mixture_path));

  std::set<int> counts, train_spk, test_spk;
  for (const auto &e : train_a) {
    counts.insert(static_cast<int>(e.speaker_labels.size()));
    train_spk.insert(e.speaker_labels.begin(), e.speaker_labels.end());
  }
  for (const auto &e : datasim::ReadManifest(sa.test_manifest)) {
    test_spk.insert(e.speaker_labels.begin(), e.speaker_labels.end());
  }
  EXPECT_EQ(counts, (std::set<int>{2, 3}));
  for (int s : test_spk) EXPECT_EQ(train_spk.count(s), 0u) << "speaker " << s;
  EXPECT_EQ(datasim::ReadManifest(sa.dev_manifest).size(), 2u);
}

TEST(Simulate, OverlappingSpeakersRejected) {
  ScratchDir dir("sim_overlap");
  RunConfig c = TinyConfig(dir.path());
  c.data.train_speakers = {0, 1, 2, 3};
  c.data.test_speakers = {3, 4};
  EXPECT_THROW(CmdSimulate(c), ConfigError);
}

class TrainFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new ScratchDir("train");
    config_ = new RunConfig(TinyConfig(dir_->path()));
    data_ = new Dataset(SimulateDataset(*config_, "train", 4));
  }
  static void TearDownTestSuite() {
    delete data_;
    delete config_;
    delete dir_;
  }
  static ScratchDir *dir_;
  static RunConfig *config_;
  static Dataset *data_;
};
ScratchDir *TrainFixture::dir_ = nullptr;
RunConfig *TrainFixture::config_ = nullptr;
Dataset *TrainFixture::data_ = nullptr;

TEST_F(TrainFixture, LossDescendsOnToySet) {
  Trainer t(*config_, *data_);
  std::vector<double> losses;
  for (int i = 0; i < 200; ++i) losses.push_back(t.Step().loss.total);
  double head = 0.0, tail = 0.0;
  for (int i = 0; i < 10; ++i) {
    head += losses[i] / 10;
    tail += losses[190 + i] / 10;
  }
  EXPECT_LT(tail, losses[0]);
  EXPECT_LT(tail, head - 1.0);
}

TEST_F(TrainFixture, FixedSeedIsBitwiseReproducible) {
  Trainer a(*config_, *data_), b(*config_, *data_);
  for (int i = 0; i < 6; ++i) {
    const auto ra = a.Step(), rb = b.Step();
    EXPECT_EQ(ra.loss.total, rb.loss.total) << "step " << i;
    EXPECT_EQ(ra.loss.sisnr_ss, rb.loss.sisnr_ss);
  }
  EXPECT_TRUE(SameTensors(a.model()->parameters(), b.model()->parameters()));
}

TEST_F(TrainFixture, ResumeMatchesUninterruptedStep) {
  const auto ckpt = dir_->path() / "resume.pt";
  Trainer a(*config_, *data_);
  for (int i = 0; i < 3; ++i) a.Step();
  a.Save(ckpt);
  const auto ra = a.Step();

  Trainer b(*config_, *data_);
  b.Step();  // perturb the fresh state before restoring
  b.Resume(ckpt);
  EXPECT_EQ(b.step(), 3);
  const auto rb = b.Step();
  EXPECT_EQ(ra.loss.total, rb.loss.total);
  EXPECT_EQ(ra.loss.ce_spk, rb.loss.ce_spk);
  EXPECT_TRUE(SameTensors(a.model()->parameters(), b.model()->parameters()));
}

TEST_F(TrainFixture, CheckpointRejectsOtherArchitecture) {
  const auto ckpt = dir_->path() / "arch.pt";
  Trainer a(*config_, *data_);
  a.Save(ckpt);
  RunConfig wide = *config_;
  wide.model.inference.decoder_hidden = 24;
  separation::SdnetModel m(wide.model);
  EXPECT_THROW(LoadCheckpoint(ckpt, m, nullptr, wide.ModelHash()), ConfigError);
  EXPECT_THROW(LoadCheckpoint(dir_->path() / "missing.pt", m, nullptr, wide.ModelHash()),
               IoError);
}

TEST_F(TrainFixture, ZeroLambdaLeavesTokensUntrained) {
  auto final_ce = [&](double lambda) {
    RunConfig c = *config_;
    c.loss.lambda = lambda;
    Trainer t(c, *data_);
    double ce = 0.0;
    for (int i = 0; i < 150; ++i) {
      const auto r = t.Step();
      if (i >= 130) ce += (r.loss.ce_spk + r.loss.ce_dir) / 20;
    }
    return ce;
  };
  EXPECT_GT(final_ce(0.0), final_ce(5.0) + 0.5);
}

TEST_F(TrainFixture, RunWritesLogsPlotsAndCheckpoints) {
  RunConfig c = *config_;
  c.train.max_steps = 12;
  c.train.eval_every = 6;
  const auto out = dir_->path() / "run_logs";
  Trainer t(c, *data_, *data_);
  std::vector<int64_t> seen;
  t.Run(out, [&](const DevRecord &d) {
    seen.push_back(d.step);
    EXPECT_GE(d.count_accuracy, 0.0);
    EXPECT_LE(d.count_accuracy, 1.0);
    return false;
  });
  EXPECT_EQ(seen, (std::vector<int64_t>{6, 12}));
  for (const char *f : {"train_log.csv", "dev_log.csv", "loss_curve.svg", "ce_curve.svg",
                        "dev_curve.svg", "last.pt", "best.pt", "config.toml"}) {
    EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
  }
  const std::string log = ReadFile(out / "train_log.csv");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 13);
  EXPECT_EQ(RunConfig::Load(out / "config.toml").ToToml(), c.ToToml());
}

TEST_F(TrainFixture, EarlyStopFromDevCallback) {
  RunConfig c = *config_;
  c.train.max_steps = 50;
  c.train.eval_every = 2;
  Trainer t(c, *data_, *data_);
  t.Run(dir_->path() / "run_stop", [](const DevRecord &d) { return d.step >= 4; });
  EXPECT_EQ(t.step(), 4);
}

TEST_F(TrainFixture, DivergenceKeepsLastGoodCheckpoint) {
  RunConfig c = *config_;
  c.train.max_steps = 2;
  const auto out = dir_->path() / "run_nan";
  Trainer good(c, *data_);
  good.Run(out);
  const std::string saved = ReadFile(out / "last.pt");

  std::vector<Example> poisoned = data_->examples();
  for (auto &ex : poisoned) ex.mixture = ex.mixture.clone().fill_(std::nanf(""));
  RunConfig more = c;
  more.train.max_steps = 4;
  Trainer bad(more, Dataset(poisoned));
  bad.Resume(out / "last.pt");
  EXPECT_THROW(bad.Run(out), DivergenceError);
  EXPECT_EQ(ReadFile(out / "last.pt"), saved);
  EXPECT_EQ(bad.step(), 2);
  EXPECT_TRUE(SameTensors(bad.model()->parameters(), good.model()->parameters()));
}

TEST_F(TrainFixture, EvaluationReportAndOracleBound) {
  // The bound is a property of a fitted model; a wider decoder fits the four
  // examples in about a thousand steps.
  RunConfig c = *config_;
  c.model.inference.decoder_hidden = 32;
  c.model.inference.encoder_hidden = 16;
  c.model.inference.embedding_dim = 16;
  c.model.separator.bottleneck_dim = 16;
  c.train.learning_rate = 3e-3;
  Trainer t(c, *data_);
  for (int i = 0; i < 1000; ++i) t.Step();
  auto &model = t.model();
  model->eval();
  EvalOptions greedy{inference::DecodeMode::kGreedy, 1, true};
  EvalOptions oracle{inference::DecodeMode::kTeacherForced, 1, true};
  const EvalReport learned = Evaluate(model, *data_, greedy);
  const EvalReport bound = Evaluate(model, *data_, oracle);
  ASSERT_EQ(learned.records.size(), data_->size());
  EXPECT_GE(learned.count_accuracy, 0.0);
  EXPECT_LE(learned.count_accuracy, 1.0);
  EXPECT_EQ(bound.count_accuracy, 1.0);
  EXPECT_GE(bound.mean_sisnri, learned.mean_sisnri - 1e-9);

  const auto out = dir_->path() / "report";
  WriteReport(learned, out);
  const std::string lines = ReadFile(out / "per_example.jsonl");
  EXPECT_EQ(std::count(lines.begin(), lines.end(), '\n'), 4);
  const auto first = nlohmann::json::parse(lines.substr(0, lines.find('\n')));
  for (const char *k : {"example_id", "sisnri", "sdri", "n_true", "n_pred"}) {
    EXPECT_TRUE(first.contains(k)) << k;
  }
  EXPECT_TRUE(std::filesystem::exists(out / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(out / "count_accuracy.svg"));
}

TEST_F(TrainFixture, ScoreExamplePairsPositionally) {
  const Example &ex = data_->at(0);
  auto row = [&](int i) {
    const torch::Tensor r = ex.targets[i].to(torch::kDouble).contiguous();
    return std::vector<double>(r.data_ptr<double>(), r.data_ptr<double>() + r.numel());
  };
  const auto perfect = ScoreExample(ex, {row(0), row(1)}, true);
  EXPECT_EQ(perfect.n_pred, 2);
  EXPECT_EQ(perfect.assignment, (std::vector<int>{0, 1}));
  EXPECT_GT(perfect.sisnri, 10.0);
  const auto swapped = ScoreExample(ex, {row(1), row(0)}, false);
  EXPECT_LT(swapped.sisnri, perfect.sisnri);
  const auto missing = ScoreExample(ex, {row(0)}, false);
  EXPECT_EQ(missing.assignment, (std::vector<int>{0, -1}));
  EXPECT_EQ(missing.source_sisnri[1], 0.0);
  EXPECT_NEAR(missing.sisnri, perfect.source_sisnri[0] / 2, 1e-9);
}

TEST_F(TrainFixture, EvalCommandNamesMissingManifest) {
  RunConfig c = *config_;
  c.eval.manifest = "nowhere";
  try {
    CmdEval(c, dir_->path() / "x.pt");
    FAIL() << "expected IoError";
  } catch (const IoError &e) {
    EXPECT_NE(std::string(e.what()).find("nowhere.jsonl"), std::string::npos);
  }
}

TEST_F(TrainFixture, SeparateWritesDeterministicSidecars) {
  Trainer t(*config_, *data_);
  for (int i = 0; i < 20; ++i) t.Step();
  const auto ckpt = dir_->path() / "sep.pt";
  t.Save(ckpt);
  const Example &ex = data_->at(0);
  const torch::Tensor mix = ex.mixture.to(torch::kDouble).contiguous();
  const int64_t n = mix.size(1);
  std::vector<double> l(mix[0].data_ptr<double>(), mix[0].data_ptr<double>() + n),
      r(mix[1].data_ptr<double>(), mix[1].data_ptr<double>() + n);
  const auto wav = dir_->path() / "mix.wav";
  WriteWav(wav, WaveformSegment(kSampleRate, {l, r}));

  const auto out1 = CmdSeparate(*config_, ckpt, wav, dir_->path() / "sep1", 3);
  const auto out2 = CmdSeparate(*config_, ckpt, wav, dir_->path() / "sep2", 3);
  ASSERT_EQ(out1.size(), out2.size());
  for (std::size_t i = 0; i < out1.size(); ++i) {
    EXPECT_EQ(ReadFile(out1[i]), ReadFile(out2[i]));
    const std::string side = ReadFile(std::filesystem::path(out1[i]).replace_extension(".json"));
    EXPECT_EQ(side, ReadFile(std::filesystem::path(out2[i]).replace_extension(".json")));
    const auto j = nlohmann::json::parse(side);
    EXPECT_GE(j["direction_token"].get<int>(), 0);
    EXPECT_LE(j["direction_token"].get<int>(), 36);
    EXPECT_TRUE(j.contains("log_score"));
    EXPECT_EQ(ReadWav(out1[i]).NumSamples(), static_cast<std::size_t>(n));
  }

  const auto mono = dir_->path() / "mono.wav";
  WriteWav(mono, WaveformSegment(kSampleRate, {l}));
  try {
    CmdSeparate(*config_, ckpt, mono, dir_->path() / "sep3", 3);
    FAIL() << "expected UsageError";
  } catch (const UsageError &e) {
    EXPECT_NE(std::string(e.what()).find("stereo"), std::string::npos);
  }
}

TEST(Plot, SvgDocuments) {
  const std::string line =
      LinePlotSvg({"Loss", "step", "value"}, {{"a", {0, 1, 2}, {3, 1, 2}}});
  EXPECT_EQ(line.rfind("<svg", 0), 0u);
  EXPECT_NE(line.find("Loss"), std::string::npos);
  EXPECT_NE(line.find("</svg>"), std::string::npos);
  EXPECT_NE(BarChartSvg({"Acc", "n", "acc"}, {"2", "3"}, {0.5, 1.0}).find("</svg>"),
            std::string::npos);
  EXPECT_NE(HistogramSvg({"H", "x", "n"}, {1, 2, 2, 3}).find("</svg>"), std::string::npos);
  EXPECT_THROW(WriteText("/proc/sdnet/forbidden/x.svg", "x"), IoError);
}

}  // namespace
}  // namespace sdnet::harness
