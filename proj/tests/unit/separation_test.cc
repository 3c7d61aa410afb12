// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <gtest/gtest.h>

#include "oracles.h"
#include "sdnet/errors.h"
#include "sdnet/separation/model.h"

namespace sdnet::separation {
namespace {

using sdnet::testing::MicroModelOptions;

TEST(Bottleneck, ShapeAndAffinity) {
  torch::manual_seed(0);
  Bottleneck bn(512, 256);
  bn->to(torch::kDouble);
  torch::NoGradGuard ng;
  const torch::Tensor x = torch::randn({2, 7, 512}, torch::kDouble);
  const torch::Tensor y = torch::randn({2, 7, 512}, torch::kDouble);
  EXPECT_EQ(bn->forward(x).sizes(), (std::vector<int64_t>{2, 7, 256}));
  const torch::Tensor b = bn->forward(torch::zeros({1, 512}, torch::kDouble))[0];
  EXPECT_TRUE(torch::allclose(b, bn->proj->bias));
  EXPECT_TRUE(torch::allclose(bn->forward(x + y) - b, (bn->forward(x) - b) + (bn->forward(y) - b),
                              1e-12, 1e-12));
}

SeparatorOptions SmallSeparator(int blocks, int layers) {
  SeparatorOptions o;
  o.input_dim = 8;
  o.bottleneck_dim = 4;
  o.hidden_dim = 6;
  o.blocks = blocks;
  o.layers_per_block = layers;
  return o;
}

TEST(Tcn, GatesInUnitIntervalAndLengthPreserved) {
  torch::manual_seed(1);
  Tcn tcn(SmallSeparator(2, 3));
  torch::NoGradGuard ng;
  const torch::Tensor y = tcn->forward(5.0 * torch::randn({2, 33, 4}));
  EXPECT_EQ(y.sizes(), (std::vector<int64_t>{2, 33, 4}));
  EXPECT_GT(y.min().item<float>(), 0.0f);
  EXPECT_LT(y.max().item<float>(), 1.0f);
  EXPECT_EQ(tcn->forward(torch::randn({1, 4})).sizes(), (std::vector<int64_t>{1, 4}));
}

TEST(Tcn, ReceptiveField) {
  EXPECT_EQ(SeparatorOptions{}.ReceptiveFieldPerSide(), 1020);
  EXPECT_EQ(SmallSeparator(1, 3).ReceptiveFieldPerSide(), 7);
}

TEST(Tcn, ChannelNormInfluenceStopsAtReceptiveField) {
  torch::manual_seed(2);
  SeparatorOptions o = SmallSeparator(4, 8);
  Tcn tcn(o);
  tcn->to(torch::kDouble);
  const int64_t rf = o.ReceptiveFieldPerSide(), T = 2 * rf + 61, t0 = rf + 30;
  // Edge sensitivities are far below one ulp of the activations, so probe the
  // Jacobian row of one output frame instead of differencing outputs.
  const torch::Tensor x = torch::randn({1, T, 4}, torch::kDouble).requires_grad_(true);
  const torch::Tensor probe = torch::randn({4}, torch::kDouble);
  (tcn->forward(x)[0][t0] * probe).sum().backward();
  const torch::Tensor g = x.grad()[0].abs().sum(-1);
  EXPECT_GT(g[t0 - rf].item<double>(), 0.0);
  EXPECT_GT(g[t0 + rf].item<double>(), 0.0);
  EXPECT_EQ(g.narrow(0, 0, t0 - rf).max().item<double>(), 0.0);
  EXPECT_EQ(g.narrow(0, t0 + rf + 1, T - t0 - rf - 1).max().item<double>(), 0.0);
}

TEST(Tcn, GlobalNormCouplesAllFrames) {
  torch::manual_seed(3);
  SeparatorOptions o = SmallSeparator(1, 1);
  o.norm = NormKind::kGlobal;
  Tcn tcn(o);
  tcn->to(torch::kDouble);
  torch::NoGradGuard ng;
  const torch::Tensor x = torch::randn({1, 40, 4}, torch::kDouble);
  torch::Tensor x2 = x.clone();
  x2[0][0] += 3.0;
  EXPECT_GT((tcn->forward(x2) - tcn->forward(x))[0][39].abs().sum().item<double>(), 0.0);
  EXPECT_THROW(ParseNormKind("batch"), DomainError);
  EXPECT_EQ(ParseNormKind("gln"), NormKind::kGlobal);
}

TEST(ApplyMask, IdentityZeroAndScaling) {
  torch::manual_seed(4);
  const torch::Tensor f = torch::randn({2, 5, 4}, torch::kDouble);
  const torch::Tensor g = torch::rand({2, 5, 4}, torch::kDouble);
  const torch::Tensor m = torch::randn({2, 4}, torch::kDouble);
  EXPECT_TRUE(torch::equal(ApplyMask(f, torch::ones_like(f), torch::ones({4}, torch::kDouble)), f));
  EXPECT_EQ(ApplyMask(f, g, torch::zeros({2, 4}, torch::kDouble)).abs().max().item<double>(), 0.0);
  EXPECT_TRUE(torch::allclose(ApplyMask(f, g, 3.0 * m), 3.0 * ApplyMask(f, g, m)));
  const torch::Tensor z = ApplyMask(f, g, m);
  EXPECT_NEAR(z[1][2][3].item<double>(),
              f[1][2][3].item<double>() * g[1][2][3].item<double>() * m[1][3].item<double>(),
              1e-15);
  EXPECT_THROW(ApplyMask(f, g, torch::ones({3}, torch::kDouble)), DomainError);
  EXPECT_THROW(ApplyMask(f, g.narrow(1, 0, 4), m), DomainError);
  EXPECT_THROW(ApplyMask(f, g, torch::ones({3, 4}, torch::kDouble)), DomainError);
}

TEST(WaveformDecoder, LengthZeroAndHomogeneity) {
  torch::manual_seed(5);
  WaveformDecoder dec(256, 40, 20, false);
  dec->to(torch::kDouble);
  torch::NoGradGuard ng;
  EXPECT_EQ(dec->OutputLength(399), 8000);
  const torch::Tensor z = torch::randn({399, 256}, torch::kDouble);
  EXPECT_EQ(dec->forward(z).sizes(), (std::vector<int64_t>{8000}));
  EXPECT_EQ(dec->forward(torch::zeros({2, 399, 256}, torch::kDouble)).abs().max().item<double>(),
            0.0);
  EXPECT_TRUE(torch::allclose(dec->forward(-2.0 * z), -2.0 * dec->forward(z), 1e-12, 1e-12));
}

TEST(ModelOptions, Validation) {
  EXPECT_NO_THROW(ModelOptions::Paper().Validate());
  EXPECT_NO_THROW(MicroModelOptions().Validate());
  ModelOptions o = MicroModelOptions();
  o.separator.input_dim = 10;
  EXPECT_THROW(o.Validate(), ConfigError);
  o = MicroModelOptions();
  o.inference.embedding_dim = 4;
  EXPECT_THROW(o.Validate(), ConfigError);
  o = MicroModelOptions();
  o.separator.decoder_stride = 2;
  EXPECT_THROW(o.Validate(), ConfigError);
}

class MicroModelTest : public ::testing::Test {
 protected:
  void SetUp() override {
    torch::manual_seed(6);
    model = SdnetModel(MicroModelOptions());
    model->to(torch::kDouble);
    mixture = torch::randn({2, 81}, torch::kDouble);
  }
  SdnetModel model{nullptr};
  torch::Tensor mixture;
};

TEST_F(MicroModelTest, TeacherForcedRowsAndLength) {
  const auto out = model->ForwardTeacherForced(torch::stack({mixture, mixture.flip(1)}),
                                               {{0, 1}, {2, 0, 1}}, {{1, 2}, {0, 1, 2}});
  EXPECT_EQ(out.separated.sizes(), (std::vector<int64_t>{5, 81}));
  ASSERT_EQ(out.rows.size(), 5u);
  EXPECT_EQ(out.rows[2], (std::pair<int64_t, int64_t>{1, 0}));
}

TEST_F(MicroModelTest, SeparateCountsAndLengths) {
  for (auto mode : {inference::DecodeMode::kGreedy, inference::DecodeMode::kBeam}) {
    const auto out = Separate(model, mixture, mode, 3);
    EXPECT_EQ(static_cast<int>(out.sources.size()), out.inference.NumSources());
    for (const auto &s : out.sources) EXPECT_EQ(s.waveform.size(), 81u);
  }
  const auto tf = Separate(model, mixture, inference::DecodeMode::kTeacherForced, 1,
                           OracleLabels{{2, 0}, {1, 1}});
  ASSERT_EQ(tf.sources.size(), 2u);
  EXPECT_EQ(tf.sources[0].speaker_token, 2);
  EXPECT_EQ(tf.sources[1].direction_token, 1);
  EXPECT_THROW(Separate(model, mixture, inference::DecodeMode::kTeacherForced), UsageError);
  EXPECT_THROW(Separate(model, mixture.narrow(0, 0, 1), inference::DecodeMode::kGreedy),
               DomainError);
}

TEST_F(MicroModelTest, SwappingMasksSwapsOutputs) {
  torch::NoGradGuard ng;
  const auto trunk = model->RunTrunk(mixture.unsqueeze(0));
  const torch::Tensor m = torch::randn({2, 6}, torch::kDouble);
  const torch::Tensor a = model->DecodeMasks(trunk, m, {0, 0}, 81);
  const torch::Tensor b = model->DecodeMasks(trunk, m.flip(0), {0, 0}, 81);
  EXPECT_TRUE(torch::allclose(a, b.flip(0), 0, 1e-15));
  EXPECT_FALSE(torch::allclose(a[0], a[1]));
  EXPECT_EQ(model->DecodeMasks(trunk, torch::zeros({0, 6}, torch::kDouble), {}, 81).size(0), 0);
}

TEST_F(MicroModelTest, EosFirstGivesNoSources) {
  {
    torch::NoGradGuard ng;
    model->inference->direction_decoder->w3->bias[3] = 100.0;
  }
  const auto out = Separate(model, mixture, inference::DecodeMode::kBeam, 3);
  EXPECT_TRUE(out.no_sources());
}

}  // namespace
}  // namespace sdnet::separation
