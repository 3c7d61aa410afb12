// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/separation/model.h"

#include <string>

#include "sdnet/errors.h"

namespace sdnet::separation {

void ModelOptions::Validate() const {
  auto require = [](bool ok, const std::string &what) {
    if (!ok) throw ConfigError("model: " + what);
  };
  require(frontend.channels > 0 && frontend.kernel > 0 && frontend.stride > 0,
          "encoder sizes must be positive");
  require(separator.input_dim == 2 * frontend.channels,
          "separator input width must be twice the encoder width");
  require(inference.input_dim == 3 * frontend.channels,
          "inference input width must be three times the encoder width");
  require(inference.embedding_dim == separator.bottleneck_dim,
          "token embedding width must equal the bottleneck width");
  require(separator.decoder_kernel == frontend.kernel &&
              separator.decoder_stride == frontend.stride,
          "waveform decoder must mirror the encoder kernel and stride");
  require(inference.max_steps >= 1, "max_steps must be at least 1");
  require(separator.blocks >= 1 && separator.layers_per_block >= 1, "empty TCN");
}

ModelOptions ModelOptions::Paper() {
  ModelOptions o;
  o.frontend = frontend::FrontendOptions{};
  o.inference = inference::InferenceOptions{};
  o.separator = SeparatorOptions{};
  return o;
}

SdnetModelImpl::SdnetModelImpl(const ModelOptions &opts) : opts_(opts) {
  opts_.Validate();
  frontend = register_module("frontend", frontend::FeatureExtractor(opts_.frontend));
  inference = register_module("inference", inference::InferenceModule(opts_.inference));
  bottleneck = register_module(
      "bottleneck", Bottleneck(opts_.separator.input_dim, opts_.separator.bottleneck_dim));
  tcn = register_module("tcn", Tcn(opts_.separator));
  decoder = register_module(
      "decoder", WaveformDecoder(opts_.separator.bottleneck_dim, opts_.separator.decoder_kernel,
                                 opts_.separator.decoder_stride, opts_.separator.decoder_bias));
}

SdnetModelImpl::Trunk SdnetModelImpl::RunTrunk(const torch::Tensor &mixture) {
  Trunk trunk;
  trunk.features = frontend->forward(mixture);
  trunk.bottleneck = bottleneck->forward(trunk.features.separation_input);
  trunk.tcn_out = tcn->forward(trunk.bottleneck);
  return trunk;
}

torch::Tensor SdnetModelImpl::DecodeMasks(const Trunk &trunk, const torch::Tensor &masks,
                                          const std::vector<int64_t> &batch_index,
                                          int64_t length) {
  const auto E = trunk.bottleneck.size(-1);
  if (masks.size(0) == 0) {
    return torch::zeros({0, length}, trunk.bottleneck.options());
  }
  torch::Tensor index =
      torch::tensor(batch_index, torch::kLong).to(trunk.bottleneck.device());
  torch::Tensor z = ApplyMask(trunk.bottleneck.index_select(0, index),
                              trunk.tcn_out.index_select(0, index), masks.reshape({-1, E}));
  torch::Tensor wave = decoder->forward(z);
  const int64_t produced = wave.size(-1);
  if (produced > length) return wave.narrow(-1, 0, length);
  if (produced < length) return torch::constant_pad_nd(wave, {0, length - produced});
  return wave;
}

TeacherForcedSeparation SdnetModelImpl::ForwardTeacherForced(
    const torch::Tensor &mixture, const std::vector<std::vector<int>> &speakers,
    const std::vector<std::vector<int>> &directions, bool feed_labels) {
  const torch::Tensor mix = mixture.dim() == 2 ? mixture.unsqueeze(0) : mixture;
  Trunk trunk = RunTrunk(mix);
  TeacherForcedSeparation out;
  torch::Tensor h = inference->EncodeContext(trunk.features.inference_input);
  out.inference = inference->TeacherForced(h, speakers, directions, feed_labels);

  std::vector<torch::Tensor> masks;
  std::vector<int64_t> batch_index;
  for (int64_t b = 0; b < mix.size(0); ++b) {
    for (int64_t t = 0; t < out.inference.num_sources[b]; ++t) {
      masks.push_back(out.inference.masks[b][t]);
      batch_index.push_back(b);
      out.rows.emplace_back(b, t);
    }
  }
  torch::Tensor stacked = masks.empty()
                              ? torch::zeros({0, opts_.separator.bottleneck_dim}, mix.options())
                              : torch::stack(masks);
  out.separated = DecodeMasks(trunk, stacked, batch_index, mix.size(-1));
  return out;
}

SeparationOutput Separate(SdnetModel &model, const torch::Tensor &mixture,
                          inference::DecodeMode mode, int beam_width,
                          const std::optional<OracleLabels> &labels) {
  if (mixture.dim() != 2 || mixture.size(0) != 2) {
    throw DomainError("Separate: expected a two-channel mixture [2, L]");
  }
  torch::NoGradGuard no_grad;
  auto trunk = model->RunTrunk(mixture.unsqueeze(0));
  torch::Tensor h = model->inference->EncodeContext(trunk.features.inference_input);

  SeparationOutput out;
  switch (mode) {
    case inference::DecodeMode::kGreedy:
      out.inference = model->inference->Greedy(h);
      break;
    case inference::DecodeMode::kBeam:
      out.inference = model->inference->BeamSearch(h, beam_width);
      break;
    case inference::DecodeMode::kTeacherForced:
      if (!labels) throw UsageError("Separate: teacher forcing needs oracle labels");
      out.inference = model->inference->TeacherForcedResult(h, labels->speakers,
                                                            labels->directions);
      break;
  }
  const int n = out.inference.NumSources();
  if (n == 0) return out;
  std::vector<torch::Tensor> masks;
  for (const auto &m : out.inference.masks) masks.push_back(m.sm);
  torch::Tensor wave = model->DecodeMasks(trunk, torch::stack(masks),
                                          std::vector<int64_t>(n, 0), mixture.size(-1))
                           .to(torch::kDouble)
                           .contiguous();
  for (int i = 0; i < n; ++i) {
    SeparatedSource src;
    const double *p = wave[i].data_ptr<double>();
    src.waveform.assign(p, p + wave.size(1));
    src.speaker_token = out.inference.masks[i].speaker_token;
    src.direction_token = out.inference.masks[i].direction_token;
    out.sources.push_back(std::move(src));
  }
  return out;
}

}  // namespace sdnet::separation
