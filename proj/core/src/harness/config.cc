// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/harness/config.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "sdnet/datasim/geometry.h"
#include "sdnet/errors.h"

namespace sdnet::harness {

namespace {

// Reads typed keys from one TOML table and rejects keys nobody asked for.
class Section {
 public:
  Section(const toml::table *table, std::string name) : table_(table), name_(std::move(name)) {}

  template <typename T>
  void Read(const std::string &key, T &dst) {
    seen_.insert(key);
    if (!table_) return;
    const toml::node *node = table_->get(key);
    if (!node) return;
    if constexpr (std::is_same_v<T, bool>) {
      auto v = node->value_exact<bool>();
      if (!v) Fail(key, "a boolean");
      dst = *v;
    } else if constexpr (std::is_integral_v<T>) {
      auto v = node->value_exact<int64_t>();
      if (!v) Fail(key, "an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (*v < 0) Fail(key, "a non-negative integer");
      }
      dst = static_cast<T>(*v);
    } else if constexpr (std::is_floating_point_v<T>) {
      auto v = node->value<double>();
      if (!v) Fail(key, "a number");
      dst = *v;
    } else if constexpr (std::is_same_v<T, std::string>) {
      auto v = node->value_exact<std::string>();
      if (!v) Fail(key, "a string");
      dst = *v;
    } else {
      const toml::array *arr = node->as_array();
      if (!arr) Fail(key, "an array of integers");
      dst.clear();
      for (const auto &item : *arr) {
        auto v = item.value_exact<int64_t>();
        if (!v) Fail(key, "an array of integers");
        dst.push_back(static_cast<int>(*v));
      }
    }
  }

  void RejectUnknown() const {
    if (!table_) return;
    for (const auto &[key, node] : *table_) {
      if (!seen_.count(std::string(key.str()))) {
        throw ConfigError("unknown key [" + name_ + "]." + std::string(key.str()));
      }
    }
  }

 private:
  [[noreturn]] void Fail(const std::string &key, const std::string &what) const {
    throw ConfigError("[" + name_ + "]." + key + " must be " + what);
  }

  const toml::table *table_;
  std::string name_;
  std::set<std::string> seen_;
};

std::string ActivationName(frontend::EncoderActivation a) {
  return a == frontend::EncoderActivation::kRelu ? "relu" : "linear";
}

frontend::EncoderActivation ParseActivation(const std::string &s) {
  if (s == "linear") return frontend::EncoderActivation::kLinear;
  if (s == "relu") return frontend::EncoderActivation::kRelu;
  throw ConfigError("[model].encoder_activation must be \"linear\" or \"relu\"");
}

std::string ReadoutName(inference::ReadoutActivation a) {
  return a == inference::ReadoutActivation::kRelu ? "relu" : "tanh";
}

inference::ReadoutActivation ParseReadout(const std::string &s) {
  if (s == "tanh") return inference::ReadoutActivation::kTanh;
  if (s == "relu") return inference::ReadoutActivation::kRelu;
  throw ConfigError("[model].readout must be \"tanh\" or \"relu\"");
}

std::string Quote(const std::string &s) {
  std::ostringstream os;
  os << std::quoted(s);
  return os.str();
}

std::string IntList(const std::vector<int> &v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + "]";
}

std::string Num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  std::string s = os.str();
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::vector<int> Range(int begin, int count) {
  std::vector<int> out(std::max(count, 0));
  for (int i = 0; i < count; ++i) out[i] = begin + i;
  return out;
}

}  // namespace

std::vector<int> DataConfig::TrainSpeakers() const {
  return train_speakers.empty() ? Range(0, n_train_speakers) : train_speakers;
}

std::vector<int> DataConfig::TestSpeakers() const {
  return test_speakers.empty() ? Range(n_train_speakers, n_test_speakers) : test_speakers;
}

std::filesystem::path DataConfig::Root() const {
  if (const char *env = std::getenv("SDNET_DATA_DIR"); env && *env) return env;
  return root;
}

uint64_t Fnv1a64(const std::string &text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void RunConfig::Validate() const {
  model.Validate();
  auto require = [](bool ok, const std::string &what) {
    if (!ok) throw ConfigError(what);
  };
  require(model.inference.n_directions == datasim::kNumDirections,
          "[model].n_directions must be " + std::to_string(datasim::kNumDirections));
  require(loss.lambda >= 0.0, "[loss].lambda must be non-negative");
  require(loss.clamp_db > 0.0, "[loss].clamp_db must be positive");
  require(train.learning_rate > 0.0, "[train].learning_rate must be positive");
  require(train.lr_factor > 0.0 && train.lr_factor <= 1.0, "[train].lr_factor must be in (0, 1]");
  require(train.batch_size >= 1, "[train].batch_size must be at least 1");
  require(train.segment_seconds * kSampleRate >= model.frontend.kernel,
          "[train].segment_seconds is shorter than one frame");
  require(train.grad_clip > 0.0, "[train].grad_clip must be positive");
  require(train.eval_every >= 1 && train.checkpoint_every >= 1 && train.log_every >= 1,
          "[train] intervals must be positive");
  require(train.threads >= 1, "[train].threads must be at least 1");
  require(data.mode == "2" || data.mode == "3" || data.mode == "2&3",
          "[data].mode must be \"2\", \"3\" or \"2&3\"");
  require(data.duration_seconds * kSampleRate >= model.frontend.kernel,
          "[data].duration_seconds is shorter than one frame");
  require(eval.decode == "beam" || eval.decode == "greedy" || eval.decode == "oracle",
          "[eval].decode must be \"beam\", \"greedy\" or \"oracle\"");
  require(eval.beam_width >= 1, "[eval].beam_width must be at least 1");

  const auto tr = data.TrainSpeakers(), te = data.TestSpeakers();
  const std::size_t needed = data.mode == "2" ? 2 : 3;
  require(tr.size() >= needed && te.size() >= needed,
          "[data] each split needs at least " + std::to_string(needed) + " speakers");
  std::set<int> train_set(tr.begin(), tr.end());
  require(train_set.size() == tr.size(), "[data].train_speakers contains duplicates");
  for (int s : te) {
    require(!train_set.count(s), "[data] speaker " + std::to_string(s) +
                                     " appears in both the train and test splits");
  }
  for (int s : tr) {
    require(s >= 0 && s < model.inference.n_speakers,
            "[data] train speaker " + std::to_string(s) + " exceeds [model].n_speakers");
  }
}

RunConfig RunConfig::Parse(const std::string &toml_text) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error &e) {
    throw ConfigError(std::string("invalid TOML: ") + std::string(e.description()) + " at line " +
                      std::to_string(e.source().begin.line));
  }
  for (const auto &[key, node] : root) {
    const std::string k(key.str());
    if (k != "model" && k != "loss" && k != "train" && k != "data" && k != "eval") {
      throw ConfigError("unknown section [" + k + "]");
    }
    if (!node.is_table()) throw ConfigError("[" + k + "] must be a table");
  }
  RunConfig c;
  {
    auto &f = c.model.frontend;
    auto &in = c.model.inference;
    auto &sep = c.model.separator;
    Section s(root["model"].as_table(), "model");
    std::string activation = ActivationName(f.activation), readout = ReadoutName(in.readout),
                norm = separation::NormKindName(sep.norm);
    s.Read("encoder_channels", f.channels);
    s.Read("encoder_kernel", f.kernel);
    s.Read("encoder_stride", f.stride);
    s.Read("encoder_bias", f.bias);
    s.Read("encoder_activation", activation);
    s.Read("use_iac", f.use_iac);
    s.Read("iac_scaled", f.iac_scaled);
    s.Read("context_hidden", in.encoder_hidden);
    s.Read("context_layers", in.encoder_layers);
    s.Read("decoder_hidden", in.decoder_hidden);
    s.Read("decoder_layers", in.decoder_layers);
    s.Read("embedding_dim", in.embedding_dim);
    s.Read("attention_dim", in.attention_dim);
    s.Read("readout_dim", in.readout_dim);
    s.Read("readout", readout);
    s.Read("n_speakers", in.n_speakers);
    s.Read("n_directions", in.n_directions);
    s.Read("max_steps", in.max_steps);
    s.Read("bottleneck_dim", sep.bottleneck_dim);
    s.Read("tcn_hidden", sep.hidden_dim);
    s.Read("tcn_blocks", sep.blocks);
    s.Read("tcn_layers", sep.layers_per_block);
    s.Read("tcn_kernel", sep.kernel);
    s.Read("tcn_norm", norm);
    s.Read("decoder_bias", sep.decoder_bias);
    s.RejectUnknown();
    f.activation = ParseActivation(activation);
    in.readout = ParseReadout(readout);
    try {
      sep.norm = separation::ParseNormKind(norm);
    } catch (const std::exception &) {
      throw ConfigError("[model].tcn_norm must be \"cln\" or \"gln\"");
    }
    in.input_dim = 3 * f.channels;
    sep.input_dim = 2 * f.channels;
    sep.decoder_kernel = f.kernel;
    sep.decoder_stride = f.stride;
  }
  {
    Section s(root["loss"].as_table(), "loss");
    s.Read("lambda", c.loss.lambda);
    s.Read("clamp_db", c.loss.clamp_db);
    s.RejectUnknown();
  }
  {
    auto &t = c.train;
    Section s(root["train"].as_table(), "train");
    s.Read("learning_rate", t.learning_rate);
    s.Read("lr_factor", t.lr_factor);
    s.Read("patience", t.patience);
    s.Read("batch_size", t.batch_size);
    s.Read("segment_seconds", t.segment_seconds);
    s.Read("max_steps", t.max_steps);
    s.Read("grad_clip", t.grad_clip);
    s.Read("eval_every", t.eval_every);
    s.Read("checkpoint_every", t.checkpoint_every);
    s.Read("log_every", t.log_every);
    s.Read("dev_examples", t.dev_examples);
    s.Read("seed", t.seed);
    s.Read("threads", t.threads);
    s.Read("feed_labels", t.feed_labels);
    s.Read("out_dir", t.out_dir);
    s.RejectUnknown();
  }
  {
    auto &d = c.data;
    Section s(root["data"].as_table(), "data");
    s.Read("root", d.root);
    s.Read("mode", d.mode);
    s.Read("reverberant", d.reverberant);
    s.Read("duration_seconds", d.duration_seconds);
    s.Read("n_train_speakers", d.n_train_speakers);
    s.Read("n_test_speakers", d.n_test_speakers);
    s.Read("train_speakers", d.train_speakers);
    s.Read("test_speakers", d.test_speakers);
    s.Read("train_mixtures", d.train_mixtures);
    s.Read("dev_mixtures", d.dev_mixtures);
    s.Read("test_mixtures", d.test_mixtures);
    s.Read("seed", d.seed);
    s.RejectUnknown();
  }
  {
    auto &e = c.eval;
    Section s(root["eval"].as_table(), "eval");
    s.Read("decode", e.decode);
    s.Read("beam_width", e.beam_width);
    s.Read("manifest", e.manifest);
    s.Read("max_examples", e.max_examples);
    s.Read("out_dir", e.out_dir);
    s.RejectUnknown();
  }
  c.Validate();
  return c;
}

RunConfig RunConfig::Load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Parse(ss.str());
  } catch (const ConfigError &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string RunConfig::ToToml() const {
  const auto &f = model.frontend;
  const auto &in = model.inference;
  const auto &sep = model.separator;
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "[model]\n"
     << "encoder_channels = " << f.channels << "\n"
     << "encoder_kernel = " << f.kernel << "\n"
     << "encoder_stride = " << f.stride << "\n"
     << "encoder_bias = " << b(f.bias) << "\n"
     << "encoder_activation = " << Quote(ActivationName(f.activation)) << "\n"
     << "use_iac = " << b(f.use_iac) << "\n"
     << "iac_scaled = " << b(f.iac_scaled) << "\n"
     << "context_hidden = " << in.encoder_hidden << "\n"
     << "context_layers = " << in.encoder_layers << "\n"
     << "decoder_hidden = " << in.decoder_hidden << "\n"
     << "decoder_layers = " << in.decoder_layers << "\n"
     << "embedding_dim = " << in.embedding_dim << "\n"
     << "attention_dim = " << in.attention_dim << "\n"
     << "readout_dim = " << in.readout_dim << "\n"
     << "readout = " << Quote(ReadoutName(in.readout)) << "\n"
     << "n_speakers = " << in.n_speakers << "\n"
     << "n_directions = " << in.n_directions << "\n"
     << "max_steps = " << in.max_steps << "\n"
     << "bottleneck_dim = " << sep.bottleneck_dim << "\n"
     << "tcn_hidden = " << sep.hidden_dim << "\n"
     << "tcn_blocks = " << sep.blocks << "\n"
     << "tcn_layers = " << sep.layers_per_block << "\n"
     << "tcn_kernel = " << sep.kernel << "\n"
     << "tcn_norm = " << Quote(separation::NormKindName(sep.norm)) << "\n"
     << "decoder_bias = " << b(sep.decoder_bias) << "\n\n";
  os << "[loss]\n"
     << "lambda = " << Num(loss.lambda) << "\n"
     << "clamp_db = " << Num(loss.clamp_db) << "\n\n";
  os << "[train]\n"
     << "learning_rate = " << Num(train.learning_rate) << "\n"
     << "lr_factor = " << Num(train.lr_factor) << "\n"
     << "patience = " << train.patience << "\n"
     << "batch_size = " << train.batch_size << "\n"
     << "segment_seconds = " << Num(train.segment_seconds) << "\n"
     << "max_steps = " << train.max_steps << "\n"
     << "grad_clip = " << Num(train.grad_clip) << "\n"
     << "eval_every = " << train.eval_every << "\n"
     << "checkpoint_every = " << train.checkpoint_every << "\n"
     << "log_every = " << train.log_every << "\n"
     << "dev_examples = " << train.dev_examples << "\n"
     << "seed = " << train.seed << "\n"
     << "threads = " << train.threads << "\n"
     << "feed_labels = " << b(train.feed_labels) << "\n"
     << "out_dir = " << Quote(train.out_dir) << "\n\n";
  os << "[data]\n"
     << "root = " << Quote(data.root) << "\n"
     << "mode = " << Quote(data.mode) << "\n"
     << "reverberant = " << b(data.reverberant) << "\n"
     << "duration_seconds = " << Num(data.duration_seconds) << "\n"
     << "n_train_speakers = " << data.n_train_speakers << "\n"
     << "n_test_speakers = " << data.n_test_speakers << "\n"
     << "train_speakers = " << IntList(data.train_speakers) << "\n"
     << "test_speakers = " << IntList(data.test_speakers) << "\n"
     << "train_mixtures = " << data.train_mixtures << "\n"
     << "dev_mixtures = " << data.dev_mixtures << "\n"
     << "test_mixtures = " << data.test_mixtures << "\n"
     << "seed = " << data.seed << "\n\n";
  os << "[eval]\n"
     << "decode = " << Quote(eval.decode) << "\n"
     << "beam_width = " << eval.beam_width << "\n"
     << "manifest = " << Quote(eval.manifest) << "\n"
     << "max_examples = " << eval.max_examples << "\n"
     << "out_dir = " << Quote(eval.out_dir) << "\n";
  return os.str();
}

std::string RunConfig::ModelText() const {
  const auto &f = model.frontend;
  const auto &in = model.inference;
  const auto &sep = model.separator;
  std::ostringstream os;
  os << "sample_rate=" << kSampleRate << "\n"
     << "encoder=(1," << f.channels << "," << f.kernel << "," << f.stride << ")\n"
     << "encoder_bias=" << f.bias << "\n"
     << "encoder_activation=" << ActivationName(f.activation) << "\n"
     << "use_iac=" << f.use_iac << "\n"
     << "iac_scaled=" << f.iac_scaled << "\n"
     << "context=" << in.encoder_layers << "x" << in.encoder_hidden << "x2\n"
     << "decoders=" << in.decoder_layers << "x" << in.decoder_hidden << "\n"
     << "embedding_dim=" << in.embedding_dim << "\n"
     << "attention_dim=" << in.attention_dim << "\n"
     << "readout=" << in.readout_dim << ":" << ReadoutName(in.readout) << "\n"
     << "vocab=" << in.n_speakers << "+2," << in.n_directions << "+2\n"
     << "max_steps=" << in.max_steps << "\n"
     << "bottleneck_dim=" << sep.bottleneck_dim << "\n"
     << "tcn=" << sep.blocks << "x" << sep.layers_per_block << ":" << sep.hidden_dim << ":"
     << sep.kernel << ":" << separation::NormKindName(sep.norm) << "\n"
     << "decoder=(" << sep.bottleneck_dim << ",1," << sep.decoder_kernel << ","
     << sep.decoder_stride << ")\n"
     << "decoder_bias=" << sep.decoder_bias << "\n";
  return os.str();
}

std::string RunConfig::ArchitectureText() const {
  return ModelText() + "lambda=" + Num(loss.lambda) + "\n";
}

uint64_t RunConfig::ModelHash() const { return Fnv1a64(ModelText()); }

uint64_t RunConfig::ArchitectureHash() const { return Fnv1a64(ArchitectureText()); }

}  // namespace sdnet::harness
