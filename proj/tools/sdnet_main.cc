// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// sdnet simulate|train|eval|separate --config <path> [--checkpoint <path>]
//       [--beam N] [--seed N]

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sdnet/errors.h"
#include "sdnet/harness/commands.h"
#include "sdnet/harness/config.h"
#include "sdnet/log.h"

namespace {

struct Options {
  std::string config;
  std::string checkpoint;
  std::optional<int> beam;
  std::optional<uint64_t> seed;
  std::string input;
  std::string output = "separated";
  std::string log_level = "info";
};

sdnet::log::Level ParseLevel(const std::string &s) {
  if (s == "debug") return sdnet::log::Level::kDebug;
  if (s == "warn") return sdnet::log::Level::kWarn;
  if (s == "error") return sdnet::log::Level::kError;
  if (s == "off") return sdnet::log::Level::kOff;
  return sdnet::log::Level::kInfo;
}

sdnet::harness::RunConfig LoadConfig(const Options &o) {
  auto config = sdnet::harness::RunConfig::Load(o.config);
  if (o.seed) {
    config.train.seed = *o.seed;
    config.data.seed = *o.seed;
  }
  if (o.beam) {
    if (*o.beam < 1) throw sdnet::UsageError("--beam must be at least 1");
    config.eval.beam_width = *o.beam;
    config.eval.decode = "beam";
  }
  return config;
}

void RequireCheckpoint(const Options &o, const char *cmd) {
  if (o.checkpoint.empty()) {
    throw sdnet::UsageError(std::string("sdnet ") + cmd + " needs --checkpoint <path>");
  }
}

int Run(int argc, char **argv) {
  CLI::App app{"SDNet dual-channel speech separation"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--config", o.config, "TOML run configuration")->required();
    cmd->add_option("--checkpoint", o.checkpoint, "Model checkpoint");
    cmd->add_option("--beam", o.beam, "Beam width");
    cmd->add_option("--seed", o.seed, "Seed override for simulation and training");
    cmd->add_option("--log-level", o.log_level, "debug, info, warn, error or off");
  };
  auto *simulate = app.add_subcommand("simulate", "Simulate train/dev/test mixtures");
  auto *train = app.add_subcommand("train", "Train (or resume with --checkpoint)");
  auto *eval = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
  auto *separate = app.add_subcommand("separate", "Separate one stereo WAV file");
  for (auto *cmd : {simulate, train, eval, separate}) add_common(cmd);
  separate->add_option("--input", o.input, "Stereo 8 kHz WAV")->required();
  separate->add_option("--output", o.output, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }
  sdnet::log::SetLevel(ParseLevel(o.log_level));
  const auto config = LoadConfig(o);

  if (simulate->parsed()) {
    const auto out = sdnet::harness::CmdSimulate(config);
    std::cout << out.train_manifest.string() << "\n"
              << out.dev_manifest.string() << "\n"
              << out.test_manifest.string() << "\n";
  } else if (train->parsed()) {
    sdnet::harness::CmdTrain(config, o.checkpoint);
  } else if (eval->parsed()) {
    RequireCheckpoint(o, "eval");
    const auto report = sdnet::harness::CmdEval(config, o.checkpoint);
    std::cout << "examples " << report.records.size() << " sisnri_db " << report.mean_sisnri
              << " sdri_db " << report.mean_sdri << " count_accuracy "
              << report.count_accuracy << "\n";
  } else if (separate->parsed()) {
    RequireCheckpoint(o, "separate");
    const auto paths = sdnet::harness::CmdSeparate(config, o.checkpoint, o.input, o.output,
                                                   config.eval.beam_width);
    for (const auto &p : paths) std::cout << p.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return Run(argc, argv);
  } catch (const sdnet::UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const sdnet::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const sdnet::IoError &e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const sdnet::DivergenceError &e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return 5;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
