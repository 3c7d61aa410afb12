// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef SDNET_HARNESS_COMMANDS_H_
#define SDNET_HARNESS_COMMANDS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "sdnet/datasim/manifest.h"
#include "sdnet/harness/config.h"
#include "sdnet/harness/evaluator.h"

namespace sdnet::harness {

struct SimulateSummary {
  std::filesystem::path train_manifest;
  std::filesystem::path dev_manifest;
  std::filesystem::path test_manifest;
};

// Simulates one split. Speakers are drawn from `speakers`; the per-example
// seed depends on (seed, split, index) only.
std::vector<datasim::ManifestEntry> SimulateSplit(const DataConfig &data,
                                                  const std::vector<int> &speakers,
                                                  const std::string &split, int count,
                                                  const std::filesystem::path &root);

// Writes train/dev/test manifests (dev shares the training speakers, test
// uses the disjoint held-out speakers).
SimulateSummary CmdSimulate(const RunConfig &config);

// Trains from scratch, or resumes when `checkpoint` is non-empty.
void CmdTrain(const RunConfig &config, const std::filesystem::path &checkpoint);

EvalReport CmdEval(const RunConfig &config, const std::filesystem::path &checkpoint);

// Writes <stem>.s<i>.wav plus <stem>.s<i>.json per inferred source and
// returns the WAV paths.
std::vector<std::filesystem::path> CmdSeparate(const RunConfig &config,
                                               const std::filesystem::path &checkpoint,
                                               const std::filesystem::path &input,
                                               const std::filesystem::path &out_dir,
                                               int beam_width);

// Manifest path for a split name or an explicit .jsonl path.
std::filesystem::path ManifestPath(const DataConfig &data, const std::string &split);

}  // namespace sdnet::harness

#endif  // SDNET_HARNESS_COMMANDS_H_
