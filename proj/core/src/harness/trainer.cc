// Copyright 2026 The sdnet Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "sdnet/harness/trainer.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sdnet/errors.h"
#include "sdnet/fs.h"
#include "sdnet/harness/evaluator.h"
#include "sdnet/harness/plot.h"
#include "sdnet/log.h"
#include "sdnet/waveform.h"

namespace sdnet::harness {

namespace {

constexpr char kTrainLog[] = "train_log.csv";
constexpr char kDevLog[] = "dev_log.csv";

std::vector<std::vector<double>> ReadCsv(const std::filesystem::path &path) {
  std::vector<std::vector<double>> rows;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

// Keeps rows with step <= last_step so a resumed run does not duplicate them.
void TruncateCsv(const std::filesystem::path &path, int64_t last_step) {
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path);
  std::string header, line, kept;
  std::getline(in, header);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (std::stoll(line.substr(0, line.find(','))) <= last_step) kept += line + "\n";
  }
  in.close();
  WriteText(path, header + "\n" + kept);
}

}  // namespace

Trainer::Trainer(const RunConfig &config, Dataset train, std::optional<Dataset> dev)
    : config_(config),
      train_(std::move(train)),
      dev_(std::move(dev)),
      sampler_(train_.size(), config.train.batch_size, config.train.seed) {
  config_.Validate();
  torch::set_num_threads(config_.train.threads);
  torch::manual_seed(config_.train.seed);
  model_ = separation::SdnetModel(config_.model);
  optimizer_ = std::make_unique<torch::optim::Adam>(
      model_->parameters(), torch::optim::AdamOptions(config_.train.learning_rate));
  state_.learning_rate = config_.train.learning_rate;
  state_.sampler_seed = config_.train.seed;
  segment_samples_ = std::llround(config_.train.segment_seconds * kSampleRate);
  if (dev_ && config_.train.dev_examples > 0 &&
      dev_->size() > static_cast<std::size_t>(config_.train.dev_examples)) {
    std::vector<Example> subset(dev_->examples().begin(),
                                dev_->examples().begin() + config_.train.dev_examples);
    dev_ = Dataset(std::move(subset));
  }
}

double Trainer::learning_rate() const { return state_.learning_rate; }

void Trainer::SetLearningRate(double lr) {
  state_.learning_rate = lr;
  for (auto &group : optimizer_->param_groups()) {
    static_cast<torch::optim::AdamOptions &>(group.options()).lr(lr);
  }
}

void Trainer::Resume(const std::filesystem::path &checkpoint) {
  state_ = LoadCheckpoint(checkpoint, model_, optimizer_.get(), config_.ModelHash());
  if (state_.sampler_seed != config_.train.seed) {
    log::Warn("resuming with seed ", config_.train.seed, " over checkpoint seed ",
              state_.sampler_seed, "; the batch order changes");
    state_.sampler_seed = config_.train.seed;
  }
  SetLearningRate(state_.learning_rate);
}

void Trainer::Save(const std::filesystem::path &checkpoint) {
  SaveCheckpoint(checkpoint, model_, optimizer_.get(), config_.ModelHash(), state_);
}

StepRecord Trainer::Step() {
  const auto indices = sampler_.Indices(state_.step);
  const auto offsets = sampler_.Offsets(train_, indices, state_.step, segment_samples_);
  Batch batch = train_.MakeBatch(indices, segment_samples_, offsets);
  const auto dtype = model_->parameters().front().scalar_type();

  model_->train();
  auto out = model_->ForwardTeacherForced(batch.mixture.to(dtype), batch.speakers,
                                          batch.directions, config_.train.feed_labels);
  auto &inf = model_->inference;
  objectives::LossTerms terms = objectives::TotalLoss(
      out.separated, batch.targets.to(dtype), out.inference.speaker_log_probs,
      out.inference.direction_log_probs, batch.speakers, batch.directions,
      inf->speaker_decoder->vocab().eos(), inf->direction_decoder->vocab().eos(),
      config_.loss.lambda, config_.loss.clamp_db);

  StepRecord rec;
  rec.loss = terms.Breakdown();
  rec.learning_rate = state_.learning_rate;
  if (!std::isfinite(rec.loss.total)) {
    throw DivergenceError("non-finite loss at step " + std::to_string(state_.step + 1));
  }
  optimizer_->zero_grad();
  terms.total.backward();
  torch::nn::utils::clip_grad_norm_(model_->parameters(), config_.train.grad_clip);
  optimizer_->step();
  rec.step = ++state_.step;
  history_.push_back(rec);
  return rec;
}

DevRecord Trainer::EvaluateDev() {
  if (!dev_ || dev_->empty()) throw UsageError("no dev set was provided");
  EvalOptions opts;
  opts.mode = inference::DecodeMode::kGreedy;
  opts.compute_sdr = false;
  const EvalReport report = Evaluate(model_, *dev_, opts);
  DevRecord rec{state_.step, report.mean_sisnri, report.count_accuracy, state_.learning_rate};
  dev_history_.push_back(rec);
  return rec;
}

void Trainer::Run(const std::filesystem::path &out_dir,
                  const std::function<bool(const DevRecord &)> &on_dev) {
  CreateDirectories(out_dir);
  WriteText(out_dir / "config.toml", config_.ToToml());
  const auto train_log = out_dir / kTrainLog, dev_log = out_dir / kDevLog;
  if (state_.step == 0) {
    WriteText(train_log, "step,total,sisnr_db,ce_speaker,ce_direction,learning_rate\n");
    WriteText(dev_log, "step,dev_sisnri_db,dev_count_accuracy,learning_rate\n");
  } else {
    TruncateCsv(train_log, state_.step);
    TruncateCsv(dev_log, state_.step);
  }
  std::ofstream tlog(train_log, std::ios::app), dlog(dev_log, std::ios::app);
  tlog.precision(17);
  dlog.precision(17);

  const auto &tc = config_.train;
  while (state_.step < tc.max_steps) {
    StepRecord rec;
    try {
      rec = Step();
    } catch (const DivergenceError &e) {
      tlog.flush();
      WriteLogs(out_dir);
      log::Error(e.what(), "; keeping the last checkpoint in ", out_dir.string());
      throw;
    }
    tlog << rec.step << "," << rec.loss.total << "," << rec.loss.sisnr_ss << ","
         << rec.loss.ce_spk << "," << rec.loss.ce_dir << "," << rec.learning_rate << "\n";
    if (rec.step % tc.log_every == 0) {
      log::Info("step ", rec.step, " loss ", rec.loss.total, " sisnr ", rec.loss.sisnr_ss,
                " ce_spk ", rec.loss.ce_spk, " ce_dir ", rec.loss.ce_dir, " lr ",
                rec.learning_rate);
    }
    bool stop = false;
    if (dev_ && rec.step % tc.eval_every == 0) {
      const DevRecord d = EvaluateDev();
      dlog << d.step << "," << d.sisnri << "," << d.count_accuracy << "," << d.learning_rate
           << "\n";
      dlog.flush();
      log::Info("dev step ", d.step, " sisnri ", d.sisnri, " count_acc ", d.count_accuracy);
      if (d.sisnri > state_.best_dev) {
        state_.best_dev = d.sisnri;
        state_.bad_evals = 0;
        Save(out_dir / "best.pt");
      } else if (++state_.bad_evals >= tc.patience) {
        SetLearningRate(state_.learning_rate * tc.lr_factor);
        state_.bad_evals = 0;
        log::Info("dev plateau, learning rate now ", state_.learning_rate);
      }
      if (on_dev) stop = on_dev(d);
    }
    if (rec.step % tc.checkpoint_every == 0 || stop) {
      tlog.flush();
      Save(out_dir / "last.pt");
    }
    if (stop) break;
  }
  tlog.flush();
  Save(out_dir / "last.pt");
  WriteLogs(out_dir);
}

void Trainer::WriteLogs(const std::filesystem::path &out_dir) const {
  const auto rows = ReadCsv(out_dir / kTrainLog);
  Series total{"total", {}, {}}, neg_sisnr{"-SI-SNR", {}, {}}, ce_s{"CE speaker", {}, {}},
      ce_d{"CE direction", {}, {}};
  for (const auto &r : rows) {
    if (r.size() < 5) continue;
    for (Series *s : {&total, &neg_sisnr, &ce_s, &ce_d}) s->x.push_back(r[0]);
    total.y.push_back(r[1]);
    neg_sisnr.y.push_back(-r[2]);
    ce_s.y.push_back(r[3]);
    ce_d.y.push_back(r[4]);
  }
  WriteText(out_dir / "loss_curve.svg",
            LinePlotSvg({"Training loss", "step", "loss"}, {total, neg_sisnr}));
  WriteText(out_dir / "ce_curve.svg",
            LinePlotSvg({"Token cross-entropy", "step", "nats"}, {ce_s, ce_d}));
  const auto dev_rows = ReadCsv(out_dir / kDevLog);
  if (!dev_rows.empty()) {
    Series si{"dev SI-SNRi", {}, {}};
    for (const auto &r : dev_rows) {
      si.x.push_back(r[0]);
      si.y.push_back(r[1]);
    }
    WriteText(out_dir / "dev_curve.svg", LinePlotSvg({"Dev SI-SNRi", "step", "dB"}, {si}));
  }
}

}  // namespace sdnet::harness
