// Copyright 2026 The TFT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TFT_TRAIN_TRAINER_HPP_
#define TFT_TRAIN_TRAINER_HPP_

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tft/audio/segment.hpp"
#include "tft/common.hpp"
#include "tft/model/checkpoint.hpp"
#include "tft/model/model.hpp"
#include "tft/nn/adam.hpp"
#include "tft/nn/loss.hpp"
#include "tft/rng.hpp"

namespace tft::train {

struct TrainConfig {
  int64_t batch_size = 64;
  int64_t epochs = 1000;
  double lr = 0.001;
  uint64_t seed = 0;
  int64_t eval_every = 0;          // 0 disables periodic console reporting
  std::string checkpoint_dir;      // empty disables checkpointing
  bool grad_check_mode = false;    // run in double precision with finite checks
  // optional extras, inert at their defaults
  double weight_decay = 0.0;
  double grad_clip = 0.0;
  bool class_weights = false;
  double early_stop_train_war = 0.0;  // stop once train WAR reaches this; 0 disables
  int64_t lr_decay_every = 0;         // epochs between decays; 0 disables
  double lr_decay_factor = 1.0;
  int64_t checkpoint_every = 0;       // 0 saves only the final checkpoint

  void validate() const {
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
    // lr 0 is allowed: it makes an epoch an exact parameter no-op
    if (lr < 0.0) throw ConfigError("train: lr must be non-negative");
    if (lr_decay_factor <= 0.0) throw ConfigError("train: lr decay factor must be positive");
  }
};

struct EpochStats {
  int64_t epoch = 0;
  double mean_loss = 0.0;
  double train_war = 0.0;
  int64_t wall_ms = 0;
};

// Log row in the `epoch,mean_loss,train_war,wall_ms` text format. Numeric
// fields print with enough digits to round-trip exactly.
inline std::string format_log_row(const EpochStats& s) {
  std::ostringstream os;
  os.precision(17);
  os << s.epoch << "," << s.mean_loss << "," << s.train_war << "," << s.wall_ms;
  return os.str();
}

// Shuffled index batches covering every segment exactly once; the final
// partial batch is kept.
inline std::vector<std::vector<int64_t>> make_batches(int64_t n, int64_t batch_size, Rng& rng) {
  if (n < 1) throw InputError("make_batches: empty dataset");
  if (batch_size < 1) throw ConfigError("make_batches: batch_size must be >= 1");
  std::vector<int64_t> order(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  rng.shuffle(order);
  std::vector<std::vector<int64_t>> batches;
  for (int64_t start = 0; start < n; start += batch_size) {
    const int64_t end = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

// Stacks segments into a (b, 1, f, d) batch tensor.
template <typename T>
TensorPtr<T> assemble_batch(const std::vector<audio::LogMelSegment>& segments,
                            const std::vector<int64_t>& idx) {
  if (idx.empty()) throw InputError("assemble_batch: empty batch");
  const auto& first = segments[static_cast<size_t>(idx[0])];
  const int64_t f = first.n_mels, d = first.n_frames;
  auto x = make_tensor<T>({static_cast<int64_t>(idx.size()), 1, f, d});
  for (size_t bi = 0; bi < idx.size(); ++bi) {
    const auto& seg = segments[static_cast<size_t>(idx[bi])];
    if (seg.n_mels != f || seg.n_frames != d) {
      throw ShapeError("assemble_batch: segment dims differ within batch");
    }
    T* dst = x->data() + static_cast<int64_t>(bi) * f * d;
    for (size_t j = 0; j < seg.values.size(); ++j) dst[j] = static_cast<T>(seg.values[j]);
  }
  return x;
}

// Inverse-frequency class weights normalized to mean 1.
template <typename T>
std::vector<T> inverse_frequency_weights(const std::vector<audio::LogMelSegment>& segments,
                                         int64_t n_classes) {
  std::vector<int64_t> counts(static_cast<size_t>(n_classes), 0);
  for (const auto& s : segments) {
    if (s.label >= n_classes) throw InputError("segment label out of range");
    ++counts[s.label];
  }
  std::vector<T> w(static_cast<size_t>(n_classes), T(0));
  double sum = 0;
  int64_t present = 0;
  for (int64_t c = 0; c < n_classes; ++c) {
    if (counts[c] > 0) {
      w[c] = static_cast<T>(1.0 / static_cast<double>(counts[c]));
      sum += static_cast<double>(w[c]);
      ++present;
    }
  }
  if (present == 0) throw InputError("no labeled segments");
  const double scale = static_cast<double>(present) / sum;
  for (auto& v : w) v = static_cast<T>(static_cast<double>(v) * scale);
  return w;
}

// One trainer owns one model and one optimizer. Epoch shuffling derives a
// fresh stream from (seed, epoch), so resuming from a checkpoint at epoch k
// replays exactly the batches an uninterrupted run would see.
template <typename T>
class Trainer {
 public:
  Trainer(Model<T>& model, const TrainConfig& cfg)
      : model_(model), cfg_(cfg), optimizer_(make_optimizer(model, cfg)) {
    cfg_.validate();
  }

  nn::Adam<T>& optimizer() { return optimizer_; }
  const TrainConfig& config() const { return cfg_; }

  // One pass over the data: forward, fused softmax + cross-entropy,
  // backward, Adam step per batch. `epoch` is 1-based.
  EpochStats train_epoch(const std::vector<audio::LogMelSegment>& data, int64_t epoch) {
    if (data.empty()) throw InputError("train_epoch: empty dataset");
    const auto t0 = std::chrono::steady_clock::now();

    Rng shuffle_rng(Rng::mix(cfg_.seed, static_cast<uint64_t>(epoch)));
    const auto batches = make_batches(static_cast<int64_t>(data.size()), cfg_.batch_size, shuffle_rng);

    std::vector<T> class_w;
    if (cfg_.class_weights) {
      class_w = inverse_frequency_weights<T>(data, model_.config().n_classes);
    }

    apply_lr_schedule(epoch);

    double loss_sum = 0;
    int64_t correct = 0;
    std::vector<double> loss_history;
    for (size_t bi = 0; bi < batches.size(); ++bi) {
      const auto& idx = batches[bi];
      if (model_.config().dropout > 0) {
        model_.reseed_dropout(Rng::mix(Rng::mix(cfg_.seed, static_cast<uint64_t>(epoch)),
                                       static_cast<uint64_t>(bi) + 1));
      }
      auto x = assemble_batch<T>(data, idx);
      std::vector<int> labels(idx.size());
      for (size_t j = 0; j < idx.size(); ++j) {
        labels[j] = static_cast<int>(data[static_cast<size_t>(idx[j])].label);
      }

      Tape<T> tape;
      auto out = model_.forward(&tape, x, /*train=*/true);
      auto loss = nn::softmax_cross_entropy(&tape, out.logits, labels, class_w);
      const double loss_value = static_cast<double>(loss.loss->values[0]);
      if (!std::isfinite(loss_value)) {
        std::ostringstream os;
        os << "non-finite loss at epoch " << epoch << " batch " << bi << "; recent losses:";
        const size_t start = loss_history.size() > 8 ? loss_history.size() - 8 : 0;
        for (size_t j = start; j < loss_history.size(); ++j) os << " " << loss_history[j];
        throw NumericError(os.str());
      }
      loss_history.push_back(loss_value);
      loss_sum += loss_value * static_cast<double>(idx.size());

      for (size_t j = 0; j < idx.size(); ++j) {
        const T* row = loss.probs->data() + static_cast<int64_t>(j) * model_.config().n_classes;
        int arg = 0;
        for (int64_t c = 1; c < model_.config().n_classes; ++c) {
          if (row[c] > row[arg]) arg = static_cast<int>(c);
        }
        if (arg == labels[j]) ++correct;
      }

      optimizer_.zero_grad();
      loss.loss->grad[0] = T(1);
      tape.backward();
      optimizer_.step();
    }

    const auto t1 = std::chrono::steady_clock::now();
    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = loss_sum / static_cast<double>(data.size());
    stats.train_war = static_cast<double>(correct) / static_cast<double>(data.size());
    stats.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return stats;
  }

  // Runs the configured number of epochs starting after `start_epoch`,
  // appending one log row per epoch and checkpointing per config. Returns
  // the per-epoch stats.
  std::vector<EpochStats> run(const std::vector<audio::LogMelSegment>& data,
                              const std::string& log_path = "", int64_t start_epoch = 0) {
    std::ofstream log;
    if (!log_path.empty()) {
      log.open(log_path, start_epoch > 0 ? std::ios::app : std::ios::trunc);
      if (!log) throw InputError("cannot open training log: " + log_path);
    }
    std::vector<EpochStats> all;
    for (int64_t epoch = start_epoch + 1; epoch <= cfg_.epochs; ++epoch) {
      EpochStats s = train_epoch(data, epoch);
      all.push_back(s);
      if (log.is_open()) log << format_log_row(s) << "\n" << std::flush;
      if (cfg_.eval_every > 0 && epoch % cfg_.eval_every == 0) {
        std::cout << "epoch " << s.epoch << "  loss " << s.mean_loss << "  train WAR "
                  << s.train_war << "\n";
      }
      if (!cfg_.checkpoint_dir.empty() && cfg_.checkpoint_every > 0 &&
          epoch % cfg_.checkpoint_every == 0) {
        save_checkpoint(model_, &optimizer_, static_cast<uint32_t>(epoch),
                        cfg_.checkpoint_dir + "/epoch_" + std::to_string(epoch) + ".tftc");
      }
      if (cfg_.early_stop_train_war > 0 && s.train_war >= cfg_.early_stop_train_war) break;
    }
    if (!cfg_.checkpoint_dir.empty()) {
      const uint32_t last = all.empty() ? static_cast<uint32_t>(start_epoch)
                                        : static_cast<uint32_t>(all.back().epoch);
      save_checkpoint(model_, &optimizer_, last, cfg_.checkpoint_dir + "/final.tftc");
    }
    return all;
  }

 private:
  static nn::Adam<T> make_optimizer(Model<T>& model, const TrainConfig& cfg) {
    nn::AdamConfig ac;
    ac.lr = cfg.lr;
    ac.weight_decay = cfg.weight_decay;
    ac.grad_clip = cfg.grad_clip;
    return nn::Adam<T>(model.parameters(), ac);
  }

  void apply_lr_schedule(int64_t epoch) {
    if (cfg_.lr_decay_every <= 0 || cfg_.lr_decay_factor == 1.0) return;
    const auto steps = static_cast<double>((epoch - 1) / cfg_.lr_decay_every);
    optimizer_.set_lr(cfg_.lr * std::pow(cfg_.lr_decay_factor, steps));
  }

  Model<T>& model_;
  TrainConfig cfg_;
  nn::Adam<T> optimizer_;
};

}  // namespace tft::train

#endif  // TFT_TRAIN_TRAINER_HPP_
