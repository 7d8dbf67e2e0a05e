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

// Acceptance suite: one verdict line per criterion, nonzero exit on any
// failure. Runs standalone (no test framework) so the output stays a simple
// pass/fail listing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "tft/tft.hpp"

using namespace tft;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %d. %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int index, const std::string& name, Fn&& fn) {
  try {
    std::string detail;
    const bool pass = fn(&detail);
    report(index, name, pass, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --------------------------------------------------------------------------
// 1. Gradient suite over every differentiable op, 5 seeds, rel err < 1e-4.
// --------------------------------------------------------------------------
bool run_gradient_suite(std::string* detail) {
  using tft_tests::fill_uniform;
  using tft_tests::gradcheck_max_rel_err;
  const auto t0 = Clock::now();
  constexpr double kTol = 1e-4;
  double worst = 0;
  std::string worst_op = "none";
  auto track = [&](const char* op, double err) {
    if (err > worst) {
      worst = err;
      worst_op = op;
    }
  };

  for (uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);

    {
      nn::ConvSpec spec{3, 3, 2, 2, 1, 1, 1};
      auto x = make_tensor<double>({2, 2, 6, 5});
      auto w = make_tensor<double>({3, 2, 3, 2});
      auto b = make_tensor<double>({3});
      fill_uniform(*x, rng);
      fill_uniform(*w, rng);
      fill_uniform(*b, rng);
      track("conv2d", gradcheck_max_rel_err(
                          [&](Tape<double>* t) { return nn::conv2d(t, x, w, b, spec); },
                          {x, w, b}, seed));
    }
    {
      auto x = make_tensor<double>({3, 2, 4, 4});
      auto g = make_tensor<double>({2});
      auto b = make_tensor<double>({2});
      fill_uniform(*x, rng, -2, 2);
      fill_uniform(*g, rng, 0.5, 1.5);
      fill_uniform(*b, rng);
      track("batchnorm2d", gradcheck_max_rel_err(
                               [&](Tape<double>* t) {
                                 return nn::batchnorm2d(t, x, g, b, nullptr, nullptr, true);
                               },
                               {x, g, b}, seed));
    }
    {
      auto x = make_tensor<double>({4, 6});
      for (auto& v : x->values) {
        v = rng.uniform(0.1, 1.0) * (rng.next_double() < 0.5 ? -1.0 : 1.0);
      }
      track("relu",
            gradcheck_max_rel_err([&](Tape<double>* t) { return nn::relu(t, x); }, {x}, seed));
    }
    {
      auto x = make_tensor<double>({3, 4});
      auto w = make_tensor<double>({2, 4});
      auto b = make_tensor<double>({2});
      fill_uniform(*x, rng);
      fill_uniform(*w, rng);
      fill_uniform(*b, rng);
      track("linear", gradcheck_max_rel_err(
                          [&](Tape<double>* t) { return nn::linear(t, x, w, b); }, {x, w, b},
                          seed));
    }
    {
      auto x = make_tensor<double>({4, 6});
      auto g = make_tensor<double>({6});
      auto b = make_tensor<double>({6});
      fill_uniform(*x, rng, -2, 2);
      fill_uniform(*g, rng, 0.5, 1.5);
      fill_uniform(*b, rng);
      track("layer_norm", gradcheck_max_rel_err(
                              [&](Tape<double>* t) { return nn::layer_norm(t, x, g, b); },
                              {x, g, b}, seed));
    }
    {
      nn::AttentionSpec spec{4, 2, 8};
      auto w = nn::AttentionWeights<double>::init(4, rng);
      auto x = make_tensor<double>({1, 3, 4});
      fill_uniform(*x, rng);
      track("multi_head_attention(self)",
            gradcheck_max_rel_err(
                [&](Tape<double>* t) {
                  return nn::multi_head_attention(t, x, x, x, spec, w).out;
                },
                {x, w.wq, w.bq, w.wk, w.bk, w.wv, w.bv, w.wo, w.bo}, seed));
      auto q = make_tensor<double>({1, 3, 4});
      auto k = make_tensor<double>({1, 5, 4});
      auto v = make_tensor<double>({1, 5, 4});
      fill_uniform(*q, rng);
      fill_uniform(*k, rng);
      fill_uniform(*v, rng);
      track("multi_head_attention(cross)",
            gradcheck_max_rel_err(
                [&](Tape<double>* t) {
                  return nn::multi_head_attention(t, q, k, v, spec, w).out;
                },
                {q, k, v, w.wq, w.bq, w.wk, w.bk, w.wv, w.bv, w.wo, w.bo}, seed));
    }
    {
      auto x = make_tensor<double>({2, 3, 4});
      auto w1 = make_tensor<double>({6, 4});
      auto b1 = make_tensor<double>({6});
      auto w2 = make_tensor<double>({4, 6});
      auto b2 = make_tensor<double>({4});
      fill_uniform(*x, rng);
      fill_uniform(*w1, rng);
      fill_uniform(*b1, rng);
      fill_uniform(*w2, rng);
      fill_uniform(*b2, rng);
      track("feed_forward", gradcheck_max_rel_err(
                                [&](Tape<double>* t) {
                                  return nn::feed_forward(t, x, w1, b1, w2, b2);
                                },
                                {x, w1, b1, w2, b2}, seed));
    }
    {
      auto y = make_tensor<double>({2, 5, 4});
      fill_uniform(*y, rng);
      track("mean_std_pool", gradcheck_max_rel_err(
                                 [&](Tape<double>* t) { return nn::mean_std_pool(t, y); }, {y},
                                 seed));
    }
    {
      auto logits = make_tensor<double>({4, 5});
      fill_uniform(*logits, rng, -2, 2);
      std::vector<int> labels;
      for (int i = 0; i < 4; ++i) labels.push_back(static_cast<int>(rng.next_below(5)));
      track("softmax_cross_entropy",
            gradcheck_max_rel_err(
                [&](Tape<double>* t) {
                  return nn::softmax_cross_entropy(t, logits, labels).loss;
                },
                {logits}, seed));
    }
  }

  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os.precision(3);
  os << "max rel err " << worst << " (" << worst_op << "), " << elapsed << " s";
  *detail = os.str();
  return worst < kTol && elapsed < 120.0;
}

// --------------------------------------------------------------------------
// 2. End-to-end shape trace at the default configuration.
// --------------------------------------------------------------------------
bool run_shape_trace(std::string* detail) {
  ModelConfig cfg;
  Model<float> model(cfg, 7);
  auto x = make_tensor<float>({2, 1, 80, 80});
  Rng rng(9);
  for (auto& v : x->values) v = static_cast<float>(rng.uniform(-1, 1));
  Tape<float> tape;
  auto out = model.forward(&tape, x, true);
  const auto& tr = out.trace;

  std::vector<std::pair<std::string, bool>> checks = {
      {"time conv (2,64,20,80)", tr.time_conv->shape == Shape{2, 64, 20, 80}},
      {"freq conv (2,64,80,20)", tr.freq_conv->shape == Shape{2, 64, 80, 20}},
      {"fusion conv (2,64,20,20)", tr.fusion_conv->shape == Shape{2, 64, 20, 20}},
      {"time encoding (2,80,20)", tr.time_encoded->shape == Shape{2, 80, 20}},
      {"freq encoding (2,80,20)", tr.freq_encoded->shape == Shape{2, 80, 20}},
      {"query (2,20,20)", tr.query->shape == Shape{2, 20, 20}},
      {"key (2,20,20)", tr.key->shape == Shape{2, 20, 20}},
      {"value (2,20,20)", tr.value_tokens->shape == Shape{2, 20, 20}},
      {"fused (2,20,20)", tr.fused->shape == Shape{2, 20, 20}},
      {"pooled (2,40)", tr.pooled->shape == Shape{2, 40}},
      {"probs (2,4)", out.probs.shape == Shape{2, 4}},
  };
  for (const auto& [name, ok] : checks) {
    if (!ok) {
      *detail = "mismatch at " + name;
      return false;
    }
  }
  *detail = "all 11 trace shapes match";
  return true;
}

// --------------------------------------------------------------------------
// 3. Attention rows are stochastic on 20 random inputs.
// --------------------------------------------------------------------------
bool run_attention_stochasticity(std::string* detail) {
  ModelConfig cfg;
  Model<double> model(cfg, 21);
  Rng rng(22);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto x = make_tensor<double>({1, 1, 80, 80});
    for (auto& v : x->values) v = rng.uniform(-2, 2);
    auto out = model.forward(nullptr, x, false);
    for (const auto& attn :
         {out.trace.time_attn, out.trace.freq_attn, out.trace.fusion_attn}) {
      const int64_t lk = attn->shape.back();
      const int64_t rows = attn->numel() / lk;
      for (int64_t r = 0; r < rows; ++r) {
        double sum = 0;
        for (int64_t j = 0; j < lk; ++j) {
          const double a = attn->values[r * lk + j];
          if (a < 0) {
            *detail = "negative attention weight";
            return false;
          }
          sum += a;
        }
        worst = std::max(worst, std::fabs(sum - 1.0));
      }
    }
  }
  std::ostringstream os;
  os.precision(3);
  os << "max |row sum - 1| = " << worst << " across 3 encoders x 20 inputs";
  *detail = os.str();
  return worst < 1e-6;
}

// --------------------------------------------------------------------------
// 4. Learnability on the synthetic separable corpus, full model.
// --------------------------------------------------------------------------
bool run_learnability(std::string* detail) {
  const auto t0 = Clock::now();
  // 4 classes x 32 segments, spread over 4 synthetic speakers
  Rng rng(123);
  std::vector<audio::LogMelSegment> data;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 32; ++i) {
      const double speaker_offset = 0.3 * (i % 4);
      data.push_back(tft_tests::band_pattern_segment(c, 4, 80, 80, rng, "synthetic",
                                                     static_cast<uint32_t>(data.size()),
                                                     speaker_offset));
    }
  }
  ModelConfig cfg;  // full-size configuration, single encoder layer
  Model<float> model(cfg, 31);
  train::TrainConfig tc;
  tc.batch_size = 16;
  tc.lr = 0.001;
  tc.seed = 31;
  train::Trainer<float> trainer(model, tc);

  for (int64_t epoch = 1; epoch <= 500; ++epoch) {
    const auto stats = trainer.train_epoch(data, epoch);
    const double elapsed = seconds_since(t0);
    if (stats.train_war >= 0.95) {
      std::ostringstream os;
      os.precision(3);
      os << "train WAR " << stats.train_war << " at epoch " << epoch << ", " << elapsed << " s";
      *detail = os.str();
      return elapsed < 600.0;
    }
    if (elapsed > 600.0) {
      *detail = "exceeded 10 minutes at epoch " + std::to_string(epoch);
      return false;
    }
  }
  *detail = "did not reach 95% train WAR in 500 epochs";
  return false;
}

// --------------------------------------------------------------------------
// 5. Metric oracle agreement plus the hand example and balance equality.
// --------------------------------------------------------------------------
bool run_metric_oracle(std::string* detail) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_classes = (trial % 3 == 0) ? 2 : (trial % 3 == 1) ? 4 : 6;
    const int n = 1 + static_cast<int>(rng.next_below(150));
    std::vector<int> y_true, y_pred;
    for (int i = 0; i < n; ++i) {
      y_true.push_back(static_cast<int>(rng.next_below(static_cast<uint64_t>(n_classes))));
      y_pred.push_back(static_cast<int>(rng.next_below(static_cast<uint64_t>(n_classes))));
    }
    const auto m = eval::compute_metrics(y_true, y_pred, n_classes);
    const auto oracle = tft_tests::tally_metrics(y_true, y_pred, n_classes);
    if (m.confusion != oracle.confusion || m.war != oracle.war || m.uar != oracle.uar) {
      *detail = "oracle mismatch on random labeling " + std::to_string(trial);
      return false;
    }
  }

  const auto hand = eval::compute_metrics({0, 0, 0, 0, 1, 1}, {0, 0, 0, 1, 0, 1}, 2);
  if (std::fabs(hand.war - 0.6667) > 1e-4 || std::fabs(hand.uar - 0.625) > 1e-4) {
    *detail = "hand example mismatch";
    return false;
  }

  double worst_gap = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n_classes = 2 + static_cast<int>(rng.next_below(5));
    std::vector<int> y_true, y_pred;
    for (int c = 0; c < n_classes; ++c) {
      for (int i = 0; i < 12; ++i) {
        y_true.push_back(c);
        y_pred.push_back(static_cast<int>(rng.next_below(static_cast<uint64_t>(n_classes))));
      }
    }
    const auto m = eval::compute_metrics(y_true, y_pred, n_classes);
    worst_gap = std::max(worst_gap, std::fabs(m.war - m.uar));
  }
  std::ostringstream os;
  os.precision(3);
  os << "100 oracle labelings, hand example, balanced |WAR-UAR| <= " << worst_gap;
  *detail = os.str();
  return worst_gap < 1e-12;
}

// --------------------------------------------------------------------------
// 6. Fold invariants and corpus-shaped fold counts.
// --------------------------------------------------------------------------
bool run_fold_invariants(std::string* detail) {
  auto shaped = [](int n_speakers, int utts, int per_session) {
    std::vector<eval::ManifestEntry> entries;
    for (int sp = 0; sp < n_speakers; ++sp) {
      for (int u = 0; u < utts; ++u) {
        eval::ManifestEntry e;
        e.utterance_id = "s" + std::to_string(sp) + "u" + std::to_string(u);
        e.path = e.utterance_id + ".wav";
        e.speaker_id = "spk" + std::to_string(sp);
        e.session_id = "ses" + std::to_string(sp / per_session);
        e.label_name = "c" + std::to_string(u % 3);
        entries.push_back(e);
      }
    }
    return eval::DatasetManifest::from_entries(std::move(entries));
  };

  auto partition_ok = [](const eval::DatasetManifest& m, const eval::FoldPlan& plan) {
    std::set<std::string> units;
    for (const auto& fold : plan.folds) {
      if (!units.insert(fold.held_out).second) return false;
      std::set<int64_t> train(fold.train_indices.begin(), fold.train_indices.end());
      std::set<int64_t> test(fold.test_indices.begin(), fold.test_indices.end());
      if (train.size() + test.size() != m.entries.size()) return false;
      for (int64_t t : test) {
        if (train.count(t)) return false;
      }
    }
    return true;
  };

  Rng rng(88);
  for (int trial = 0; trial < 30; ++trial) {
    const int n_speakers = 2 + static_cast<int>(rng.next_below(11));
    const auto manifest = shaped(n_speakers, 1 + static_cast<int>(rng.next_below(5)), 2);
    const auto plan = eval::build_folds(manifest, eval::FoldMode::kSpeaker);
    if (plan.folds.size() != static_cast<size_t>(n_speakers) || !partition_ok(manifest, plan)) {
      *detail = "random manifest invariants failed";
      return false;
    }
  }

  const auto casia = shaped(4, 300, 4);
  if (eval::build_folds(casia, eval::FoldMode::kSpeaker).folds.size() != 4) {
    *detail = "4-speaker corpus did not give 4 folds";
    return false;
  }
  const auto iemocap = shaped(10, 8, 2);
  const auto by_speaker = eval::build_folds(iemocap, eval::FoldMode::kSpeaker);
  const auto by_session = eval::build_folds(iemocap, eval::FoldMode::kSession);
  if (by_speaker.folds.size() != 10 || by_session.folds.size() != 5) {
    *detail = "10-speaker/5-session corpus gave wrong fold counts";
    return false;
  }
  *detail = "30 random manifests + corpus-shaped fold counts (4 / 10 / 5)";
  return true;
}

// --------------------------------------------------------------------------
// 7. DSP oracles and bit-exact round trips.
// --------------------------------------------------------------------------
bool run_dsp_oracles(std::string* detail) {
  Rng rng(99);

  // pre-emphasis against the direct formula
  audio::Waveform w;
  w.sample_rate_hz = 16000;
  w.samples.resize(64);
  for (auto& s : w.samples) s = rng.uniform(-1, 1);
  const auto pre = audio::pre_emphasize(w, 0.97);
  if (pre.samples[0] != w.samples[0]) {
    *detail = "pre-emphasis first sample";
    return false;
  }
  for (size_t t = 1; t < w.samples.size(); ++t) {
    if (pre.samples[t] != w.samples[t] - 0.97 * w.samples[t - 1]) {
      *detail = "pre-emphasis formula mismatch";
      return false;
    }
  }

  // frame count
  audio::StftConfig stft;
  audio::Waveform one_second;
  one_second.sample_rate_hz = 16000;
  one_second.samples.assign(16000, 0.25);
  if (audio::frame_and_window(one_second, stft).dim(0) != 99) {
    *detail = "16000 samples did not give 99 frames";
    return false;
  }

  // FFT vs direct-summation DFT
  double worst_fft = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> frame(320);
    for (auto& v : frame) v = rng.uniform(-1, 1);
    Tensor<double> frames({1, 320}, std::vector<double>(frame));
    const auto power = audio::power_spectrum(frames, 512);
    const auto oracle = tft_tests::naive_dft_power(frame, 512);
    for (int64_t k = 0; k <= 256; ++k) {
      const double scale = std::max(std::fabs(oracle[static_cast<size_t>(k)]), 1e-12);
      worst_fft = std::max(worst_fft,
                           std::fabs(power.at({0, k}) - oracle[static_cast<size_t>(k)]) / scale);
    }
  }
  if (worst_fft >= 1e-9) {
    *detail = "fft error " + std::to_string(worst_fft);
    return false;
  }

  // 1 kHz band localization
  {
    std::vector<double> samples(16000);
    for (size_t t = 0; t < samples.size(); ++t) {
      samples[t] = 0.5 * std::sin(2.0 * M_PI * 1000.0 * static_cast<double>(t) / 16000.0);
    }
    audio::Waveform tone;
    tone.sample_rate_hz = 16000;
    tone.samples = std::move(samples);
    audio::FeatureConfig fcfg;
    fcfg.stft.preemphasis_coeff = 0.0;
    const auto segs = audio::extract_segments(tone, fcfg, "tone", 0);
    std::vector<double> band_energy(80, 0.0);
    for (int64_t m = 0; m < 80; ++m)
      for (int64_t t = 0; t < 80; ++t)
        band_energy[static_cast<size_t>(m)] += segs[0].values[m * 80 + t];
    int64_t argmax = 0;
    for (int64_t m = 1; m < 80; ++m) {
      if (band_energy[static_cast<size_t>(m)] > band_energy[static_cast<size_t>(argmax)])
        argmax = m;
    }
    const auto fb = audio::build_mel_filterbank(16000, 512, 80, 0.0, 8000.0);
    const auto bin = static_cast<int64_t>(std::lround(1000.0 / (16000.0 / 512.0)));
    if (fb.weights.at({argmax, bin}) <= 0.0 && fb.weights.at({argmax, bin - 1}) <= 0.0 &&
        fb.weights.at({argmax, bin + 1}) <= 0.0) {
      *detail = "1 kHz tone mapped to band " + std::to_string(argmax) +
                " whose passband misses 1 kHz";
      return false;
    }
  }

  // cache and checkpoint round trips, bit-exact
  tft_tests::TempDir tmp("acceptance_io");
  {
    const auto segs = tft_tests::band_pattern_corpus(5, 3, 80, 80, 7);
    const std::string p = tmp.str() + "/x.tftf";
    audio::write_feature_cache(segs, p);
    const auto back = audio::read_feature_cache(p);
    for (size_t i = 0; i < segs.size(); ++i) {
      if (back[i].values != segs[i].values || back[i].utterance_id != segs[i].utterance_id ||
          back[i].label != segs[i].label || back[i].segment_index != segs[i].segment_index) {
        *detail = "cache round trip not bit-exact";
        return false;
      }
    }
  }
  {
    const auto cfg = tft_tests::tiny_model_config(4);
    Model<float> model(cfg, 5);
    nn::AdamConfig ac;
    nn::Adam<float> adam(model.parameters(), ac);
    const std::string p1 = tmp.str() + "/a.tftc", p2 = tmp.str() + "/b.tftc";
    save_checkpoint(model, &adam, 3, p1);
    Model<float> model2(cfg, 6);
    nn::Adam<float> adam2(model2.parameters(), ac);
    apply_checkpoint(read_checkpoint(p1), model2, &adam2);
    save_checkpoint(model2, &adam2, 3, p2);
    std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    if (sa.str() != sb.str()) {
      *detail = "checkpoint round trip not byte-identical";
      return false;
    }
  }

  std::ostringstream os;
  os.precision(3);
  os << "fft rel err " << worst_fft << "; frame count, tone band, round trips exact";
  *detail = os.str();
  return true;
}

// --------------------------------------------------------------------------
// 8. Ablation harness: four variants train and report; parameter ordering.
// --------------------------------------------------------------------------
bool run_ablation_harness(std::string* detail) {
  const auto corpus = tft_tests::make_separable_corpus(4, 4, 1, 2, 16, 16, 55);
  const auto cfg = tft_tests::tiny_model_config(4);
  train::TrainConfig tc;
  tc.batch_size = 16;
  tc.epochs = 1;
  tc.seed = 57;
  const auto rows = eval::run_ablations<float>(corpus.manifest, corpus.store, cfg, tc,
                                               eval::FoldMode::kSpeaker);
  if (rows.size() != 4 || rows[0].arch.name != "T+F" || rows[1].arch.name != "T+TF" ||
      rows[2].arch.name != "F+TF" || rows[3].arch.name != "T+F+TF") {
    *detail = "report rows missing or out of order";
    return false;
  }
  std::ostringstream txt;
  eval::write_ablation_report(txt, rows);
  if (txt.str().find("T+F+TF") == std::string::npos) {
    *detail = "report text missing the full architecture row";
    return false;
  }

  // parameter counts at the full-size configuration
  ModelConfig full;
  const int64_t full_params = Model<float>(full, 1).parameter_count();
  for (const auto& arch : eval::ablation_grid()) {
    if (arch.name == "T+F+TF") continue;
    ModelConfig variant;
    variant.use_time = arch.use_time;
    variant.use_freq = arch.use_freq;
    variant.use_fusion = arch.use_fusion;
    const int64_t params = Model<float>(variant, 1).parameter_count();
    if (params >= full_params) {
      *detail = arch.name + " has " + std::to_string(params) + " params, full has " +
                std::to_string(full_params);
      return false;
    }
  }
  *detail = "4-row report after 1-epoch training; every 2-module count < " +
            std::to_string(full_params);
  return true;
}

// --------------------------------------------------------------------------
// 9. Bit-identical reruns: checkpoints and logs.
// --------------------------------------------------------------------------
bool run_determinism(std::string* detail) {
  tft_tests::TempDir tmp("acceptance_det");
  const auto cfg = tft_tests::tiny_model_config(4);
  const auto data = tft_tests::band_pattern_corpus(8, 4, cfg.f, cfg.d, 11);

  auto run_once = [&](const std::string& tag) {
    train::TrainConfig tc;
    tc.batch_size = 8;
    tc.epochs = 3;
    tc.lr = 0.001;
    tc.seed = 2024;
    tc.checkpoint_dir = tmp.str() + "/" + tag;
    std::filesystem::create_directories(tc.checkpoint_dir);
    Model<float> model(cfg, tc.seed);
    train::Trainer<float> trainer(model, tc);
    trainer.run(data, tc.checkpoint_dir + "/log.csv");
  };
  run_once("a");
  run_once("b");

  auto slurp = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  if (slurp(tmp.str() + "/a/final.tftc") != slurp(tmp.str() + "/b/final.tftc")) {
    *detail = "final checkpoints differ";
    return false;
  }
  // logs compared on their deterministic columns; wall_ms is wall-clock time
  auto stable_log = [&](const std::string& p) {
    std::ifstream is(p);
    std::string line, out;
    while (std::getline(is, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  const auto la = stable_log(tmp.str() + "/a/log.csv");
  if (la.empty() || la != stable_log(tmp.str() + "/b/log.csv")) {
    *detail = "training logs differ";
    return false;
  }
  *detail = "checkpoints byte-identical; logs identical up to wall_ms";
  return true;
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion(1, "gradient suite (all differentiable ops, 5 seeds, rel err < 1e-4)",
            run_gradient_suite);
  criterion(2, "end-to-end shape trace on (2,1,80,80)", run_shape_trace);
  criterion(3, "attention rows stochastic within 1e-6 on 20 random inputs",
            run_attention_stochasticity);
  criterion(4, "learnability: >= 95% train WAR on the separable corpus", run_learnability);
  criterion(5, "WAR/UAR/confusion match the tally oracle", run_metric_oracle);
  criterion(6, "fold plan invariants and corpus-shaped fold counts", run_fold_invariants);
  criterion(7, "DSP oracles and bit-exact round trips", run_dsp_oracles);
  criterion(8, "ablation harness: 4 variants train and report", run_ablation_harness);
  criterion(9, "bit-identical reruns under a fixed seed", run_determinism);

  std::printf("%d/9 criteria passed in %.1f s\n", 9 - g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
