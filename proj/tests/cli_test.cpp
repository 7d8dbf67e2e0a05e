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

// End-to-end runs of the command-line binary on a tiny tone corpus.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args, const std::string& workdir) {
  const std::string out_file = workdir + "/cli_output.txt";
  const std::string cmd = std::string(TFT_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream is(out_file);
  std::stringstream ss;
  ss << is.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

// Strips the wall_ms column from a training log.
std::string log_without_wall(const std::string& path) {
  std::ifstream is(path);
  std::string line, out;
  while (std::getline(is, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

// A corpus of pure tones: 4 speakers x 4 classes, class-dependent frequency.
struct ToneCorpus {
  std::string dir;
  std::string manifest_path;
};

ToneCorpus make_tone_corpus(const std::string& dir) {
  fs::create_directories(dir + "/audio");
  const std::vector<std::string> labels = {"angry", "happy", "neutral", "sad"};
  std::ofstream manifest(dir + "/manifest.csv");
  tft::Rng rng(99);
  for (int sp = 0; sp < 4; ++sp) {
    for (int c = 0; c < 4; ++c) {
      const std::string utt = "spk" + std::to_string(sp) + "_" + labels[c];
      std::vector<double> samples(16000);
      const double freq = 500.0 + 900.0 * c;
      for (size_t t = 0; t < samples.size(); ++t) {
        samples[t] = 0.4 * std::sin(2.0 * M_PI * freq * static_cast<double>(t) / 16000.0) +
                     0.01 * rng.uniform(-1, 1);
      }
      const std::string wav = dir + "/audio/" + utt + ".wav";
      tft_tests::write_wav16(wav, samples, 16000);
      manifest << wav << ",spk" << sp << ",ses" << sp / 2 << "," << labels[c] << "\n";
    }
  }
  return {dir, dir + "/manifest.csv"};
}

// Reduced model/feature geometry so CLI runs stay fast.
const char* kTinyOverrides =
    " --features.n_mels=16 --features.segment_frames=16"
    " --model.f=16 --model.d=16 --model.c1=8"
    " --model.ff_time=16 --model.ff_freq=16 --model.ff_fusion=16";

}  // namespace

TEST_CASE("cli end-to-end: extract, train, eval, ablate, dump-attention") {
  tft_tests::TempDir tmp("cli");
  const auto corpus = make_tone_corpus(tmp.str());
  const std::string features = tmp.str() + "/features";

  // --- extract ---
  auto ext = run_cli("extract --manifest " + corpus.manifest_path + " --out " + features +
                         kTinyOverrides,
                     tmp.str());
  INFO(ext.output);
  REQUIRE(ext.exit_code == 0);
  CHECK(ext.output.find("extracted 16") != std::string::npos);
  CHECK(fs::exists(features + "/spk0_angry.tftf"));
  CHECK(fs::exists(features + "/labels.txt"));
  CHECK(fs::exists(features + "/summary.txt"));
  CHECK(fs::exists(features + "/resolved.cfg"));
  // 1 s of audio: 99 frames -> 6 segments of 16 frames per utterance
  CHECK(ext.output.find("angry: 24") != std::string::npos);  // 4 utterances x 6 segments

  // rerun without --force skips existing caches
  auto rerun = run_cli("extract --manifest " + corpus.manifest_path + " --out " + features +
                           kTinyOverrides,
                       tmp.str());
  REQUIRE(rerun.exit_code == 0);
  CHECK(rerun.output.find("extracted 0") != std::string::npos);
  CHECK(rerun.output.find("cached 16") != std::string::npos);

  // --- train: determinism incl. resolved-config echo ---
  const std::string run_a = tmp.str() + "/run_a";
  const std::string run_b = tmp.str() + "/run_b";
  const std::string train_flags = std::string(" --train.epochs=2 --train.batch_size=16") +
                                  kTinyOverrides;
  auto ta = run_cli("train --features " + features + " --seed 7 --out " + run_a + train_flags,
                    tmp.str());
  INFO(ta.output);
  REQUIRE(ta.exit_code == 0);
  REQUIRE(fs::exists(run_a + "/final.tftc"));
  REQUIRE(fs::exists(run_a + "/train_log.csv"));
  CHECK(count_lines(slurp(run_a + "/train_log.csv")) == 2);

  auto tb = run_cli("train --features " + features + " --seed 7 --out " + run_b + train_flags,
                    tmp.str());
  REQUIRE(tb.exit_code == 0);
  CHECK(slurp(run_a + "/final.tftc") == slurp(run_b + "/final.tftc"));
  CHECK(log_without_wall(run_a + "/train_log.csv") == log_without_wall(run_b + "/train_log.csv"));

  // rerunning from the echoed config reproduces the run bit-identically
  const std::string run_c = tmp.str() + "/run_c";
  auto tc = run_cli("train --config " + run_a + "/resolved.cfg --features " + features +
                        " --out " + run_c,
                    tmp.str());
  INFO(tc.output);
  REQUIRE(tc.exit_code == 0);
  CHECK(slurp(run_a + "/final.tftc") == slurp(run_c + "/final.tftc"));

  // lr 0 keeps train WAR flat across epochs. Full-batch training keeps the
  // batch statistics identical per epoch; with smaller batches the epoch
  // reshuffle changes batch-norm statistics even though weights are frozen.
  const std::string run_flat = tmp.str() + "/run_flat";
  auto tf = run_cli("train --features " + features + " --seed 7 --out " + run_flat +
                        " --train.lr=0 --train.epochs=3 --train.batch_size=96" + kTinyOverrides,
                    tmp.str());
  REQUIRE(tf.exit_code == 0);
  {
    std::ifstream log(run_flat + "/train_log.csv");
    std::string line;
    std::vector<std::string> wars;
    while (std::getline(log, line)) {
      std::stringstream ss(line);
      std::string field;
      std::vector<std::string> fields;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      wars.push_back(fields[2]);
    }
    REQUIRE(wars.size() == 3);
    CHECK(wars[0] == wars[1]);
    CHECK(wars[1] == wars[2]);
  }

  // --- resume: continuing from a checkpoint matches the straight run ---
  const std::string run_short = tmp.str() + "/run_short";
  auto ts = run_cli("train --features " + features + " --seed 7 --out " + run_short +
                        " --train.epochs=1 --train.batch_size=16" + kTinyOverrides,
                    tmp.str());
  REQUIRE(ts.exit_code == 0);
  const std::string run_resumed = tmp.str() + "/run_resumed";
  auto tr = run_cli("train --features " + features + " --seed 7 --out " + run_resumed +
                        " --resume " + run_short + "/final.tftc" + train_flags,
                    tmp.str());
  INFO(tr.output);
  REQUIRE(tr.exit_code == 0);
  CHECK(slurp(run_resumed + "/final.tftc") == slurp(run_a + "/final.tftc"));
  CHECK(count_lines(slurp(run_resumed + "/train_log.csv")) == 1);  // only epoch 2

  // --- grad-check mode runs the same loop in double precision ---
  const std::string run_double = tmp.str() + "/run_double";
  auto td = run_cli("train --features " + features + " --seed 7 --out " + run_double +
                        " --train.grad_check_mode=true --train.epochs=1 --train.batch_size=16" +
                        kTinyOverrides,
                    tmp.str());
  INFO(td.output);
  REQUIRE(td.exit_code == 0);
  CHECK(fs::exists(run_double + "/final.tftc"));

  // --- eval: speaker folds, then session folds ---
  const std::string eval_out = tmp.str() + "/eval_speaker";
  auto ev = run_cli("eval --manifest " + corpus.manifest_path + " --features " + features +
                        " --mode speaker --jobs 2 --out " + eval_out +
                        " --train.epochs=2 --train.batch_size=16 --seed 11" + kTinyOverrides,
                    tmp.str());
  INFO(ev.output);
  REQUIRE(ev.exit_code == 0);
  const std::string report = slurp(eval_out + "/report.txt");
  for (int sp = 0; sp < 4; ++sp) {
    CHECK(report.find("fold speaker=spk" + std::to_string(sp)) != std::string::npos);
  }
  CHECK(report.find("pooled") != std::string::npos);
  CHECK(fs::exists(eval_out + "/report.csv"));

  const std::string eval_ses = tmp.str() + "/eval_session";
  auto es = run_cli("eval --manifest " + corpus.manifest_path + " --features " + features +
                        " --mode session --out " + eval_ses +
                        " --train.epochs=1 --train.batch_size=16 --seed 11" + kTinyOverrides,
                    tmp.str());
  REQUIRE(es.exit_code == 0);
  CHECK(slurp(eval_ses + "/report.txt").find("leave-one-session-out (2 folds)") !=
        std::string::npos);

  // --- ablate: full grid then --only ---
  const std::string ab_out = tmp.str() + "/ablate";
  auto ab = run_cli("ablate --manifest " + corpus.manifest_path + " --features " + features +
                        " --out " + ab_out + " --train.epochs=1 --train.batch_size=16 --seed 13" +
                        kTinyOverrides,
                    tmp.str());
  INFO(ab.output);
  REQUIRE(ab.exit_code == 0);
  const std::string ablation = slurp(ab_out + "/ablation.csv");
  const auto tf_pos = ablation.find("T+F,");
  const auto ttf_pos = ablation.find("T+TF,");
  const auto ftf_pos = ablation.find("F+TF,");
  const auto full_pos = ablation.find("T+F+TF,");
  REQUIRE(tf_pos != std::string::npos);
  REQUIRE(ttf_pos != std::string::npos);
  REQUIRE(ftf_pos != std::string::npos);
  REQUIRE(full_pos != std::string::npos);
  CHECK(tf_pos < ttf_pos);
  CHECK(ttf_pos < ftf_pos);
  CHECK(ftf_pos < full_pos);
  CHECK(slurp(ab_out + "/ablation.txt").find("WAR") != std::string::npos);

  const std::string only_out = tmp.str() + "/ablate_only";
  auto only = run_cli("ablate --manifest " + corpus.manifest_path + " --features " + features +
                          " --out " + only_out + " --only T+TF --train.epochs=1 --seed 13" +
                          kTinyOverrides,
                      tmp.str());
  REQUIRE(only.exit_code == 0);
  CHECK(slurp(only_out + "/ablation.csv").find("T+F,") == std::string::npos);
  CHECK(slurp(only_out + "/ablation.csv").find("T+TF,") != std::string::npos);

  // --- dump-attention ---
  const std::string dump_out = tmp.str() + "/attn";
  auto dump = run_cli("dump-attention --checkpoint " + run_a + "/final.tftc" +
                          " --sample spk0_angry:1 --features " + features + " --out " + dump_out +
                          " --per-head" + kTinyOverrides,
                      tmp.str());
  INFO(dump.output);
  REQUIRE(dump.exit_code == 0);
  for (const char* stem : {"input_logmel", "time_attention", "freq_attention",
                           "fusion_attention"}) {
    CHECK(fs::exists(dump_out + "/" + std::string(stem) + ".csv"));
    CHECK(fs::exists(dump_out + "/" + std::string(stem) + ".meta"));
  }
  CHECK(fs::exists(dump_out + "/time_attention_head0.csv"));
  // time map is d x d (16 x 16 here); fusion map is (d/4) x (d/4)
  CHECK(count_lines(slurp(dump_out + "/time_attention.csv")) == 16);
  CHECK(count_lines(slurp(dump_out + "/fusion_attention.csv")) == 4);
  CHECK(slurp(dump_out + "/freq_attention.meta").find("rows = mel_bands") != std::string::npos);

  // unknown sample fails with a nonzero exit
  auto missing = run_cli("dump-attention --checkpoint " + run_a + "/final.tftc" +
                             " --sample nosuch --features " + features + " --out " + dump_out +
                             kTinyOverrides,
                         tmp.str());
  CHECK(missing.exit_code != 0);
}

TEST_CASE("cli: failed extraction reports per-file errors and exits nonzero") {
  tft_tests::TempDir tmp("cli_fail");
  std::ofstream manifest(tmp.str() + "/manifest.csv");
  manifest << tmp.str() + "/missing.wav,spk0,ses0,angry\n";
  manifest << tmp.str() + "/also_missing.wav,spk1,ses0,happy\n";
  manifest.close();
  auto res = run_cli("extract --manifest " + tmp.str() + "/manifest.csv --out " + tmp.str() +
                         "/features",
                     tmp.str());
  CHECK(res.exit_code != 0);
  CHECK(res.output.find("failed 2") != std::string::npos);
  CHECK(res.output.find("error: missing:") != std::string::npos);
}

TEST_CASE("cli: unknown override keys are rejected") {
  tft_tests::TempDir tmp("cli_badkey");
  auto res = run_cli("train --features /nonexistent --out " + tmp.str() +
                         "/out --train.warp_speed=9",
                     tmp.str());
  CHECK(res.exit_code != 0);
  CHECK(res.output.find("unknown config key") != std::string::npos);
}
