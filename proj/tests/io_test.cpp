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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "support/synthetic.hpp"
#include "tft/io/run_config.hpp"

using namespace tft;
using Catch::Approx;

TEST_CASE("run config serializes and reparses to the same resolved state") {
  tft_tests::TempDir tmp("runcfg");
  io::RunConfig cfg;
  cfg.train.lr = 0.0031415926535;
  cfg.train.seed = 424242;
  cfg.model.n_classes = 6;
  cfg.features.znorm_segments = true;
  cfg.io.out_dir = "/tmp/somewhere";
  const std::string path = tmp.str() + "/run.cfg";
  cfg.write_file(path);

  const auto back = io::RunConfig::from_file(path);
  CHECK(back.train.lr == cfg.train.lr);
  CHECK(back.train.seed == cfg.train.seed);
  CHECK(back.model.n_classes == 6);
  CHECK(back.features.znorm_segments);
  CHECK(back.io.out_dir == "/tmp/somewhere");
  CHECK(back.serialize() == cfg.serialize());
}

TEST_CASE("unknown keys and sections are rejected") {
  io::RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("train", "turbo", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.set("nonsense", "x", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.set("train", "lr", "fast"), ConfigError);
  CHECK_THROWS_AS(cfg.set("eval", "mode", "sideways"), ConfigError);
}

TEST_CASE("overrides use the section.key=value form") {
  io::RunConfig cfg;
  cfg.apply_override("train.lr=0.01");
  CHECK(cfg.train.lr == Approx(0.01));
  cfg.apply_override("model.use_freq=false");
  CHECK(!cfg.model.use_freq);
  cfg.apply_override("io.out_dir=/tmp/x");
  CHECK(cfg.io.out_dir == "/tmp/x");
  CHECK_THROWS_AS(cfg.apply_override("train.lr"), ConfigError);
  CHECK_THROWS_AS(cfg.apply_override("lr=0.1"), ConfigError);
}

TEST_CASE("config files support sections and comments") {
  tft_tests::TempDir tmp("cfgfile");
  {
    std::ofstream os(tmp.str() + "/x.cfg");
    os << "# a comment\n\n[train]\nlr = 0.5\nseed = 12\n\n[model]\nn_classes = 6\n";
  }
  const auto cfg = io::RunConfig::from_file(tmp.str() + "/x.cfg");
  CHECK(cfg.train.lr == Approx(0.5));
  CHECK(cfg.train.seed == 12);
  CHECK(cfg.model.n_classes == 6);

  {
    std::ofstream os(tmp.str() + "/bad.cfg");
    os << "lr = 0.5\n";  // key before any section
  }
  CHECK_THROWS_AS(io::RunConfig::from_file(tmp.str() + "/bad.cfg"), FormatError);
}

TEST_CASE("model config derivation validates dimensions") {
  io::RunConfig cfg;
  cfg.model.f = 81;
  CHECK_THROWS_AS(cfg.model_config(), ConfigError);
  cfg.model.f = 16;
  cfg.model.d = 16;
  cfg.model.heads_time = 3;  // embed 4 not divisible by 3
  CHECK_THROWS_AS(cfg.model_config(), ConfigError);
  cfg.model.heads_time = 2;
  cfg.model.heads_fusion = 4;
  const auto mc = cfg.model_config();
  CHECK(mc.attn_time.embed_dim == 4);
  CHECK(mc.attn_freq.embed_dim == 4);
  CHECK(mc.classifier_in() == 8);
}
