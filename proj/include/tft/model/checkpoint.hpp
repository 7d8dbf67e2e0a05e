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

#ifndef TFT_MODEL_CHECKPOINT_HPP_
#define TFT_MODEL_CHECKPOINT_HPP_

#include <fstream>
#include <type_traits>
#include <string>
#include <vector>

#include "tft/common.hpp"
#include "tft/io/binary.hpp"
#include "tft/model/model.hpp"
#include "tft/nn/adam.hpp"

namespace tft {

// Checkpoint: "TFTC" magic, u16 version, u32 record count, per-record
// (length-prefixed name, u8 trainable flag, u16 ndim, u32 dims, f32 payload),
// then u8 optimizer flag with u64 step plus per-trainable-record f32 first
// and second moments, and finally a u32 epoch counter. Round trips are
// byte-identical.

inline constexpr char kCheckpointMagic[4] = {'T', 'F', 'T', 'C'};
inline constexpr uint16_t kCheckpointVersion = 1;

struct CheckpointRecord {
  std::string name;
  Shape shape;
  std::vector<float> values;
  bool trainable = true;
};

struct Checkpoint {
  std::vector<CheckpointRecord> records;
  bool has_optimizer = false;
  uint64_t adam_step = 0;
  std::vector<std::vector<float>> adam_m, adam_v;  // aligned with trainable records
  uint32_t epoch = 0;
};

template <typename T>
Checkpoint snapshot(const Model<T>& model, nn::Adam<std::type_identity_t<T>>* optimizer, uint32_t epoch) {
  Checkpoint ck;
  ck.epoch = epoch;
  for (const auto& p : model.parameters()) {
    CheckpointRecord rec;
    rec.name = p.name;
    rec.shape = p.tensor->shape;
    rec.trainable = p.trainable;
    rec.values.reserve(p.tensor->values.size());
    for (const T& v : p.tensor->values) rec.values.push_back(static_cast<float>(v));
    ck.records.push_back(std::move(rec));
  }
  if (optimizer) {
    ck.has_optimizer = true;
    ck.adam_step = optimizer->step_count();
    for (size_t i = 0; i < optimizer->size(); ++i) {
      auto cast = [](const std::vector<T>& src) {
        std::vector<float> dst;
        dst.reserve(src.size());
        for (const T& v : src) dst.push_back(static_cast<float>(v));
        return dst;
      };
      ck.adam_m.push_back(cast(optimizer->moment1(i)));
      ck.adam_v.push_back(cast(optimizer->moment2(i)));
    }
  }
  return ck;
}

inline void write_checkpoint(const Checkpoint& ck, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw InputError("cannot open checkpoint for writing: " + path);
  io::put_bytes(os, kCheckpointMagic, 4);
  io::put_u16(os, kCheckpointVersion);
  io::put_u32(os, static_cast<uint32_t>(ck.records.size()));
  for (const auto& rec : ck.records) {
    io::put_string(os, rec.name);
    os.put(rec.trainable ? 1 : 0);
    io::put_u16(os, static_cast<uint16_t>(rec.shape.size()));
    for (int64_t d : rec.shape) io::put_u32(os, static_cast<uint32_t>(d));
    io::put_f32_array(os, rec.values.data(), rec.values.size());
  }
  os.put(ck.has_optimizer ? 1 : 0);
  if (ck.has_optimizer) {
    io::put_u64(os, ck.adam_step);
    for (size_t i = 0; i < ck.adam_m.size(); ++i) {
      io::put_f32_array(os, ck.adam_m[i].data(), ck.adam_m[i].size());
      io::put_f32_array(os, ck.adam_v[i].data(), ck.adam_v[i].size());
    }
  }
  io::put_u32(os, ck.epoch);
  if (!os) throw InputError("failed writing checkpoint: " + path);
}

inline Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open checkpoint: " + path);
  io::expect_magic(is, kCheckpointMagic, "checkpoint");
  const uint16_t version = io::get_u16(is, "checkpoint version");
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version) + " in " + path);
  }
  Checkpoint ck;
  const uint32_t count = io::get_u32(is, "checkpoint record count");
  for (uint32_t i = 0; i < count; ++i) {
    CheckpointRecord rec;
    rec.name = io::get_string(is, "checkpoint record name");
    int flag = is.get();
    if (flag == EOF) throw FormatError("truncated file while reading trainable flag");
    rec.trainable = flag != 0;
    const uint16_t ndim = io::get_u16(is, "checkpoint record rank");
    int64_t numel = 1;
    for (uint16_t k = 0; k < ndim; ++k) {
      const uint32_t dim = io::get_u32(is, "checkpoint record dim");
      if (dim == 0) throw FormatError("zero dimension in checkpoint record " + rec.name);
      rec.shape.push_back(static_cast<int64_t>(dim));
      numel *= dim;
    }
    rec.values.resize(static_cast<size_t>(numel));
    io::get_f32_array(is, rec.values.data(), rec.values.size(), "checkpoint payload");
    ck.records.push_back(std::move(rec));
  }
  int opt_flag = is.get();
  if (opt_flag == EOF) throw FormatError("truncated file while reading optimizer flag");
  ck.has_optimizer = opt_flag != 0;
  if (ck.has_optimizer) {
    ck.adam_step = io::get_u64(is, "optimizer step");
    for (const auto& rec : ck.records) {
      if (!rec.trainable) continue;
      std::vector<float> m(rec.values.size()), v(rec.values.size());
      io::get_f32_array(is, m.data(), m.size(), "optimizer first moment");
      io::get_f32_array(is, v.data(), v.size(), "optimizer second moment");
      ck.adam_m.push_back(std::move(m));
      ck.adam_v.push_back(std::move(v));
    }
  }
  ck.epoch = io::get_u32(is, "checkpoint epoch");
  return ck;
}

// Restores parameters (and optimizer state when present) into an existing
// model built from the same configuration.
template <typename T>
void apply_checkpoint(const Checkpoint& ck, Model<T>& model,
                      nn::Adam<std::type_identity_t<T>>* optimizer) {
  auto& params = model.parameters();
  if (ck.records.size() != params.size()) {
    throw FormatError("checkpoint has " + std::to_string(ck.records.size()) +
                      " records but model has " + std::to_string(params.size()) + " parameters");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    const auto& rec = ck.records[i];
    auto& p = params[i];
    if (rec.name != p.name || rec.shape != p.tensor->shape) {
      throw FormatError("checkpoint record " + rec.name + " does not match parameter " + p.name);
    }
    for (size_t j = 0; j < rec.values.size(); ++j) {
      p.tensor->values[j] = static_cast<T>(rec.values[j]);
    }
  }
  if (optimizer) {
    if (!ck.has_optimizer) throw FormatError("checkpoint has no optimizer state to restore");
    if (ck.adam_m.size() != optimizer->size()) {
      throw FormatError("checkpoint optimizer state does not match trainable parameter count");
    }
    optimizer->set_step_count(ck.adam_step);
    for (size_t i = 0; i < optimizer->size(); ++i) {
      auto& m = optimizer->moment1(i);
      auto& v = optimizer->moment2(i);
      if (ck.adam_m[i].size() != m.size()) {
        throw FormatError("checkpoint moment size mismatch at index " + std::to_string(i));
      }
      for (size_t j = 0; j < m.size(); ++j) {
        m[j] = static_cast<T>(ck.adam_m[i][j]);
        v[j] = static_cast<T>(ck.adam_v[i][j]);
      }
    }
  }
}

template <typename T>
void save_checkpoint(const Model<T>& model, nn::Adam<std::type_identity_t<T>>* optimizer,
                     uint32_t epoch,
                     const std::string& path) {
  write_checkpoint(snapshot(model, optimizer, epoch), path);
}

}  // namespace tft

#endif  // TFT_MODEL_CHECKPOINT_HPP_
