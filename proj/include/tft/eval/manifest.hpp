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

#ifndef TFT_EVAL_MANIFEST_HPP_
#define TFT_EVAL_MANIFEST_HPP_

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tft/common.hpp"

namespace tft::eval {

struct ManifestEntry {
  std::string utterance_id;
  std::string path;
  std::string speaker_id;
  std::string session_id;
  std::string label_name;
  int label = -1;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::string path_stem(const std::string& path) {
  const size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base;
}

}  // namespace detail

// Dataset description: one entry per utterance plus the fixed label table.
// The on-disk form is one `path,speaker_id,session_id,label` row per
// utterance; utterance ids are the path stems and must be unique.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::vector<std::string> labels;  // index -> name

  int n_classes() const { return static_cast<int>(labels.size()); }

  int label_index(const std::string& name) const {
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  void validate() const {
    if (entries.empty()) throw InputError("manifest has no entries");
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
      if (e.utterance_id.empty()) throw FormatError("manifest: empty utterance id");
      if (!seen.insert(e.utterance_id).second) {
        throw FormatError("manifest: duplicate utterance id " + e.utterance_id);
      }
      if (e.speaker_id.empty() || e.session_id.empty()) {
        throw FormatError("manifest: empty speaker or session id for " + e.utterance_id);
      }
      if (e.label < 0 || e.label >= n_classes()) {
        throw FormatError("manifest: label out of range for " + e.utterance_id);
      }
    }
  }

  // Resolves label indices from names, deriving a sorted label table when
  // none is supplied.
  static DatasetManifest from_entries(std::vector<ManifestEntry> entries,
                                      std::vector<std::string> fixed_labels = {}) {
    DatasetManifest m;
    if (fixed_labels.empty()) {
      std::set<std::string> names;
      for (const auto& e : entries) names.insert(e.label_name);
      m.labels.assign(names.begin(), names.end());
    } else {
      m.labels = std::move(fixed_labels);
    }
    for (auto& e : entries) {
      e.label = m.label_index(e.label_name);
      if (e.label < 0) {
        throw FormatError("manifest: label '" + e.label_name + "' not in the label table");
      }
    }
    m.entries = std::move(entries);
    m.validate();
    return m;
  }

  static DatasetManifest load(const std::string& path, std::vector<std::string> fixed_labels = {}) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open manifest: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    int64_t line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      const std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      std::vector<std::string> fields;
      std::stringstream ss(t);
      std::string field;
      while (std::getline(ss, field, ',')) fields.push_back(detail::trim(field));
      if (fields.size() != 4) {
        throw FormatError("manifest line " + std::to_string(line_no) +
                          ": expected path,speaker_id,session_id,label");
      }
      ManifestEntry e;
      e.path = fields[0];
      e.speaker_id = fields[1];
      e.session_id = fields[2];
      e.label_name = fields[3];
      e.utterance_id = detail::path_stem(e.path);
      entries.push_back(std::move(e));
    }
    return from_entries(std::move(entries), std::move(fixed_labels));
  }
};

}  // namespace tft::eval

#endif  // TFT_EVAL_MANIFEST_HPP_
