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

#ifndef TFT_EVAL_REPORT_HPP_
#define TFT_EVAL_REPORT_HPP_

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "tft/eval/protocol.hpp"

namespace tft::eval {

// 0.7443 -> "74.43"
inline std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

inline void write_confusion(std::ostream& os, const Metrics& m) {
  os << "confusion (rows true, cols predicted):\n";
  for (const auto& row : m.confusion) {
    for (int64_t v : row) os << std::setw(8) << v;
    os << "\n";
  }
}

// UAR averages only over classes with true samples; when a test set lacks a
// class entirely, say so next to the numbers.
inline void write_absent_class_note(std::ostream& os, const Metrics& m,
                                    const std::vector<std::string>& labels) {
  std::vector<std::string> absent;
  for (size_t c = 0; c < m.confusion.size(); ++c) {
    int64_t row_total = 0;
    for (int64_t v : m.confusion[c]) row_total += v;
    if (row_total == 0) absent.push_back(labels[c]);
  }
  if (absent.empty()) return;
  os << "note: UAR over " << m.confusion.size() - absent.size() << " of " << m.confusion.size()
     << " classes (no true samples:";
  for (const auto& l : absent) os << " " << l;
  os << ")\n";
}

// Human-readable per-fold and pooled results with integer confusion grids.
inline void write_protocol_report(std::ostream& os, const ProtocolResult& r) {
  os << "protocol: leave-one-" << fold_mode_name(r.mode) << "-out (" << r.per_fold.size()
     << " folds)\n";
  os << "labels:";
  for (const auto& l : r.labels) os << " " << l;
  os << "\n\n";
  for (const auto& fr : r.per_fold) {
    os << "fold " << fold_mode_name(r.mode) << "=" << fr.held_out << "  utterances "
       << fr.metrics.total() << "  WAR " << format_percent(fr.metrics.war) << "  UAR "
       << format_percent(fr.metrics.uar) << "\n";
    write_absent_class_note(os, fr.metrics, r.labels);
    write_confusion(os, fr.metrics);
    os << "\n";
  }
  os << "pooled  utterances " << r.pooled.total() << "  WAR " << format_percent(r.pooled.war)
     << "  UAR " << format_percent(r.pooled.uar) << "\n";
  write_confusion(os, r.pooled);
}

// Machine-readable mirror: metric rows then long-format confusion rows.
inline void write_protocol_csv(std::ostream& os, const ProtocolResult& r) {
  os << "block,unit,total,war,uar\n";
  char buf[64];
  auto metric_row = [&](const std::string& block, const std::string& unit, const Metrics& m) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", m.war, m.uar);
    os << block << "," << unit << "," << m.total() << "," << buf << "\n";
  };
  for (const auto& fr : r.per_fold) metric_row("fold", fr.held_out, fr.metrics);
  metric_row("pooled", "all", r.pooled);
  os << "block,unit,true_label,pred_label,count\n";
  auto confusion_rows = [&](const std::string& block, const std::string& unit, const Metrics& m) {
    for (size_t t = 0; t < m.confusion.size(); ++t)
      for (size_t p = 0; p < m.confusion[t].size(); ++p)
        os << block << "," << unit << "," << r.labels[t] << "," << r.labels[p] << ","
           << m.confusion[t][p] << "\n";
  };
  for (const auto& fr : r.per_fold) confusion_rows("fold", fr.held_out, fr.metrics);
  confusion_rows("pooled", "all", r.pooled);
}

// Four-row architecture comparison: module toggles plus pooled WAR/UAR.
inline void write_ablation_report(std::ostream& os, const std::vector<AblationRow>& rows) {
  os << std::left << std::setw(10) << "arch" << std::setw(9) << "T-Trans" << std::setw(9)
     << "F-Trans" << std::setw(10) << "TF-Trans" << std::setw(9) << "WAR" << std::setw(9) << "UAR"
     << "params\n";
  for (const auto& row : rows) {
    os << std::left << std::setw(10) << row.arch.name << std::setw(9)
       << (row.arch.use_time ? "yes" : "no") << std::setw(9) << (row.arch.use_freq ? "yes" : "no")
       << std::setw(10) << (row.arch.use_fusion ? "yes" : "no") << std::setw(9)
       << format_percent(row.protocol.pooled.war) << std::setw(9)
       << format_percent(row.protocol.pooled.uar) << row.trainable_params << "\n";
  }
}

inline void write_ablation_csv(std::ostream& os, const std::vector<AblationRow>& rows) {
  os << "arch,time,freq,fusion,war,uar,trainable_params\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", row.protocol.pooled.war,
                  row.protocol.pooled.uar);
    os << row.arch.name << "," << (row.arch.use_time ? 1 : 0) << "," << (row.arch.use_freq ? 1 : 0)
       << "," << (row.arch.use_fusion ? 1 : 0) << "," << buf << "," << row.trainable_params
       << "\n";
  }
}

}  // namespace tft::eval

#endif  // TFT_EVAL_REPORT_HPP_
