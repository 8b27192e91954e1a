// Copyright 2026 The wavecls Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wavecls/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include "wavecls/csv.hpp"
#include "wavecls/error.hpp"
#include "wavecls/head.hpp"

namespace wavecls {

PredictionRecord make_record(std::string segment_id, std::string track_id,
                             std::size_t true_label, std::span<const float> logits) {
  Prediction p = predict(logits);
  return {std::move(segment_id), std::move(track_id), true_label, p.label, std::move(p.probs)};
}

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::size_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) s += at(truth, p);
  return s;
}

std::size_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::size_t s = 0;
  for (std::size_t t = 0; t < n_; ++t) s += at(t, pred);
  return s;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t s = 0;
  for (std::size_t c = 0; c < n_; ++c) s += at(c, c);
  return s;
}

ConfusionMatrix confusion(std::span<const PredictionRecord> records, std::size_t n_classes) {
  ConfusionMatrix cm(n_classes);
  for (const auto& r : records) {
    if (r.true_label >= n_classes || r.pred_label >= n_classes) {
      throw DataError("record '" + r.segment_id + "' has a label outside [0, " +
                      std::to_string(n_classes) + ")");
    }
    ++cm.at(r.true_label, r.pred_label);
  }
  return cm;
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  std::vector<ClassMetrics> out(cm.n_classes());
  for (std::size_t c = 0; c < cm.n_classes(); ++c) {
    ClassMetrics& m = out[c];
    m.tp = cm.at(c, c);
    m.fp = cm.col_sum(c) - m.tp;
    m.fn = cm.row_sum(c) - m.tp;
    m.tn = total - m.tp - m.fp - m.fn;
    const auto tp = static_cast<double>(m.tp);
    m.accuracy = total ? static_cast<double>(m.tp + m.tn) / static_cast<double>(total) : 0.0;
    m.precision = (m.tp + m.fp) ? tp / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) ? tp / static_cast<double>(m.tp + m.fn) : 0.0;
    const double pr = m.precision + m.recall;
    m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  }
  return out;
}

MacroMetrics macro_metrics(std::span<const ClassMetrics> per_class) {
  MacroMetrics m;
  if (per_class.empty()) return m;
  for (const auto& c : per_class) {
    m.accuracy += c.accuracy;
    m.precision += c.precision;
    m.recall += c.recall;
    m.f1 += c.f1;
  }
  const auto n = static_cast<double>(per_class.size());
  m.accuracy /= n;
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

double multiclass_accuracy(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  return total ? static_cast<double>(cm.trace()) / static_cast<double>(total) : 0.0;
}

std::string_view to_string(EvalLevel level) {
  return level == EvalLevel::kSong ? "song" : "segment";
}

std::vector<PredictionRecord> song_vote(std::span<const PredictionRecord> records) {
  std::map<std::string, std::vector<const PredictionRecord*>> tracks;
  for (const auto& r : records) tracks[r.track_id].push_back(&r);

  std::vector<PredictionRecord> out;
  out.reserve(tracks.size());
  for (auto& [track_id, group] : tracks) {
    std::sort(group.begin(), group.end(), [](const auto* a, const auto* b) {
      return a->segment_id < b->segment_id;
    });
    const std::size_t n_classes = group.front()->probs.size();
    std::vector<std::size_t> votes(n_classes, 0);
    std::vector<double> prob_sum(n_classes, 0.0);
    for (const auto* r : group) {
      if (r->probs.size() != n_classes || r->pred_label >= n_classes) {
        throw DataError("track '" + track_id + "' mixes records of different class counts");
      }
      if (r->true_label != group.front()->true_label) {
        throw DataError("track '" + track_id + "' has segments with different true labels");
      }
      ++votes[r->pred_label];
      for (std::size_t c = 0; c < n_classes; ++c) prob_sum[c] += r->probs[c];
    }
    std::size_t winner = 0;
    for (std::size_t c = 1; c < n_classes; ++c) {
      if (votes[c] > votes[winner] ||
          (votes[c] == votes[winner] && prob_sum[c] > prob_sum[winner])) {
        winner = c;
      }
    }
    PredictionRecord track;
    track.segment_id = track_id;
    track.track_id = track_id;
    track.true_label = group.front()->true_label;
    track.pred_label = winner;
    track.probs.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      track.probs[c] = prob_sum[c] / static_cast<double>(group.size());
    }
    out.push_back(std::move(track));
  }
  return out;
}

EvalReport evaluate(std::span<const PredictionRecord> records, EvalLevel level,
                    std::size_t n_classes) {
  if (records.empty()) throw DataError("evaluate: no prediction records");
  std::vector<PredictionRecord> voted;
  if (level == EvalLevel::kSong) {
    voted = song_vote(records);
    records = voted;
  }
  EvalReport report;
  report.level = level;
  report.item_count = records.size();
  report.confusion = confusion(records, n_classes);
  report.per_class = per_class_metrics(report.confusion);
  report.macro = macro_metrics(report.per_class);
  report.macro.multiclass_accuracy = multiclass_accuracy(report.confusion);
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    per_class.push_back({{"class", c},
                         {"tp", m.tp},
                         {"fp", m.fp},
                         {"fn", m.fn},
                         {"tn", m.tn},
                         {"accuracy", m.accuracy},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1}});
  }
  return {{"level", std::string(to_string(report.level))},
          {"macro",
           {{"accuracy", report.macro.accuracy},
            {"precision", report.macro.precision},
            {"recall", report.macro.recall},
            {"f1", report.macro.f1},
            {"multiclass_accuracy", report.macro.multiclass_accuracy}}},
          {"per_class", std::move(per_class)},
          {"confusion", std::vector<std::size_t>(report.confusion.counts().begin(),
                                                 report.confusion.counts().end())}};
}

std::string format_predictions_csv(std::span<const PredictionRecord> records,
                                   std::size_t n_classes) {
  csv::Row header = {"segment_id", "track_id", "true_label", "pred_label"};
  for (std::size_t c = 0; c < n_classes; ++c) header.push_back("p" + std::to_string(c));
  std::string out = csv::format_row(header);
  char buf[32];
  for (const auto& r : records) {
    if (r.probs.size() != n_classes) {
      throw DataError("record '" + r.segment_id + "' has " + std::to_string(r.probs.size()) +
                      " probabilities, expected " + std::to_string(n_classes));
    }
    csv::Row row = {r.segment_id, r.track_id, std::to_string(r.true_label),
                    std::to_string(r.pred_label)};
    for (double p : r.probs) {
      std::snprintf(buf, sizeof(buf), "%.6f", p);
      row.emplace_back(buf);
    }
    out += csv::format_row(row);
  }
  return out;
}

std::vector<PredictionRecord> parse_predictions_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows[0].size() < 4 || rows[0][0] != "segment_id") {
    throw ParseError("predictions: missing header");
  }
  const std::size_t width = rows[0].size();
  std::vector<PredictionRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != width) throw ParseError("predictions: ragged row " + std::to_string(i + 1));
    try {
      PredictionRecord r{row[0], row[1], std::stoul(row[2]), std::stoul(row[3]), {}};
      for (std::size_t c = 4; c < width; ++c) r.probs.push_back(std::stod(row[c]));
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("predictions: bad number on row " + std::to_string(i + 1));
    }
  }
  return out;
}

std::string format_confusion_csv(const ConfusionMatrix& cm,
                                 std::span<const std::string> class_names) {
  if (class_names.size() != cm.n_classes()) {
    throw DataError("confusion export: " + std::to_string(class_names.size()) +
                    " names for " + std::to_string(cm.n_classes()) + " classes");
  }
  csv::Row header = {"actual\\predicted"};
  header.insert(header.end(), class_names.begin(), class_names.end());
  std::string out = csv::format_row(header);
  for (std::size_t t = 0; t < cm.n_classes(); ++t) {
    csv::Row row = {class_names[t]};
    for (std::size_t p = 0; p < cm.n_classes(); ++p) row.push_back(std::to_string(cm.at(t, p)));
    out += csv::format_row(row);
  }
  return out;
}

}  // namespace wavecls
