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

#ifndef WAVECLS_EVALUATOR_HPP_
#define WAVECLS_EVALUATOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace wavecls {

/// One classified item: a segment, or a whole track after voting.
struct PredictionRecord {
  std::string segment_id;
  std::string track_id;
  std::size_t true_label = 0;
  std::size_t pred_label = 0;
  std::vector<double> probs;
};

/// Builds a segment record from logits (softmax + lowest-index argmax).
PredictionRecord make_record(std::string segment_id, std::string track_id,
                             std::size_t true_label, std::span<const float> logits);

/// counts(truth, prediction); rows are ground truth.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t n_classes)
      : n_(n_classes), counts_(n_classes * n_classes, 0) {}

  std::size_t n_classes() const { return n_; }
  std::size_t& at(std::size_t truth, std::size_t pred) { return counts_[truth * n_ + pred]; }
  std::size_t at(std::size_t truth, std::size_t pred) const { return counts_[truth * n_ + pred]; }
  std::span<const std::size_t> counts() const { return counts_; }

  std::size_t total() const;
  std::size_t row_sum(std::size_t truth) const;
  std::size_t col_sum(std::size_t pred) const;
  std::size_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> counts_;
};

/// Throws DataError for a label outside [0, n_classes).
ConfusionMatrix confusion(std::span<const PredictionRecord> records, std::size_t n_classes);

/// One-vs-rest metrics of a single class.
struct ClassMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// accuracy = (TP+TN)/total, precision = TP/(TP+FP), recall = TP/(TP+FN),
/// F1 = 2PR/(P+R). A zero denominator yields 0 for precision, recall and F1.
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

struct MacroMetrics {
  double accuracy = 0.0;   // mean of per-class one-vs-rest accuracies
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double multiclass_accuracy = 0.0;  // trace / total, reported separately
};

/// Unweighted means over classes. multiclass_accuracy is left at 0; it needs
/// the confusion matrix (see multiclass_accuracy()).
MacroMetrics macro_metrics(std::span<const ClassMetrics> per_class);

double multiclass_accuracy(const ConfusionMatrix& cm);

enum class EvalLevel { kSegment, kSong };

std::string_view to_string(EvalLevel level);

/// Collapses segment records to one record per track, ordered by track id.
/// The track label is the most frequent segment prediction; ties go to the
/// class with the larger summed probability, then to the lower index. Track
/// probabilities are the mean of the segment probabilities. Independent of
/// the order of `records`.
std::vector<PredictionRecord> song_vote(std::span<const PredictionRecord> records);

struct EvalReport {
  EvalLevel level = EvalLevel::kSegment;
  std::size_t item_count = 0;
  std::vector<ClassMetrics> per_class;
  MacroMetrics macro;
  ConfusionMatrix confusion;
};

/// Throws DataError for empty input or out-of-range labels.
EvalReport evaluate(std::span<const PredictionRecord> records, EvalLevel level,
                    std::size_t n_classes);

/// {level, macro{accuracy, precision, recall, f1, multiclass_accuracy},
///  per_class[...], confusion[row-major counts]}
nlohmann::json to_json(const EvalReport& report);

/// segment_id,track_id,true_label,pred_label,p0,p1,... with probabilities
/// printed to 6 decimals.
std::string format_predictions_csv(std::span<const PredictionRecord> records,
                                   std::size_t n_classes);
std::vector<PredictionRecord> parse_predictions_csv(std::string_view text);

/// Square table with artist names heading both the rows (truth) and
/// columns (prediction).
std::string format_confusion_csv(const ConfusionMatrix& cm,
                                 std::span<const std::string> class_names);

}  // namespace wavecls

#endif  // WAVECLS_EVALUATOR_HPP_
