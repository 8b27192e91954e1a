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

#ifndef WAVECLS_TRAINER_HPP_
#define WAVECLS_TRAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "json.hpp"
#include "wavecls/audio_io.hpp"
#include "wavecls/checkpoint.hpp"
#include "wavecls/model.hpp"

namespace wavecls {

struct TrainConfig {
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t patience = 10;
  std::size_t max_epochs = 500;
  std::uint64_t seed = 0;

  /// Throws ConfigError when a field is outside its valid range.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

nlohmann::json to_json(const TrainConfig& cfg);
/// Missing keys keep their defaults; ill-typed keys throw ConfigError.
TrainConfig train_config_from_json(const nlohmann::json& j);

/// First and second moment estimates per parameter tensor.
template <typename T>
struct AdamState {
  std::vector<BasicTensor<T>> m;
  std::vector<BasicTensor<T>> v;
  std::uint64_t step = 0;
};

template <typename T>
AdamState<T> make_adam_state(const ModelParams<T>& params);

/// One Adam update of a flat parameter block at (already incremented)
/// step `step` >= 1.
template <typename T>
void adam_update(std::span<T> theta, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 std::uint64_t step, const TrainConfig& cfg);

/// Increments the step counter, then updates every tensor.
template <typename T>
void adam_step(ModelParams<T>& params, const ModelParams<T>& grads, AdamState<T>& state,
               const TrainConfig& cfg);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double valid_accuracy = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_valid_accuracy = 0.0;
  bool early_stopped = false;
};

/// With `include_timing` false the output depends only on the inputs and
/// seed, so repeated deterministic runs produce identical bytes.
nlohmann::json to_json(const TrainHistory& history, bool include_timing);

struct TrainHooks {
  /// Replaces the default model-selection metric (segment accuracy on the
  /// validation set).
  std::function<double(const ModelParams<float>&)> validation_metric;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  Checkpoint best;
  TrainHistory history;
};

/// Mini-batch Adam on mean cross-entropy. After every epoch the validation
/// metric is computed; a strictly higher value replaces the kept
/// checkpoint, and training stops after `patience` epochs without one.
/// Throws DataError for an empty set or an out-of-range label.
TrainResult train(ModelParams<float> model, std::span<const Segment> train_set,
                  std::span<const Segment> valid_set, const TrainConfig& cfg,
                  const TrainHooks& hooks = {});

/// Logits for every segment, computed in parallel, in input order.
std::vector<std::vector<float>> batch_logits(const ModelParams<float>& params,
                                             std::span<const Segment> segments);

/// Fraction of segments whose argmax prediction equals the label.
double segment_accuracy(const ModelParams<float>& params, std::span<const Segment> segments);

}  // namespace wavecls

#endif  // WAVECLS_TRAINER_HPP_
