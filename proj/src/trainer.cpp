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

#include "wavecls/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "wavecls/error.hpp"
#include "wavecls/parallel.hpp"
#include "wavecls/random.hpp"

namespace wavecls {

using nlohmann::json;

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("train: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
  if (adam_beta1 < 0.0 || adam_beta1 >= 1.0) throw ConfigError("train: adam_beta1 must be in [0, 1)");
  if (adam_beta2 < 0.0 || adam_beta2 >= 1.0) throw ConfigError("train: adam_beta2 must be in [0, 1)");
  if (!(adam_eps > 0.0)) throw ConfigError("train: adam_eps must be > 0");
  if (patience == 0) throw ConfigError("train: patience must be >= 1");
  if (max_epochs == 0) throw ConfigError("train: max_epochs must be >= 1");
}

json to_json(const TrainConfig& cfg) {
  return {{"batch_size", cfg.batch_size},   {"learning_rate", cfg.learning_rate},
          {"adam_beta1", cfg.adam_beta1},   {"adam_beta2", cfg.adam_beta2},
          {"adam_eps", cfg.adam_eps},       {"patience", cfg.patience},
          {"max_epochs", cfg.max_epochs},   {"seed", cfg.seed}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  try {
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.adam_beta1 = j.value("adam_beta1", cfg.adam_beta1);
    cfg.adam_beta2 = j.value("adam_beta2", cfg.adam_beta2);
    cfg.adam_eps = j.value("adam_eps", cfg.adam_eps);
    cfg.patience = j.value("patience", cfg.patience);
    cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
    cfg.seed = j.value("seed", cfg.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
  return cfg;
}

template <typename T>
AdamState<T> make_adam_state(const ModelParams<T>& params) {
  AdamState<T> s;
  for (const auto* t : params.tensors()) {
    s.m.push_back(BasicTensor<T>::zeros_like(*t));
    s.v.push_back(BasicTensor<T>::zeros_like(*t));
  }
  return s;
}

template <typename T>
void adam_update(std::span<T> theta, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 std::uint64_t step, const TrainConfig& cfg) {
  if (grad.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size()) {
    throw ShapeError("adam: parameter, gradient and moment sizes differ");
  }
  if (step == 0) throw ConfigError("adam: step counter must be incremented before use");
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
  const T lr = static_cast<T>(cfg.learning_rate);
  const T eps = static_cast<T>(cfg.adam_eps);
  const T inv_c1 = static_cast<T>(1.0 / c1);
  const T inv_c2 = static_cast<T>(1.0 / c2);
  const T tb1 = static_cast<T>(b1);
  const T tb2 = static_cast<T>(b2);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const T g = grad[i];
    m[i] = tb1 * m[i] + (T{1} - tb1) * g;
    v[i] = tb2 * v[i] + (T{1} - tb2) * g * g;
    const T m_hat = m[i] * inv_c1;
    const T v_hat = v[i] * inv_c2;
    theta[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template <typename T>
void adam_step(ModelParams<T>& params, const ModelParams<T>& grads, AdamState<T>& state,
               const TrainConfig& cfg) {
  auto p = params.tensors();
  auto g = grads.tensors();
  if (p.size() != g.size() || p.size() != state.m.size() || p.size() != state.v.size()) {
    throw ShapeError("adam: parameter, gradient and state tensor counts differ");
  }
  ++state.step;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]->shape() != g[i]->shape() || p[i]->shape() != state.m[i].shape()) {
      throw ShapeError("adam: tensor " + std::to_string(i) + " shape mismatch");
    }
    adam_update<T>(p[i]->values(), g[i]->values(), state.m[i].values(), state.v[i].values(),
                   state.step, cfg);
  }
}

json to_json(const TrainHistory& history, bool include_timing) {
  json epochs = json::array();
  for (const auto& e : history.epochs) {
    json rec = {{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"valid_accuracy", e.valid_accuracy}};
    if (include_timing) rec["seconds"] = e.seconds;
    epochs.push_back(std::move(rec));
  }
  return {{"epochs", std::move(epochs)},
          {"best_epoch", history.best_epoch},
          {"best_valid_accuracy", history.best_valid_accuracy},
          {"early_stopped", history.early_stopped}};
}

std::vector<std::vector<float>> batch_logits(const ModelParams<float>& params,
                                             std::span<const Segment> segments) {
  std::vector<std::vector<float>> out(segments.size());
  parallel_for(segments.size(), [&](std::size_t i) {
    const auto logits = model_forward<float>(segments[i].samples, params);
    out[i].assign(logits.values().begin(), logits.values().end());
  });
  return out;
}

double segment_accuracy(const ModelParams<float>& params, std::span<const Segment> segments) {
  if (segments.empty()) throw DataError("accuracy of an empty segment set");
  const auto logits = batch_logits(params, segments);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (predict(logits[i]).label == segments[i].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(segments.size());
}

namespace {

void check_dataset(std::span<const Segment> set, std::size_t n_classes, std::size_t seg_len,
                   const char* which) {
  if (set.empty()) throw DataError(std::string("train: the ") + which + " set is empty");
  for (const auto& s : set) {
    if (s.label >= n_classes) {
      throw DataError(std::string("train: ") + which + " segment " + s.id() + " has label " +
                      std::to_string(s.label) + " but the model has " +
                      std::to_string(n_classes) + " classes");
    }
    if (s.samples.size() != seg_len) {
      throw DataError(std::string("train: ") + which + " segment " + s.id() + " has " +
                      std::to_string(s.samples.size()) + " samples, model expects " +
                      std::to_string(seg_len));
    }
  }
}

void zero(ModelParams<float>& p) {
  for (auto* t : p.tensors()) t->fill(0.0f);
}

}  // namespace

TrainResult train(ModelParams<float> model, std::span<const Segment> train_set,
                  std::span<const Segment> valid_set, const TrainConfig& cfg,
                  const TrainHooks& hooks) {
  cfg.validate();
  const ModelConfig model_cfg = model.config();
  check_dataset(train_set, model_cfg.n_classes(), model_cfg.encoder.seg_len, "training");
  check_dataset(valid_set, model_cfg.n_classes(), model_cfg.encoder.seg_len, "validation");

  const auto metric = hooks.validation_metric
                          ? hooks.validation_metric
                          : [&](const ModelParams<float>& p) { return segment_accuracy(p, valid_set); };

  AdamState<float> adam = make_adam_state(model);
  Rng shuffle_rng(mix_seed(cfg.seed, 0x5348));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  // Per-sample gradient slots, summed in index order after each batch so the
  // result does not depend on how samples were spread over workers.
  std::vector<ModelParams<float>> slots;
  const std::size_t max_batch = std::min(cfg.batch_size, train_set.size());
  for (std::size_t i = 0; i < max_batch; ++i) slots.push_back(zeros_like(model));
  std::vector<double> slot_loss(max_batch);
  ModelParams<float> batch_grad = zeros_like(model);

  TrainResult result;
  result.best.params = model;
  result.best.meta.seed = cfg.seed;
  result.best.meta.segment_seconds =
      static_cast<double>(model_cfg.encoder.seg_len) / static_cast<double>(kSampleRate);
  for (std::size_t c = 0; c < model_cfg.n_classes(); ++c) {
    result.best.class_names.push_back("class" + std::to_string(c));
  }
  double best = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    shuffle_rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, order.size() - begin);
      parallel_for(count, [&](std::size_t k) {
        zero(slots[k]);
        const Segment& s = train_set[order[begin + k]];
        slot_loss[k] = loss_and_gradient<float>(model, s.samples, s.label, slots[k]);
      });
      zero(batch_grad);
      auto sum = batch_grad.tensors();
      for (std::size_t k = 0; k < count; ++k) {
        auto part = slots[k].tensors();
        for (std::size_t t = 0; t < sum.size(); ++t) *sum[t] += *part[t];
        loss_sum += slot_loss[k];
      }
      const float scale = 1.0f / static_cast<float>(count);
      for (auto* t : sum) {
        for (float& v : t->values()) v *= scale;
      }
      adam_step(model, batch_grad, adam, cfg);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.valid_accuracy = metric(model);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.history.epochs.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec);

    if (rec.valid_accuracy > best) {
      best = rec.valid_accuracy;
      since_best = 0;
      result.best.params = model;
      result.best.meta.epoch = epoch;
      result.best.meta.valid_accuracy = rec.valid_accuracy;
      result.history.best_epoch = epoch;
      result.history.best_valid_accuracy = rec.valid_accuracy;
    } else if (++since_best >= cfg.patience) {
      result.history.early_stopped = true;
      break;
    }
  }
  return result;
}

template AdamState<float> make_adam_state<float>(const ModelParams<float>&);
template AdamState<double> make_adam_state<double>(const ModelParams<double>&);
template void adam_update<float>(std::span<float>, std::span<const float>, std::span<float>,
                                 std::span<float>, std::uint64_t, const TrainConfig&);
template void adam_update<double>(std::span<double>, std::span<const double>, std::span<double>,
                                  std::span<double>, std::uint64_t, const TrainConfig&);
template void adam_step<float>(ModelParams<float>&, const ModelParams<float>&, AdamState<float>&,
                               const TrainConfig&);
template void adam_step<double>(ModelParams<double>&, const ModelParams<double>&,
                                AdamState<double>&, const TrainConfig&);

}  // namespace wavecls
