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

#ifndef WAVECLS_MODEL_HPP_
#define WAVECLS_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "wavecls/encoder.hpp"
#include "wavecls/head.hpp"

namespace wavecls {

/// Encoder plus head, the full segment classifier.
struct ModelConfig {
  EncoderConfig encoder;
  HeadConfig head;

  /// Checks both halves and that the head accepts the encoder's output.
  void validate() const;
  std::size_t n_classes() const { return head.n_classes; }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// The reference architecture for `n_classes` artists and a segment length.
ModelConfig default_model_config(std::size_t n_classes = 20, std::size_t seg_len = 16000);

nlohmann::json to_json(const ModelConfig& cfg);
/// Throws ConfigError on missing or ill-typed keys.
ModelConfig model_config_from_json(const nlohmann::json& j);

template <typename T>
struct ModelParams {
  EncoderParams<T> encoder;
  HeadParams<T> head;

  ModelConfig config() const { return {encoder.config, head.config}; }

  template <typename F>
  void visit(F&& f) {
    encoder.visit(f);
    head.visit(f);
  }
  template <typename F>
  void visit(F&& f) const {
    encoder.visit(f);
    head.visit(f);
  }

  std::size_t parameter_count() const;
  /// Every trainable tensor in visit order.
  std::vector<BasicTensor<T>*> tensors();
  std::vector<const BasicTensor<T>*> tensors() const;
};

template <typename T>
ModelParams<T> build_model(const ModelConfig& cfg, std::uint64_t seed);

template <typename T>
ModelParams<T> zeros_like(const ModelParams<T>& p);

template <typename To, typename From>
ModelParams<To> cast_params(const ModelParams<From>& p);

template <typename T>
struct ModelTrace {
  EncoderTrace<T> encoder;
  BasicTensor<T> features;
  HeadTrace<T> head;
};

/// Segment samples -> logits [n_classes].
template <typename T>
BasicTensor<T> model_forward(std::span<const T> segment, const ModelParams<T>& params,
                             ModelTrace<T>* trace = nullptr);

template <typename T>
void model_backward(const ModelTrace<T>& trace, const ModelParams<T>& params,
                    const BasicTensor<T>& logit_grad, ModelParams<T>& grads);

/// Cross-entropy loss of one labeled segment; adds its gradient into `grads`.
template <typename T>
T loss_and_gradient(const ModelParams<T>& params, std::span<const T> segment,
                    std::size_t label, ModelParams<T>& grads);

}  // namespace wavecls

#endif  // WAVECLS_MODEL_HPP_
