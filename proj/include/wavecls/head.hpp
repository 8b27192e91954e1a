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

#ifndef WAVECLS_HEAD_HPP_
#define WAVECLS_HEAD_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavecls/nn/layers.hpp"
#include "wavecls/nn/tensor.hpp"

namespace wavecls {

using nn::BasicTensor;
using nn::ConvParams;

/// conv(kernel, causal) -> ReLU -> maxpool(window, stride)
struct HeadBlockConfig {
  std::size_t out_channels = 0;
  std::size_t conv_kernel = 3;
  std::size_t pool_window = 4;
  std::size_t pool_stride = 4;

  friend bool operator==(const HeadBlockConfig&, const HeadBlockConfig&) = default;
};

struct HeadConfig {
  std::size_t in_channels = 40;
  std::vector<HeadBlockConfig> blocks = {{64, 3, 4, 4}, {96, 3, 4, 4}, {128, 3, 4, 4}};
  std::size_t n_classes = 20;

  /// Time length after each block's pooling for an input of `input_len`.
  /// Throws ConfigError when a pool window exceeds the remaining length.
  std::vector<std::size_t> time_lengths(std::size_t input_len) const;
  /// Throws ConfigError for zero extents or an impossible downsampling chain.
  void validate(std::size_t input_len) const;

  friend bool operator==(const HeadConfig&, const HeadConfig&) = default;
};

template <typename T>
struct HeadParams {
  HeadConfig config;
  std::vector<ConvParams<T>> convs;
  ConvParams<T> output_proj;  // last channels -> n_classes, kernel 1

  template <typename F>
  void visit(F&& f) {
    for (std::size_t b = 0; b < convs.size(); ++b) {
      convs[b].visit("head.block" + std::to_string(b), f);
    }
    output_proj.visit("head.output_proj", f);
  }
  template <typename F>
  void visit(F&& f) const {
    for (std::size_t b = 0; b < convs.size(); ++b) {
      convs[b].visit("head.block" + std::to_string(b), f);
    }
    output_proj.visit("head.output_proj", f);
  }
};

template <typename T>
HeadParams<T> build_head(const HeadConfig& cfg, std::uint64_t seed);

template <typename T>
HeadParams<T> zeros_like(const HeadParams<T>& p);

template <typename T>
struct HeadTrace {
  std::vector<BasicTensor<T>> block_inputs;
  std::vector<BasicTensor<T>> conv_outputs;  // pre-activation
  std::vector<std::vector<std::size_t>> pool_argmax;
  BasicTensor<T> pool_input;  // input of the adaptive average pool
  BasicTensor<T> pooled;      // [C, 1]
};

/// [in_channels, T] feature map -> [n_classes] logits.
template <typename T>
BasicTensor<T> head_forward(const BasicTensor<T>& features, const HeadParams<T>& params,
                            HeadTrace<T>* trace = nullptr);

/// Accumulates parameter gradients into `grads`; returns the feature-map
/// gradient.
template <typename T>
BasicTensor<T> head_backward(const HeadTrace<T>& trace, const HeadParams<T>& params,
                             const BasicTensor<T>& logit_grad, HeadParams<T>& grads);

/// The n_classes-wide pre-softmax layer used as an embedding.
struct BottleneckVector {
  std::string segment_id;
  std::vector<float> values;
};

BottleneckVector bottleneck(const BasicTensor<float>& features,
                            const HeadParams<float>& params, std::string segment_id = {});

struct Prediction {
  std::size_t label = 0;
  std::vector<double> probs;
};

/// Softmax probabilities and the argmax class (lowest index wins ties).
Prediction predict(std::span<const float> logits);

}  // namespace wavecls

#endif  // WAVECLS_HEAD_HPP_
