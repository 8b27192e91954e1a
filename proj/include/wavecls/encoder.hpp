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

#ifndef WAVECLS_ENCODER_HPP_
#define WAVECLS_ENCODER_HPP_

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

/// Shape of the gated dilated-convolution encoder. Layer l uses dilation 2^l.
struct EncoderConfig {
  std::size_t n_layers = 10;  // dilations 1, 2, ..., 512
  std::size_t channels = 40;
  std::size_t kernel = 2;
  std::size_t seg_len = 16000;

  std::vector<std::size_t> dilations() const;
  /// Throws ConfigError for zero extents or a dilation that overflows.
  void validate() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

/// Input samples that can influence one output sample:
/// 1 + sum over layers of dilation * (kernel - 1).
std::size_t receptive_field(const EncoderConfig& cfg);

/// Closed-form trainable parameter count of build_encoder(cfg).
std::size_t encoder_parameter_count(const EncoderConfig& cfg);

/// One gated residual layer: filter and gate are the dilated causal convs,
/// residual and skip are 1x1 projections of the gated output.
template <typename T>
struct ResidualLayer {
  ConvParams<T> filter;
  ConvParams<T> gate;
  ConvParams<T> residual;
  ConvParams<T> skip;

  template <typename F>
  void visit(const std::string& prefix, F&& f) {
    filter.visit(prefix + ".filter", f);
    gate.visit(prefix + ".gate", f);
    residual.visit(prefix + ".residual", f);
    skip.visit(prefix + ".skip", f);
  }
  template <typename F>
  void visit(const std::string& prefix, F&& f) const {
    filter.visit(prefix + ".filter", f);
    gate.visit(prefix + ".gate", f);
    residual.visit(prefix + ".residual", f);
    skip.visit(prefix + ".skip", f);
  }
};

template <typename T>
struct EncoderParams {
  EncoderConfig config;
  ConvParams<T> input_proj;  // 1 -> channels, kernel 1
  std::vector<ResidualLayer<T>> layers;
  ConvParams<T> post_proj;   // channels -> channels, kernel 1

  template <typename F>
  void visit(F&& f) {
    input_proj.visit("encoder.input_proj", f);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].visit("encoder.layer" + std::to_string(l), f);
    }
    post_proj.visit("encoder.post_proj", f);
  }
  template <typename F>
  void visit(F&& f) const {
    input_proj.visit("encoder.input_proj", f);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].visit("encoder.layer" + std::to_string(l), f);
    }
    post_proj.visit("encoder.post_proj", f);
  }
};

/// Glorot-initialized encoder; every tensor gets its own stream of `seed`.
template <typename T>
EncoderParams<T> build_encoder(const EncoderConfig& cfg, std::uint64_t seed);

/// Same structure as `p`, every tensor zero.
template <typename T>
EncoderParams<T> zeros_like(const EncoderParams<T>& p);

template <typename T>
struct ResidualBlockOutput {
  BasicTensor<T> residual;
  BasicTensor<T> skip;
};

/// Activations kept by the forward pass for the backward pass.
template <typename T>
struct ResidualBlockTrace {
  BasicTensor<T> input;
  BasicTensor<T> filter_pre;
  BasicTensor<T> gate_pre;
  BasicTensor<T> gated;
};

/// z = tanh(filter * x) . sigmoid(gate * x);
/// residual = x + residual_proj(z); skip = skip_proj(z).
template <typename T>
ResidualBlockOutput<T> residual_block_forward(const BasicTensor<T>& x,
                                              const ResidualLayer<T>& layer,
                                              ResidualBlockTrace<T>* trace = nullptr);

/// Accumulates parameter gradients into `grads`, returns d(loss)/dx.
template <typename T>
BasicTensor<T> residual_block_backward(const ResidualBlockTrace<T>& trace,
                                       const ResidualLayer<T>& layer,
                                       const BasicTensor<T>& residual_grad,
                                       const BasicTensor<T>& skip_grad,
                                       ResidualLayer<T>& grads);

template <typename T>
struct EncoderTrace {
  BasicTensor<T> input;  // [1, T]
  std::vector<ResidualBlockTrace<T>> blocks;
  BasicTensor<T> skip_sum;     // pre-activation sum of all skip outputs
  BasicTensor<T> post_input;   // relu(skip_sum)
  BasicTensor<T> post_output;  // post_proj(post_input), pre-activation
};

/// input_proj -> residual layers -> sum of skips -> ReLU -> post_proj -> ReLU.
/// Returns the [channels, T] feature map. Throws ShapeError unless the
/// segment has exactly cfg.seg_len samples.
template <typename T>
BasicTensor<T> encoder_forward(std::span<const T> segment, const EncoderParams<T>& params,
                               EncoderTrace<T>* trace = nullptr);

/// Accumulates parameter gradients into `grads`; returns the [1, T] input
/// gradient.
template <typename T>
BasicTensor<T> encoder_backward(const EncoderTrace<T>& trace, const EncoderParams<T>& params,
                                const BasicTensor<T>& upstream, EncoderParams<T>& grads);

}  // namespace wavecls

#endif  // WAVECLS_ENCODER_HPP_
