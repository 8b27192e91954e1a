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

#ifndef WAVECLS_NN_LAYERS_HPP_
#define WAVECLS_NN_LAYERS_HPP_

// Forward and analytic backward passes for the handful of layers the
// classifier is made of. All signal tensors are [channels, time].

#include <cstddef>
#include <string>
#include <vector>

#include "wavecls/nn/tensor.hpp"

namespace wavecls::nn {

/// Weights and geometry of one 1-D convolution.
template <typename T>
struct ConvParams {
  BasicTensor<T> weight;  // [out_channels, in_channels, kernel]
  BasicTensor<T> bias;    // [out_channels]
  std::size_t dilation = 1;
  // Causal: output[t] sees input[<= t] only. Otherwise padding is split
  // evenly (extra tap on the right).
  bool causal = true;

  std::size_t out_channels() const { return weight.dim(0); }
  std::size_t in_channels() const { return weight.dim(1); }
  std::size_t kernel() const { return weight.dim(2); }
  std::size_t parameter_count() const { return weight.size() + bias.size(); }

  template <typename F>
  void visit(const std::string& prefix, F&& f) {
    f(prefix + ".weight", weight);
    f(prefix + ".bias", bias);
  }
  template <typename F>
  void visit(const std::string& prefix, F&& f) const {
    f(prefix + ".weight", weight);
    f(prefix + ".bias", bias);
  }
};

/// Zero-valued convolution with the given geometry. Throws ConfigError for a
/// zero extent or dilation.
template <typename T>
ConvParams<T> make_conv(std::size_t out_channels, std::size_t in_channels,
                        std::size_t kernel, std::size_t dilation, bool causal);

/// Same geometry as `p`, all values zero. Used as a gradient accumulator.
template <typename T>
ConvParams<T> zeros_like(const ConvParams<T>& p);

template <typename T>
struct ConvBackward {
  BasicTensor<T> input_grad;
  BasicTensor<T> weight_grad;
  BasicTensor<T> bias_grad;
};

/// [C_in, T] -> [C_out, T]. Time length is preserved by zero padding.
template <typename T>
BasicTensor<T> conv1d_forward(const BasicTensor<T>& input, const ConvParams<T>& p);

template <typename T>
ConvBackward<T> conv1d_backward(const BasicTensor<T>& input, const ConvParams<T>& p,
                                const BasicTensor<T>& upstream);

/// Accumulating form of conv1d_backward: adds the weight and bias gradients
/// into `grads` and, when `input_grad` is non-null, adds the input gradient
/// into it (it must already have the input's shape).
template <typename T>
void conv1d_backward_accumulate(const BasicTensor<T>& input, const ConvParams<T>& p,
                                const BasicTensor<T>& upstream, ConvParams<T>& grads,
                                BasicTensor<T>* input_grad);

/// z = tanh(filter) * sigmoid(gate), element-wise.
template <typename T>
BasicTensor<T> gated_activation(const BasicTensor<T>& filter, const BasicTensor<T>& gate);

template <typename T>
struct GateBackward {
  BasicTensor<T> filter_grad;
  BasicTensor<T> gate_grad;
};

template <typename T>
GateBackward<T> gated_activation_backward(const BasicTensor<T>& filter,
                                          const BasicTensor<T>& gate,
                                          const BasicTensor<T>& upstream);

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& x);

/// Gradient is zero where x <= 0.
template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& x, const BasicTensor<T>& upstream);

template <typename T>
struct MaxPoolResult {
  BasicTensor<T> output;            // [C, (T - window) / stride + 1]
  std::vector<std::size_t> argmax;  // flat input index chosen per output element
};

/// Ties resolve to the earliest index in the window.
template <typename T>
MaxPoolResult<T> maxpool1d(const BasicTensor<T>& x, std::size_t window,
                           std::size_t stride);

template <typename T>
BasicTensor<T> maxpool1d_backward(const Shape& input_shape,
                                  const std::vector<std::size_t>& argmax,
                                  const BasicTensor<T>& upstream);

/// Bin j of the output averages input[floor(j*T/n), floor((j+1)*T/n)).
template <typename T>
BasicTensor<T> adaptive_avg_pool1d(const BasicTensor<T>& x, std::size_t out_len);

template <typename T>
BasicTensor<T> adaptive_avg_pool1d_backward(const Shape& input_shape,
                                            const BasicTensor<T>& upstream);

template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits);

template <typename T>
struct LossResult {
  T loss;
  BasicTensor<T> logit_grad;
};

/// -log softmax(logits)[label], stabilized by max subtraction.
template <typename T>
LossResult<T> softmax_cross_entropy(const BasicTensor<T>& logits, std::size_t label);

}  // namespace wavecls::nn

#endif  // WAVECLS_NN_LAYERS_HPP_
