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

#include "wavecls/encoder.hpp"

#include <limits>

#include "wavecls/error.hpp"
#include "wavecls/nn/init.hpp"
#include "wavecls/random.hpp"

namespace wavecls {

using nn::conv1d_backward_accumulate;
using nn::conv1d_forward;

std::vector<std::size_t> EncoderConfig::dilations() const {
  std::vector<std::size_t> d(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) d[l] = std::size_t{1} << l;
  return d;
}

void EncoderConfig::validate() const {
  if (n_layers == 0) throw ConfigError("encoder: n_layers must be >= 1");
  if (n_layers >= 31) throw ConfigError("encoder: n_layers must be < 31");
  if (channels == 0) throw ConfigError("encoder: channels must be >= 1");
  if (kernel == 0) throw ConfigError("encoder: kernel must be >= 1");
  if (seg_len == 0) throw ConfigError("encoder: seg_len must be >= 1");
}

std::size_t receptive_field(const EncoderConfig& cfg) {
  cfg.validate();
  std::size_t rf = 1;
  for (std::size_t d : cfg.dilations()) rf += d * (cfg.kernel - 1);
  return rf;
}

std::size_t encoder_parameter_count(const EncoderConfig& cfg) {
  cfg.validate();
  const std::size_t c = cfg.channels;
  const std::size_t input = c * 1 * 1 + c;
  const std::size_t dilated = c * c * cfg.kernel + c;
  const std::size_t pointwise = c * c + c;
  return input + cfg.n_layers * (2 * dilated + 2 * pointwise) + pointwise;
}

template <typename T>
EncoderParams<T> build_encoder(const EncoderConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t c = cfg.channels;
  std::uint64_t stream = 0;
  auto next_seed = [&] { return mix_seed(seed, stream++); };

  EncoderParams<T> p;
  p.config = cfg;
  p.input_proj = nn::init_conv<T>(c, 1, 1, 1, true, next_seed());
  const auto dilations = cfg.dilations();
  p.layers.reserve(cfg.n_layers);
  for (std::size_t l = 0; l < cfg.n_layers; ++l) {
    ResidualLayer<T> layer;
    layer.filter = nn::init_conv<T>(c, c, cfg.kernel, dilations[l], true, next_seed());
    layer.gate = nn::init_conv<T>(c, c, cfg.kernel, dilations[l], true, next_seed());
    layer.residual = nn::init_conv<T>(c, c, 1, 1, true, next_seed());
    layer.skip = nn::init_conv<T>(c, c, 1, 1, true, next_seed());
    p.layers.push_back(std::move(layer));
  }
  p.post_proj = nn::init_conv<T>(c, c, 1, 1, true, next_seed());
  return p;
}

template <typename T>
EncoderParams<T> zeros_like(const EncoderParams<T>& p) {
  EncoderParams<T> z;
  z.config = p.config;
  z.input_proj = nn::zeros_like(p.input_proj);
  for (const auto& layer : p.layers) {
    z.layers.push_back({nn::zeros_like(layer.filter), nn::zeros_like(layer.gate),
                        nn::zeros_like(layer.residual), nn::zeros_like(layer.skip)});
  }
  z.post_proj = nn::zeros_like(p.post_proj);
  return z;
}

template <typename T>
ResidualBlockOutput<T> residual_block_forward(const BasicTensor<T>& x,
                                              const ResidualLayer<T>& layer,
                                              ResidualBlockTrace<T>* trace) {
  BasicTensor<T> filter_pre = conv1d_forward(x, layer.filter);
  BasicTensor<T> gate_pre = conv1d_forward(x, layer.gate);
  BasicTensor<T> z = nn::gated_activation(filter_pre, gate_pre);
  ResidualBlockOutput<T> out{conv1d_forward(z, layer.residual),
                             conv1d_forward(z, layer.skip)};
  out.residual += x;
  if (trace) {
    trace->input = x;
    trace->filter_pre = std::move(filter_pre);
    trace->gate_pre = std::move(gate_pre);
    trace->gated = std::move(z);
  }
  return out;
}

template <typename T>
BasicTensor<T> residual_block_backward(const ResidualBlockTrace<T>& trace,
                                       const ResidualLayer<T>& layer,
                                       const BasicTensor<T>& residual_grad,
                                       const BasicTensor<T>& skip_grad,
                                       ResidualLayer<T>& grads) {
  BasicTensor<T> dz = BasicTensor<T>::zeros_like(trace.gated);
  conv1d_backward_accumulate(trace.gated, layer.residual, residual_grad, grads.residual, &dz);
  conv1d_backward_accumulate(trace.gated, layer.skip, skip_grad, grads.skip, &dz);
  const auto gate_grads = nn::gated_activation_backward(trace.filter_pre, trace.gate_pre, dz);
  BasicTensor<T> dx = residual_grad;
  conv1d_backward_accumulate(trace.input, layer.filter, gate_grads.filter_grad, grads.filter,
                             &dx);
  conv1d_backward_accumulate(trace.input, layer.gate, gate_grads.gate_grad, grads.gate, &dx);
  return dx;
}

template <typename T>
BasicTensor<T> encoder_forward(std::span<const T> segment, const EncoderParams<T>& params,
                               EncoderTrace<T>* trace) {
  const EncoderConfig& cfg = params.config;
  if (segment.size() != cfg.seg_len) {
    throw ShapeError("encoder: segment has " + std::to_string(segment.size()) +
                     " samples, expected " + std::to_string(cfg.seg_len));
  }
  BasicTensor<T> input({1, segment.size()}, std::vector<T>(segment.begin(), segment.end()));
  BasicTensor<T> x = conv1d_forward(input, params.input_proj);
  BasicTensor<T> skip_sum({cfg.channels, cfg.seg_len});
  if (trace) {
    trace->blocks.assign(params.layers.size(), {});
  }
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto out = residual_block_forward(x, params.layers[l], trace ? &trace->blocks[l] : nullptr);
    skip_sum += out.skip;
    x = std::move(out.residual);
  }
  BasicTensor<T> post_input = nn::relu(skip_sum);
  BasicTensor<T> post_output = conv1d_forward(post_input, params.post_proj);
  BasicTensor<T> features = nn::relu(post_output);
  if (trace) {
    trace->input = std::move(input);
    trace->skip_sum = std::move(skip_sum);
    trace->post_input = std::move(post_input);
    trace->post_output = std::move(post_output);
  }
  return features;
}

template <typename T>
BasicTensor<T> encoder_backward(const EncoderTrace<T>& trace, const EncoderParams<T>& params,
                                const BasicTensor<T>& upstream, EncoderParams<T>& grads) {
  if (trace.blocks.size() != params.layers.size()) {
    throw ShapeError("encoder backward: trace does not belong to these parameters");
  }
  const BasicTensor<T> d_post_output = nn::relu_backward(trace.post_output, upstream);
  BasicTensor<T> d_post_input = BasicTensor<T>::zeros_like(trace.post_input);
  conv1d_backward_accumulate(trace.post_input, params.post_proj, d_post_output,
                             grads.post_proj, &d_post_input);
  const BasicTensor<T> d_skip = nn::relu_backward(trace.skip_sum, d_post_input);

  BasicTensor<T> d_residual = BasicTensor<T>::zeros_like(d_skip);
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    d_residual = residual_block_backward(trace.blocks[l], params.layers[l], d_residual, d_skip,
                                         grads.layers[l]);
  }
  BasicTensor<T> d_input = BasicTensor<T>::zeros_like(trace.input);
  conv1d_backward_accumulate(trace.input, params.input_proj, d_residual, grads.input_proj,
                             &d_input);
  return d_input;
}

#define WAVECLS_INSTANTIATE_ENCODER(T)                                                    \
  template EncoderParams<T> build_encoder<T>(const EncoderConfig&, std::uint64_t);        \
  template EncoderParams<T> zeros_like<T>(const EncoderParams<T>&);                       \
  template ResidualBlockOutput<T> residual_block_forward<T>(                              \
      const BasicTensor<T>&, const ResidualLayer<T>&, ResidualBlockTrace<T>*);            \
  template BasicTensor<T> residual_block_backward<T>(                                     \
      const ResidualBlockTrace<T>&, const ResidualLayer<T>&, const BasicTensor<T>&,       \
      const BasicTensor<T>&, ResidualLayer<T>&);                                          \
  template BasicTensor<T> encoder_forward<T>(std::span<const T>, const EncoderParams<T>&, \
                                             EncoderTrace<T>*);                           \
  template BasicTensor<T> encoder_backward<T>(const EncoderTrace<T>&,                     \
                                              const EncoderParams<T>&,                    \
                                              const BasicTensor<T>&, EncoderParams<T>&);

WAVECLS_INSTANTIATE_ENCODER(float)
WAVECLS_INSTANTIATE_ENCODER(double)

#undef WAVECLS_INSTANTIATE_ENCODER

}  // namespace wavecls
