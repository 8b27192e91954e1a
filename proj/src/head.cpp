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

#include "wavecls/head.hpp"

#include <algorithm>
#include <cmath>

#include "wavecls/error.hpp"
#include "wavecls/nn/init.hpp"
#include "wavecls/random.hpp"

namespace wavecls {

std::vector<std::size_t> HeadConfig::time_lengths(std::size_t input_len) const {
  std::vector<std::size_t> lengths;
  std::size_t len = input_len;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    if (blk.pool_window == 0 || blk.pool_stride == 0) {
      throw ConfigError("head: block " + std::to_string(b) + " has a zero pool window/stride");
    }
    if (len < blk.pool_window) {
      throw ConfigError("head: block " + std::to_string(b) + " pools a length-" +
                        std::to_string(len) + " signal with window " +
                        std::to_string(blk.pool_window));
    }
    len = (len - blk.pool_window) / blk.pool_stride + 1;
    lengths.push_back(len);
  }
  return lengths;
}

void HeadConfig::validate(std::size_t input_len) const {
  if (in_channels == 0) throw ConfigError("head: in_channels must be >= 1");
  if (n_classes == 0) throw ConfigError("head: n_classes must be >= 1");
  if (input_len == 0) throw ConfigError("head: input length must be >= 1");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].out_channels == 0 || blocks[b].conv_kernel == 0) {
      throw ConfigError("head: block " + std::to_string(b) +
                        " needs positive channels and kernel");
    }
  }
  (void)time_lengths(input_len);
}

template <typename T>
HeadParams<T> build_head(const HeadConfig& cfg, std::uint64_t seed) {
  if (cfg.in_channels == 0 || cfg.n_classes == 0) {
    throw ConfigError("head: in_channels and n_classes must be >= 1");
  }
  HeadParams<T> p;
  p.config = cfg;
  std::size_t channels = cfg.in_channels;
  std::uint64_t stream = 0;
  for (const auto& blk : cfg.blocks) {
    p.convs.push_back(nn::init_conv<T>(blk.out_channels, channels, blk.conv_kernel, 1, true,
                                       mix_seed(seed, stream++)));
    channels = blk.out_channels;
  }
  p.output_proj = nn::init_conv<T>(cfg.n_classes, channels, 1, 1, true, mix_seed(seed, stream++));
  return p;
}

template <typename T>
HeadParams<T> zeros_like(const HeadParams<T>& p) {
  HeadParams<T> z;
  z.config = p.config;
  for (const auto& c : p.convs) z.convs.push_back(nn::zeros_like(c));
  z.output_proj = nn::zeros_like(p.output_proj);
  return z;
}

template <typename T>
BasicTensor<T> head_forward(const BasicTensor<T>& features, const HeadParams<T>& params,
                            HeadTrace<T>* trace) {
  const HeadConfig& cfg = params.config;
  if (features.rank() != 2 || features.dim(0) != cfg.in_channels) {
    throw ShapeError("head: expected a [" + std::to_string(cfg.in_channels) +
                     ", T] feature map, got " + nn::shape_string(features.shape()));
  }
  cfg.validate(features.dim(1));
  if (trace) {
    trace->block_inputs.clear();
    trace->conv_outputs.clear();
    trace->pool_argmax.clear();
  }
  BasicTensor<T> x = features;
  for (std::size_t b = 0; b < params.convs.size(); ++b) {
    BasicTensor<T> conv = nn::conv1d_forward(x, params.convs[b]);
    auto pooled = nn::maxpool1d(nn::relu(conv), cfg.blocks[b].pool_window,
                                cfg.blocks[b].pool_stride);
    if (trace) {
      trace->block_inputs.push_back(std::move(x));
      trace->conv_outputs.push_back(std::move(conv));
      trace->pool_argmax.push_back(std::move(pooled.argmax));
    }
    x = std::move(pooled.output);
  }
  BasicTensor<T> pooled = nn::adaptive_avg_pool1d(x, 1);
  BasicTensor<T> logits = nn::conv1d_forward(pooled, params.output_proj);
  logits.reshape({cfg.n_classes});
  if (trace) {
    trace->pool_input = std::move(x);
    trace->pooled = std::move(pooled);
  }
  return logits;
}

template <typename T>
BasicTensor<T> head_backward(const HeadTrace<T>& trace, const HeadParams<T>& params,
                             const BasicTensor<T>& logit_grad, HeadParams<T>& grads) {
  const HeadConfig& cfg = params.config;
  if (logit_grad.size() != cfg.n_classes) {
    throw ShapeError("head backward: expected " + std::to_string(cfg.n_classes) +
                     " logit gradients, got " + std::to_string(logit_grad.size()));
  }
  if (trace.block_inputs.size() != params.convs.size()) {
    throw ShapeError("head backward: trace does not belong to these parameters");
  }
  BasicTensor<T> upstream = logit_grad;
  upstream.reshape({cfg.n_classes, 1});
  BasicTensor<T> d_pooled = BasicTensor<T>::zeros_like(trace.pooled);
  nn::conv1d_backward_accumulate(trace.pooled, params.output_proj, upstream, grads.output_proj,
                                 &d_pooled);
  BasicTensor<T> d_x = nn::adaptive_avg_pool1d_backward(trace.pool_input.shape(), d_pooled);
  for (std::size_t b = params.convs.size(); b-- > 0;) {
    const BasicTensor<T>& conv_out = trace.conv_outputs[b];
    const BasicTensor<T> d_relu =
        nn::maxpool1d_backward(conv_out.shape(), trace.pool_argmax[b], d_x);
    const BasicTensor<T> d_conv = nn::relu_backward(conv_out, d_relu);
    BasicTensor<T> d_in = BasicTensor<T>::zeros_like(trace.block_inputs[b]);
    nn::conv1d_backward_accumulate(trace.block_inputs[b], params.convs[b], d_conv, grads.convs[b],
                                   &d_in);
    d_x = std::move(d_in);
  }
  return d_x;
}

BottleneckVector bottleneck(const BasicTensor<float>& features, const HeadParams<float>& params,
                            std::string segment_id) {
  const auto logits = head_forward(features, params);
  return {std::move(segment_id), std::vector<float>(logits.values().begin(),
                                                    logits.values().end())};
}

Prediction predict(std::span<const float> logits) {
  if (logits.empty()) throw ShapeError("predict: empty logits");
  Prediction p;
  p.label = static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) -
                                     logits.begin());
  const double peak = logits[p.label];
  p.probs.resize(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p.probs[i] = std::exp(static_cast<double>(logits[i]) - peak);
    total += p.probs[i];
  }
  for (double& v : p.probs) v /= total;
  return p;
}

#define WAVECLS_INSTANTIATE_HEAD(T)                                                        \
  template HeadParams<T> build_head<T>(const HeadConfig&, std::uint64_t);                  \
  template HeadParams<T> zeros_like<T>(const HeadParams<T>&);                              \
  template BasicTensor<T> head_forward<T>(const BasicTensor<T>&, const HeadParams<T>&,     \
                                          HeadTrace<T>*);                                  \
  template BasicTensor<T> head_backward<T>(const HeadTrace<T>&, const HeadParams<T>&,      \
                                           const BasicTensor<T>&, HeadParams<T>&);

WAVECLS_INSTANTIATE_HEAD(float)
WAVECLS_INSTANTIATE_HEAD(double)

#undef WAVECLS_INSTANTIATE_HEAD

}  // namespace wavecls
