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

#include "wavecls/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavecls/error.hpp"

namespace wavecls::nn {

namespace {

// Time tile for the convolution loops; keeps one tile of every input channel
// resident in L2 while the output channels are swept.
constexpr std::size_t kTimeTile = 2048;

void require_rank(const Shape& shape, std::size_t rank, const char* what) {
  if (shape.size() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " + std::to_string(rank) +
                     ", got " + shape_string(shape));
  }
}

template <typename T>
void require_same_shape(const BasicTensor<T>& a, const BasicTensor<T>& b,
                        const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + shape_string(a.shape()) +
                     " vs " + shape_string(b.shape()));
  }
}

template <typename T>
void check_conv(const BasicTensor<T>& input, const ConvParams<T>& p) {
  require_rank(input.shape(), 2, "conv1d input");
  require_rank(p.weight.shape(), 3, "conv1d weight");
  if (p.bias.shape() != Shape{p.out_channels()}) {
    throw ShapeError("conv1d bias must be [" + std::to_string(p.out_channels()) +
                     "], got " + shape_string(p.bias.shape()));
  }
  if (input.dim(0) != p.in_channels()) {
    throw ShapeError("conv1d: input has " + std::to_string(input.dim(0)) +
                     " channels, weights expect " + std::to_string(p.in_channels()));
  }
  if (p.dilation == 0) throw ConfigError("conv1d: dilation must be >= 1");
}

// Signed offset of tap k: output[t] reads input[t + offset].
template <typename T>
std::ptrdiff_t tap_offset(const ConvParams<T>& p, std::size_t k) {
  const auto span = static_cast<std::ptrdiff_t>((p.kernel() - 1) * p.dilation);
  const std::ptrdiff_t left = p.causal ? span : span / 2;
  return static_cast<std::ptrdiff_t>(k * p.dilation) - left;
}

// Valid output range [lo, hi) within [begin, end) for a tap offset.
inline void tap_range(std::ptrdiff_t offset, std::size_t begin, std::size_t end,
                      std::size_t len, std::size_t& lo, std::size_t& hi) {
  const auto slen = static_cast<std::ptrdiff_t>(len);
  const std::ptrdiff_t l = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(begin), -offset);
  const std::ptrdiff_t h = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(end), slen - offset);
  lo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(l, 0));
  hi = static_cast<std::size_t>(std::max<std::ptrdiff_t>(h, l));
}

template <typename T>
inline void axpy(std::size_t n, T a, const T* __restrict x, T* __restrict y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// Fixed 8-way split so the reduction vectorizes yet stays reproducible.
template <typename T>
inline T dot(std::size_t n, const T* __restrict a, const T* __restrict b) {
  T acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t l = 0; l < 8; ++l) acc[l] += a[i + l] * b[i + l];
  }
  T s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
T sigmoid(T x) {
  if (x >= T{0}) return T{1} / (T{1} + std::exp(-x));
  const T e = std::exp(x);
  return e / (T{1} + e);
}

}  // namespace

template <typename T>
ConvParams<T> make_conv(std::size_t out_channels, std::size_t in_channels,
                        std::size_t kernel, std::size_t dilation, bool causal) {
  if (out_channels == 0 || in_channels == 0 || kernel == 0 || dilation == 0) {
    throw ConfigError("conv1d: channels, kernel and dilation must be >= 1");
  }
  ConvParams<T> p;
  p.weight = BasicTensor<T>({out_channels, in_channels, kernel});
  p.bias = BasicTensor<T>({out_channels});
  p.dilation = dilation;
  p.causal = causal;
  return p;
}

template <typename T>
ConvParams<T> zeros_like(const ConvParams<T>& p) {
  ConvParams<T> z;
  z.weight = BasicTensor<T>::zeros_like(p.weight);
  z.bias = BasicTensor<T>::zeros_like(p.bias);
  z.dilation = p.dilation;
  z.causal = p.causal;
  return z;
}

template <typename T>
BasicTensor<T> conv1d_forward(const BasicTensor<T>& input, const ConvParams<T>& p) {
  check_conv(input, p);
  const std::size_t c_out = p.out_channels();
  const std::size_t c_in = p.in_channels();
  const std::size_t kernel = p.kernel();
  const std::size_t len = input.dim(1);
  BasicTensor<T> out({c_out, len});

  for (std::size_t t0 = 0; t0 < len; t0 += kTimeTile) {
    const std::size_t t1 = std::min(len, t0 + kTimeTile);
    for (std::size_t o = 0; o < c_out; ++o) {
      T* y = out.row(o).data();
      std::fill(y + t0, y + t1, p.bias[o]);
      for (std::size_t i = 0; i < c_in; ++i) {
        const T* x = input.row(i).data();
        for (std::size_t k = 0; k < kernel; ++k) {
          const std::ptrdiff_t off = tap_offset(p, k);
          std::size_t lo = 0;
          std::size_t hi = 0;
          tap_range(off, t0, t1, len, lo, hi);
          if (lo < hi) axpy(hi - lo, p.weight(o, i, k), x + lo + off, y + lo);
        }
      }
    }
  }
  return out;
}

template <typename T>
void conv1d_backward_accumulate(const BasicTensor<T>& input, const ConvParams<T>& p,
                                const BasicTensor<T>& upstream, ConvParams<T>& grads,
                                BasicTensor<T>* input_grad) {
  check_conv(input, p);
  const std::size_t c_out = p.out_channels();
  const std::size_t c_in = p.in_channels();
  const std::size_t kernel = p.kernel();
  const std::size_t len = input.dim(1);
  if (upstream.shape() != Shape{c_out, len}) {
    throw ShapeError("conv1d backward: upstream " + shape_string(upstream.shape()) +
                     " does not match output [" + std::to_string(c_out) + ", " +
                     std::to_string(len) + "]");
  }
  if (grads.weight.shape() != p.weight.shape() || grads.bias.shape() != p.bias.shape()) {
    throw ShapeError("conv1d backward: gradient accumulator shape mismatch");
  }
  if (input_grad && input_grad->shape() != input.shape()) {
    throw ShapeError("conv1d backward: input gradient shape mismatch");
  }

  for (std::size_t o = 0; o < c_out; ++o) {
    const T* g = upstream.row(o).data();
    T bias_sum{0};
    for (std::size_t t = 0; t < len; ++t) bias_sum += g[t];
    grads.bias[o] += bias_sum;
    for (std::size_t i = 0; i < c_in; ++i) {
      const T* x = input.row(i).data();
      for (std::size_t k = 0; k < kernel; ++k) {
        const std::ptrdiff_t off = tap_offset(p, k);
        std::size_t lo = 0;
        std::size_t hi = 0;
        tap_range(off, 0, len, len, lo, hi);
        if (lo < hi) grads.weight(o, i, k) += dot(hi - lo, g + lo, x + lo + off);
      }
    }
  }

  if (!input_grad) return;
  for (std::size_t t0 = 0; t0 < len; t0 += kTimeTile) {
    const std::size_t t1 = std::min(len, t0 + kTimeTile);
    for (std::size_t i = 0; i < c_in; ++i) {
      T* dx = input_grad->row(i).data();
      for (std::size_t o = 0; o < c_out; ++o) {
        const T* g = upstream.row(o).data();
        for (std::size_t k = 0; k < kernel; ++k) {
          const std::ptrdiff_t off = tap_offset(p, k);
          std::size_t lo = 0;
          std::size_t hi = 0;
          tap_range(off, t0, t1, len, lo, hi);
          if (lo < hi) axpy(hi - lo, p.weight(o, i, k), g + lo, dx + lo + off);
        }
      }
    }
  }
}

template <typename T>
ConvBackward<T> conv1d_backward(const BasicTensor<T>& input, const ConvParams<T>& p,
                                const BasicTensor<T>& upstream) {
  ConvParams<T> grads = zeros_like(p);
  BasicTensor<T> dx = BasicTensor<T>::zeros_like(input);
  conv1d_backward_accumulate(input, p, upstream, grads, &dx);
  return {std::move(dx), std::move(grads.weight), std::move(grads.bias)};
}

template <typename T>
BasicTensor<T> gated_activation(const BasicTensor<T>& filter, const BasicTensor<T>& gate) {
  require_same_shape(filter, gate, "gated_activation");
  BasicTensor<T> z(filter.shape());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = std::tanh(filter[i]) * sigmoid(gate[i]);
  }
  return z;
}

template <typename T>
GateBackward<T> gated_activation_backward(const BasicTensor<T>& filter,
                                          const BasicTensor<T>& gate,
                                          const BasicTensor<T>& upstream) {
  require_same_shape(filter, gate, "gated_activation_backward");
  require_same_shape(filter, upstream, "gated_activation_backward");
  GateBackward<T> out{BasicTensor<T>(filter.shape()), BasicTensor<T>(filter.shape())};
  for (std::size_t i = 0; i < filter.size(); ++i) {
    const T th = std::tanh(filter[i]);
    const T sg = sigmoid(gate[i]);
    out.filter_grad[i] = (T{1} - th * th) * sg * upstream[i];
    out.gate_grad[i] = th * sg * (T{1} - sg) * upstream[i];
  }
  return out;
}

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& x) {
  BasicTensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T{0} ? x[i] : T{0};
  return y;
}

template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& x, const BasicTensor<T>& upstream) {
  require_same_shape(x, upstream, "relu_backward");
  BasicTensor<T> g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] > T{0} ? upstream[i] : T{0};
  return g;
}

template <typename T>
MaxPoolResult<T> maxpool1d(const BasicTensor<T>& x, std::size_t window, std::size_t stride) {
  require_rank(x.shape(), 2, "maxpool1d input");
  if (window == 0 || stride == 0) throw ConfigError("maxpool1d: window and stride must be >= 1");
  const std::size_t channels = x.dim(0);
  const std::size_t len = x.dim(1);
  if (len < window) {
    throw ShapeError("maxpool1d: input length " + std::to_string(len) +
                     " is shorter than window " + std::to_string(window));
  }
  const std::size_t out_len = (len - window) / stride + 1;
  MaxPoolResult<T> r{BasicTensor<T>({channels, out_len}),
                     std::vector<std::size_t>(channels * out_len)};
  for (std::size_t c = 0; c < channels; ++c) {
    const T* row = x.row(c).data();
    for (std::size_t j = 0; j < out_len; ++j) {
      const std::size_t start = j * stride;
      std::size_t best = start;
      for (std::size_t t = start + 1; t < start + window; ++t) {
        if (row[t] > row[best]) best = t;
      }
      r.output(c, j) = row[best];
      r.argmax[c * out_len + j] = c * len + best;
    }
  }
  return r;
}

template <typename T>
BasicTensor<T> maxpool1d_backward(const Shape& input_shape,
                                  const std::vector<std::size_t>& argmax,
                                  const BasicTensor<T>& upstream) {
  if (argmax.size() != upstream.size()) {
    throw ShapeError("maxpool1d_backward: upstream does not match forward output");
  }
  BasicTensor<T> g(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) g[argmax[i]] += upstream[i];
  return g;
}

template <typename T>
BasicTensor<T> adaptive_avg_pool1d(const BasicTensor<T>& x, std::size_t out_len) {
  require_rank(x.shape(), 2, "adaptive_avg_pool1d input");
  const std::size_t channels = x.dim(0);
  const std::size_t len = x.dim(1);
  if (out_len == 0 || out_len > len) {
    throw ShapeError("adaptive_avg_pool1d: cannot pool length " + std::to_string(len) +
                     " to " + std::to_string(out_len));
  }
  BasicTensor<T> y({channels, out_len});
  for (std::size_t c = 0; c < channels; ++c) {
    const T* row = x.row(c).data();
    for (std::size_t j = 0; j < out_len; ++j) {
      const std::size_t begin = j * len / out_len;
      const std::size_t end = (j + 1) * len / out_len;
      T sum{0};
      for (std::size_t t = begin; t < end; ++t) sum += row[t];
      y(c, j) = sum / static_cast<T>(end - begin);
    }
  }
  return y;
}

template <typename T>
BasicTensor<T> adaptive_avg_pool1d_backward(const Shape& input_shape,
                                            const BasicTensor<T>& upstream) {
  require_rank(input_shape, 2, "adaptive_avg_pool1d_backward input");
  require_rank(upstream.shape(), 2, "adaptive_avg_pool1d_backward upstream");
  const std::size_t channels = input_shape[0];
  const std::size_t len = input_shape[1];
  const std::size_t out_len = upstream.dim(1);
  if (upstream.dim(0) != channels || out_len == 0 || out_len > len) {
    throw ShapeError("adaptive_avg_pool1d_backward: upstream does not match input");
  }
  BasicTensor<T> g(input_shape);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t j = 0; j < out_len; ++j) {
      const std::size_t begin = j * len / out_len;
      const std::size_t end = (j + 1) * len / out_len;
      const T share = upstream(c, j) / static_cast<T>(end - begin);
      for (std::size_t t = begin; t < end; ++t) g(c, t) += share;
    }
  }
  return g;
}

template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits) {
  if (logits.empty()) throw ShapeError("softmax: empty logits");
  const T peak = *std::max_element(logits.values().begin(), logits.values().end());
  BasicTensor<T> p(logits.shape());
  T total{0};
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - peak);
    total += p[i];
  }
  for (std::size_t i = 0; i < p.size(); ++i) p[i] /= total;
  return p;
}

template <typename T>
LossResult<T> softmax_cross_entropy(const BasicTensor<T>& logits, std::size_t label) {
  if (label >= logits.size()) {
    throw DataError("softmax_cross_entropy: label " + std::to_string(label) +
                    " out of range for " + std::to_string(logits.size()) + " classes");
  }
  const T peak = *std::max_element(logits.values().begin(), logits.values().end());
  T total{0};
  for (std::size_t i = 0; i < logits.size(); ++i) total += std::exp(logits[i] - peak);
  const T log_norm = peak + std::log(total);
  LossResult<T> r{log_norm - logits[label], BasicTensor<T>(logits.shape())};
  for (std::size_t i = 0; i < logits.size(); ++i) {
    r.logit_grad[i] = std::exp(logits[i] - log_norm);
  }
  r.logit_grad[label] -= T{1};
  return r;
}

#define WAVECLS_INSTANTIATE_LAYERS(T)                                                     \
  template ConvParams<T> make_conv<T>(std::size_t, std::size_t, std::size_t, std::size_t, \
                                      bool);                                              \
  template ConvParams<T> zeros_like<T>(const ConvParams<T>&);                             \
  template BasicTensor<T> conv1d_forward<T>(const BasicTensor<T>&, const ConvParams<T>&); \
  template ConvBackward<T> conv1d_backward<T>(const BasicTensor<T>&, const ConvParams<T>&, \
                                              const BasicTensor<T>&);                     \
  template void conv1d_backward_accumulate<T>(const BasicTensor<T>&, const ConvParams<T>&, \
                                              const BasicTensor<T>&, ConvParams<T>&,      \
                                              BasicTensor<T>*);                           \
  template BasicTensor<T> gated_activation<T>(const BasicTensor<T>&, const BasicTensor<T>&); \
  template GateBackward<T> gated_activation_backward<T>(                                  \
      const BasicTensor<T>&, const BasicTensor<T>&, const BasicTensor<T>&);               \
  template BasicTensor<T> relu<T>(const BasicTensor<T>&);                                 \
  template BasicTensor<T> relu_backward<T>(const BasicTensor<T>&, const BasicTensor<T>&); \
  template MaxPoolResult<T> maxpool1d<T>(const BasicTensor<T>&, std::size_t, std::size_t); \
  template BasicTensor<T> maxpool1d_backward<T>(                                          \
      const Shape&, const std::vector<std::size_t>&, const BasicTensor<T>&);              \
  template BasicTensor<T> adaptive_avg_pool1d<T>(const BasicTensor<T>&, std::size_t);     \
  template BasicTensor<T> adaptive_avg_pool1d_backward<T>(const Shape&,                   \
                                                          const BasicTensor<T>&);         \
  template BasicTensor<T> softmax<T>(const BasicTensor<T>&);                              \
  template LossResult<T> softmax_cross_entropy<T>(const BasicTensor<T>&, std::size_t);

WAVECLS_INSTANTIATE_LAYERS(float)
WAVECLS_INSTANTIATE_LAYERS(double)

#undef WAVECLS_INSTANTIATE_LAYERS

}  // namespace wavecls::nn
