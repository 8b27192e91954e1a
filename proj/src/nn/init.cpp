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
#include "wavecls/nn/init.hpp"

#include <cmath>

#include "wavecls/error.hpp"
#include "wavecls/random.hpp"

namespace wavecls::nn {

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
  if (fan_in == 0 || fan_out == 0) throw ConfigError("init: fans must be positive");
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

template <typename T>
BasicTensor<T> init_params(const Shape& shape, std::size_t fan_in, std::size_t fan_out,
                           std::uint64_t seed) {
  const double bound = glorot_bound(fan_in, fan_out);
  BasicTensor<T> t(shape);
  Rng rng(seed);
  for (auto& v : t.values()) v = static_cast<T>(rng.uniform(-bound, bound));
  return t;
}

template <typename T>
ConvParams<T> init_conv(std::size_t out_channels, std::size_t in_channels,
                        std::size_t kernel, std::size_t dilation, bool causal,
                        std::uint64_t seed) {
  ConvParams<T> p = make_conv<T>(out_channels, in_channels, kernel, dilation, causal);
  p.weight = init_params<T>(p.weight.shape(), in_channels * kernel, out_channels * kernel,
                            seed);
  return p;
}

template BasicTensor<float> init_params<float>(const Shape&, std::size_t, std::size_t,
                                               std::uint64_t);
template BasicTensor<double> init_params<double>(const Shape&, std::size_t, std::size_t,
                                                 std::uint64_t);
template ConvParams<float> init_conv<float>(std::size_t, std::size_t, std::size_t,
                                            std::size_t, bool, std::uint64_t);
template ConvParams<double> init_conv<double>(std::size_t, std::size_t, std::size_t,
                                              std::size_t, bool, std::uint64_t);

}  // namespace wavecls::nn
