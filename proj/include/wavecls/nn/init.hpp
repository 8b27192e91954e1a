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
#ifndef WAVECLS_NN_INIT_HPP_
#define WAVECLS_NN_INIT_HPP_

#include <cstddef>
#include <cstdint>

#include "wavecls/nn/layers.hpp"
#include "wavecls/nn/tensor.hpp"

namespace wavecls::nn {

/// Half-width of the Glorot uniform range, sqrt(6 / (fan_in + fan_out)).
double glorot_bound(std::size_t fan_in, std::size_t fan_out);

/// Glorot-uniform tensor on [-a, a]; identical for identical seeds.
template <typename T>
BasicTensor<T> init_params(const Shape& shape, std::size_t fan_in, std::size_t fan_out,
                           std::uint64_t seed);

/// Glorot weights (fans counted over in/out channels times kernel), zero bias.
template <typename T>
ConvParams<T> init_conv(std::size_t out_channels, std::size_t in_channels,
                        std::size_t kernel, std::size_t dilation, bool causal,
                        std::uint64_t seed);

}  // namespace wavecls::nn

#endif  // WAVECLS_NN_INIT_HPP_
