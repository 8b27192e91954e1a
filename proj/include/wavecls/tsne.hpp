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

#ifndef WAVECLS_TSNE_HPP_
#define WAVECLS_TSNE_HPP_

// Exact t-SNE (no Barnes-Hut). Points are passed row-major, M x dim.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wavecls {

struct TsneConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 100.0;
  double early_exaggeration = 4.0;
  std::size_t exaggeration_iterations = 100;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch = 250;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless 1 < perplexity < m / 3 and the schedule is
  /// usable.
  void validate(std::size_t m) const;
};

/// Joint input affinities.
struct Affinities {
  std::size_t m = 0;
  std::vector<double> p;  // m x m, symmetric, sums to 1, zero diagonal
  std::vector<double> entropy_error;  // |H_i - log2(perplexity)| per point, bits
};

/// Per-point Gaussian bandwidths found by bisection on the entropy of each
/// conditional distribution, then P = (P_cond + P_cond^T) / 2m. Throws
/// ConfigError when a point cannot reach the target entropy.
Affinities compute_affinities(std::span<const double> points, std::size_t dim,
                              double perplexity);

/// KL(P || Q) for the Student-t affinities of `coords`.
double kl_divergence(const Affinities& affinities,
                     std::span<const std::array<double, 2>> coords);

struct TsneResult {
  std::vector<std::array<double, 2>> coords;
  double initial_kl = 0.0;
  double final_kl = 0.0;
  double max_entropy_error = 0.0;
};

/// M = 0 gives an empty result and M = 1 a single point at the origin.
/// Otherwise M < 4 or non-finite input throws DataError.
TsneResult tsne(std::span<const double> points, std::size_t dim, const TsneConfig& cfg);

}  // namespace wavecls

#endif  // WAVECLS_TSNE_HPP_
