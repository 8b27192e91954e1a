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
#ifndef WAVECLS_NN_GRAD_CHECK_HPP_
#define WAVECLS_NN_GRAD_CHECK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wavecls::nn {

/// A parameter block to probe: the live values the loss reads, and the
/// analytic gradient already computed at those values.
struct GradCheckParam {
  std::string name;
  std::span<double> values;
  std::span<const double> analytic;
};

struct GradCheckOptions {
  double step = 1e-5;
  /// Fraction of each block's entries to probe (at least one per block).
  double fraction = 1.0;
  std::uint64_t seed = 0;
  /// Denominator floor for the relative error, so entries whose true
  /// gradient is ~0 are judged by absolute error scaled by this value.
  double floor = 1e-6;
};

struct GradCheckEntry {
  std::string name;
  std::size_t checked = 0;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_rel_error < tolerance; }
};

/// |a - n| / max(|a|, |n|, floor).
double relative_error(double analytic, double numeric, double floor);

/// Compares analytic gradients against central differences
/// (f(x+h) - f(x-h)) / 2h. Every probed value is restored afterwards.
GradCheckReport grad_check(const std::function<double()>& loss,
                           std::span<const GradCheckParam> params, double tolerance,
                           const GradCheckOptions& options = {});

}  // namespace wavecls::nn

#endif  // WAVECLS_NN_GRAD_CHECK_HPP_
