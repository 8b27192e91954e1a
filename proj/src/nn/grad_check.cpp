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
#include "wavecls/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavecls/error.hpp"
#include "wavecls/random.hpp"

namespace wavecls::nn {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckReport grad_check(const std::function<double()>& loss,
                           std::span<const GradCheckParam> params, double tolerance,
                           const GradCheckOptions& options) {
  GradCheckReport report;
  report.tolerance = tolerance;
  Rng rng(options.seed);
  for (const GradCheckParam& p : params) {
    if (p.values.size() != p.analytic.size()) {
      throw ShapeError("grad_check: '" + p.name + "' has " +
                       std::to_string(p.values.size()) + " values but " +
                       std::to_string(p.analytic.size()) + " gradient entries");
    }
    std::vector<std::size_t> probe(p.values.size());
    std::iota(probe.begin(), probe.end(), std::size_t{0});
    if (options.fraction < 1.0 && !probe.empty()) {
      rng.shuffle(probe.begin(), probe.end());
      const auto keep = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(options.fraction * probe.size())));
      probe.resize(std::min(keep, probe.size()));
      std::sort(probe.begin(), probe.end());
    }

    GradCheckEntry entry{p.name, probe.size(), 0.0, 0};
    for (std::size_t idx : probe) {
      const double saved = p.values[idx];
      p.values[idx] = saved + options.step;
      const double up = loss();
      p.values[idx] = saved - options.step;
      const double down = loss();
      p.values[idx] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double err = relative_error(p.analytic[idx], numeric, options.floor);
      if (err > entry.max_rel_error || !std::isfinite(err)) {
        entry.max_rel_error = std::isfinite(err) ? err : HUGE_VAL;
        entry.worst_index = idx;
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace wavecls::nn
