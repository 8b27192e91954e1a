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

#include "wavecls/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wavecls/error.hpp"
#include "wavecls/parallel.hpp"
#include "wavecls/random.hpp"

namespace wavecls {
namespace {

constexpr double kEntropyTarget = 1e-5;  // bisection stops below this
constexpr double kEntropyLimit = 1e-4;   // anything worse is an error
constexpr int kMaxBisections = 200;

std::vector<double> squared_distances(std::span<const double> points, std::size_t m,
                                      std::size_t dim) {
  std::vector<double> d(m * m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    const double* a = points.data() + i * dim;
    for (std::size_t j = 0; j < m; ++j) {
      const double* b = points.data() + j * dim;
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
      }
      d[i * m + j] = s;
    }
  });
  return d;
}

// Fills row i of the conditional distribution for precision `beta` and
// returns its entropy in bits. Distances are shifted by the row minimum so
// exp() cannot underflow to an all-zero row.
double conditional_row(const double* dist, std::size_t m, std::size_t i, double dmin,
                       double beta, double* row) {
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    row[j] = j == i ? 0.0 : std::exp(-beta * (dist[j] - dmin));
    sum += row[j];
  }
  double weighted = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    row[j] /= sum;
    if (j != i) weighted += (dist[j] - dmin) * row[j];
  }
  return (std::log(sum) + beta * weighted) / std::log(2.0);
}

}  // namespace

void TsneConfig::validate(std::size_t m) const {
  if (!(perplexity > 1.0) || !(perplexity < static_cast<double>(m) / 3.0)) {
    throw ConfigError("perplexity " + std::to_string(perplexity) + " is infeasible for " +
                      std::to_string(m) + " points (need 1 < perplexity < M/3)");
  }
  if (iterations == 0 || !(learning_rate > 0.0) || !(early_exaggeration >= 1.0)) {
    throw ConfigError("t-SNE iterations, learning rate and exaggeration must be positive");
  }
}

Affinities compute_affinities(std::span<const double> points, std::size_t dim,
                              double perplexity) {
  if (dim == 0 || points.size() % dim != 0) {
    throw DataError("t-SNE input is not a whole number of rows");
  }
  const std::size_t m = points.size() / dim;
  const double target = std::log2(perplexity);
  const auto dist = squared_distances(points, m, dim);

  Affinities out;
  out.m = m;
  out.entropy_error.assign(m, 0.0);
  std::vector<double> cond(m * m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    const double* d = dist.data() + i * m;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) dmin = std::min(dmin, d[j]);
    }
    double* row = cond.data() + i * m;
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double h = conditional_row(d, m, i, dmin, beta, row);
    for (int it = 0; it < kMaxBisections && std::abs(h - target) >= kEntropyTarget; ++it) {
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      h = conditional_row(d, m, i, dmin, beta, row);
    }
    out.entropy_error[i] = std::abs(h - target);
  });
  for (std::size_t i = 0; i < m; ++i) {
    if (!(out.entropy_error[i] < kEntropyLimit)) {
      throw ConfigError("perplexity " + std::to_string(perplexity) +
                        " cannot be matched for point " + std::to_string(i));
    }
  }

  out.p.assign(m * m, 0.0);
  const double scale = 1.0 / (2.0 * static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out.p[i * m + j] = (cond[i * m + j] + cond[j * m + i]) * scale;
    }
  }
  return out;
}

double kl_divergence(const Affinities& a, std::span<const std::array<double, 2>> y) {
  const std::size_t m = a.m;
  std::vector<double> row_sum(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double dx = y[i][0] - y[j][0];
      const double dy = y[i][1] - y[j][1];
      row_sum[i] += 1.0 / (1.0 + dx * dx + dy * dy);
    }
  }
  double z = 0.0;
  for (double s : row_sum) z += s;
  double kl = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = a.p[i * m + j];
      if (j == i || p <= 0.0) continue;
      const double dx = y[i][0] - y[j][0];
      const double dy = y[i][1] - y[j][1];
      const double q = 1.0 / (1.0 + dx * dx + dy * dy) / z;
      kl += p * std::log(p / q);
    }
  }
  return kl;
}

TsneResult tsne(std::span<const double> points, std::size_t dim, const TsneConfig& cfg) {
  TsneResult result;
  if (dim == 0 || points.size() % dim != 0) {
    throw DataError("t-SNE input is not a whole number of rows");
  }
  const std::size_t m = points.size() / dim;
  if (m == 0) return result;
  if (m == 1) {
    result.coords.push_back({0.0, 0.0});
    return result;
  }
  if (m < 4) throw DataError("t-SNE needs at least 4 points, got " + std::to_string(m));
  if (!std::all_of(points.begin(), points.end(), [](double v) { return std::isfinite(v); })) {
    throw DataError("t-SNE input contains non-finite values");
  }
  cfg.validate(m);

  const Affinities aff = compute_affinities(points, dim, cfg.perplexity);
  result.max_entropy_error =
      *std::max_element(aff.entropy_error.begin(), aff.entropy_error.end());

  Rng rng(cfg.seed);
  auto& y = result.coords;
  y.resize(m);
  for (auto& p : y) {
    p[0] = rng.normal() * 1e-4;
    p[1] = rng.normal() * 1e-4;
  }
  result.initial_kl = kl_divergence(aff, y);

  std::vector<std::array<double, 2>> velocity(m, {0.0, 0.0});
  std::vector<std::array<double, 2>> gains(m, {1.0, 1.0});
  std::vector<std::array<double, 2>> grad(m);
  std::vector<double> num(m * m, 0.0);
  std::vector<double> row_sum(m, 0.0);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const double exaggeration =
        it < cfg.exaggeration_iterations ? cfg.early_exaggeration : 1.0;
    const double momentum =
        it < cfg.momentum_switch ? cfg.initial_momentum : cfg.final_momentum;

    parallel_for(m, [&](std::size_t i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) {
          num[i * m + j] = 0.0;
          continue;
        }
        const double dx = y[i][0] - y[j][0];
        const double dy = y[i][1] - y[j][1];
        num[i * m + j] = 1.0 / (1.0 + dx * dx + dy * dy);
        s += num[i * m + j];
      }
      row_sum[i] = s;
    });
    double z = 0.0;
    for (double s : row_sum) z += s;
    if (!(z > 0.0)) throw DataError("t-SNE: degenerate output affinities");

    parallel_for(m, [&](std::size_t i) {
      double gx = 0.0;
      double gy = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const double n = num[i * m + j];
        const double w = (exaggeration * aff.p[i * m + j] - n / z) * n;
        gx += w * (y[i][0] - y[j][0]);
        gy += w * (y[i][1] - y[j][1]);
      }
      grad[i] = {4.0 * gx, 4.0 * gy};
    });

    for (std::size_t i = 0; i < m; ++i) {
      for (int k = 0; k < 2; ++k) {
        double& g = gains[i][k];
        g = (grad[i][k] > 0.0) != (velocity[i][k] > 0.0) ? g + 0.2 : g * 0.8;
        g = std::max(g, 0.01);
        velocity[i][k] = momentum * velocity[i][k] - cfg.learning_rate * g * grad[i][k];
        y[i][k] += velocity[i][k];
      }
    }
    double cx = 0.0;
    double cy = 0.0;
    for (const auto& p : y) {
      cx += p[0];
      cy += p[1];
    }
    cx /= static_cast<double>(m);
    cy /= static_cast<double>(m);
    for (auto& p : y) {
      p[0] -= cx;
      p[1] -= cy;
    }
  }
  result.final_kl = kl_divergence(aff, y);
  return result;
}

}  // namespace wavecls
