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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "wavecls/error.hpp"
#include "wavecls/random.hpp"
#include "wavecls/tsne.hpp"

namespace wavecls {
namespace {

std::vector<double> random_points(std::size_t m, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(m * dim);
  for (auto& v : x) v = rng.normal();
  return x;
}

// k clusters of n points in `dim` dims, centers `sep` apart along
// separate axes, unit spread.
std::vector<double> clusters(std::size_t k, std::size_t n, std::size_t dim, double sep,
                             std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        x.push_back(rng.normal() + (d == c ? sep / std::sqrt(2.0) : 0.0));
      }
    }
  }
  return x;
}

TsneConfig short_config(double perplexity, std::size_t iterations, std::uint64_t seed = 1) {
  TsneConfig cfg;
  cfg.perplexity = perplexity;
  cfg.iterations = iterations;
  cfg.seed = seed;
  return cfg;
}

TEST(TsneConfig, PerplexityMustFitTheData) {
  TsneConfig cfg;
  EXPECT_NO_THROW(cfg.validate(150));
  EXPECT_THROW(cfg.validate(90), ConfigError);  // 30 == 90 / 3
  cfg.perplexity = 1.0;
  EXPECT_THROW(cfg.validate(150), ConfigError);
}

TEST(Affinities, SymmetricNormalizedAndOnTarget) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto x = random_points(60, 5, seed);
    const auto a = compute_affinities(x, 5, 10.0);
    ASSERT_EQ(a.m, 60u);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.m; ++i) {
      EXPECT_EQ(a.p[i * a.m + i], 0.0);
      for (std::size_t j = 0; j < a.m; ++j) {
        EXPECT_NEAR(a.p[i * a.m + j], a.p[j * a.m + i], 1e-15);
        EXPECT_GE(a.p[i * a.m + j], 0.0);
        sum += a.p[i * a.m + j];
      }
      EXPECT_LT(a.entropy_error[i], 1e-4);
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Affinities, DuplicatePointsStayFinite) {
  std::vector<double> x = random_points(20, 3, 4);
  for (std::size_t d = 0; d < 3; ++d) x[3 + d] = x[d];
  const auto a = compute_affinities(x, 3, 4.0);
  for (double v : a.p) EXPECT_TRUE(std::isfinite(v));
}

TEST(Kl, MatchesDirectFormula) {
  const auto x = random_points(12, 4, 5);
  const auto a = compute_affinities(x, 4, 3.0);
  Rng rng(6);
  std::vector<std::array<double, 2>> y(12);
  for (auto& p : y) p = {rng.normal(), rng.normal()};
  double z = 0.0;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j)
      if (i != j) {
        const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
        z += 1.0 / (1.0 + dx * dx + dy * dy);
      }
  double kl = 0.0;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) {
      const double p = a.p[i * 12 + j];
      if (i == j || p <= 0.0) continue;
      const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
      kl += p * std::log(p / (1.0 / (1.0 + dx * dx + dy * dy) / z));
    }
  EXPECT_NEAR(kl_divergence(a, y), kl, 1e-10);
}

TEST(Tsne, DegenerateSizes) {
  const TsneConfig cfg = short_config(2.0, 10);
  EXPECT_TRUE(tsne({}, 3, cfg).coords.empty());
  const std::vector<double> one = {1.0, 2.0, 3.0};
  const auto r = tsne(one, 3, cfg);
  ASSERT_EQ(r.coords.size(), 1u);
  EXPECT_EQ(r.coords[0][0], 0.0);
  EXPECT_EQ(r.coords[0][1], 0.0);
  const std::vector<double> three = {0, 0, 1, 1, 2, 2};
  EXPECT_THROW(tsne(three, 2, cfg), DataError);
}

TEST(Tsne, RejectsNonFiniteAndInfeasiblePerplexity) {
  auto x = random_points(30, 3, 7);
  EXPECT_THROW(tsne(x, 3, short_config(15.0, 10)), ConfigError);
  x[4] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(tsne(x, 3, short_config(5.0, 10)), DataError);
}

TEST(Tsne, CenteredFiniteAndSeedDeterministic) {
  const auto x = random_points(40, 6, 8);
  const auto a = tsne(x, 6, short_config(8.0, 300, 3));
  const auto b = tsne(x, 6, short_config(8.0, 300, 3));
  const auto c = tsne(x, 6, short_config(8.0, 300, 4));
  ASSERT_EQ(a.coords.size(), 40u);
  double mx = 0.0, my = 0.0;
  for (const auto& p : a.coords) {
    EXPECT_TRUE(std::isfinite(p[0]) && std::isfinite(p[1]));
    mx += p[0];
    my += p[1];
  }
  EXPECT_NEAR(mx / 40.0, 0.0, 1e-9);
  EXPECT_NEAR(my / 40.0, 0.0, 1e-9);
  EXPECT_EQ(a.coords, b.coords);
  EXPECT_NE(a.coords, c.coords);
  EXPECT_LT(a.max_entropy_error, 1e-4);
}

TEST(Tsne, SeparatesClusters) {
  const std::size_t k = 3, n = 20, dim = 10;
  const auto x = clusters(k, n, dim, 10.0, 9);
  const auto r = tsne(x, dim, short_config(6.0, 400));
  EXPECT_LT(r.final_kl, r.initial_kl);
  double intra = 0, inter = 0;
  std::size_t ni = 0, ne = 0;
  for (std::size_t i = 0; i < k * n; ++i) {
    for (std::size_t j = i + 1; j < k * n; ++j) {
      const double d = std::hypot(r.coords[i][0] - r.coords[j][0], r.coords[i][1] - r.coords[j][1]);
      if (i / n == j / n) {
        intra += d;
        ++ni;
      } else {
        inter += d;
        ++ne;
      }
    }
  }
  EXPECT_LT(intra / ni, inter / ne);
}

}  // namespace
}  // namespace wavecls
