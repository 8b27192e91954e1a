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

#include <numeric>

#include "test_util.hpp"
#include "wavecls/error.hpp"
#include "wavecls/head.hpp"
#include "wavecls/nn/grad_check.hpp"

namespace wavecls {
namespace {

using nn::TensorD;
using testing::random_tensor;

HeadConfig small_head() {
  HeadConfig cfg;
  cfg.in_channels = 4;
  cfg.blocks = {{6, 3, 2, 2}, {8, 3, 2, 2}};
  cfg.n_classes = 3;
  return cfg;
}

TEST(HeadConfig, DefaultTimeLengths) {
  const HeadConfig cfg;
  EXPECT_EQ(cfg.time_lengths(16000), (std::vector<std::size_t>{4000, 1000, 250}));
  EXPECT_EQ(cfg.n_classes, 20u);
  EXPECT_EQ(cfg.in_channels, 40u);
  EXPECT_NO_THROW(cfg.validate(8000));
}

TEST(HeadConfig, ImpossibleChainThrows) {
  const HeadConfig cfg;
  EXPECT_THROW(cfg.validate(40), ConfigError);  // 40 -> 10 -> 2 -> window 4 too long
  HeadConfig zero = cfg;
  zero.blocks[1].out_channels = 0;
  EXPECT_THROW(zero.validate(16000), ConfigError);
  HeadConfig none = cfg;
  none.n_classes = 0;
  EXPECT_THROW(none.validate(16000), ConfigError);
}

TEST(BuildHead, DefaultStructure) {
  const auto p = build_head<float>(HeadConfig{}, 1);
  ASSERT_EQ(p.convs.size(), 3u);
  EXPECT_EQ(p.convs[0].weight.shape(), (nn::Shape{64, 40, 3}));
  EXPECT_EQ(p.convs[1].weight.shape(), (nn::Shape{96, 64, 3}));
  EXPECT_EQ(p.convs[2].weight.shape(), (nn::Shape{128, 96, 3}));
  for (const auto& c : p.convs) EXPECT_TRUE(c.causal);
  EXPECT_EQ(p.output_proj.weight.shape(), (nn::Shape{20, 128, 1}));
}

TEST(HeadForward, LogitCountFollowsClasses) {
  for (std::size_t n : {20u, 19u}) {
    HeadConfig cfg;
    cfg.n_classes = n;
    const auto p = build_head<float>(cfg, 2);
    const auto features = random_tensor<float>({40, 16000}, 3, 0.0, 1.0);
    const nn::Tensor logits = head_forward(features, p);
    EXPECT_EQ(logits.shape(), (nn::Shape{n}));
    EXPECT_TRUE(logits.all_finite());
  }
}

TEST(HeadForward, ZeroFeaturesZeroLogits) {
  const auto p = build_head<double>(small_head(), 4);
  const TensorD logits = head_forward(TensorD({4, 16}), p);
  for (double v : logits.values()) EXPECT_EQ(v, 0.0);
}

TEST(HeadForward, ShapeMismatchThrows) {
  const auto p = build_head<double>(small_head(), 4);
  EXPECT_THROW(head_forward(TensorD({5, 16}), p), ShapeError);
}

TEST(HeadForward, SensitiveToTimeOrder) {
  const auto p = build_head<double>(small_head(), 5);
  const auto f = random_tensor<double>({4, 32}, 6, 0.0, 1.0);
  TensorD shuffled = f;
  std::vector<std::size_t> perm(32);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(7);
  rng.shuffle(perm.begin(), perm.end());
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t t = 0; t < 32; ++t) shuffled(c, t) = f(c, perm[t]);
  }
  const TensorD a = head_forward(f, p);
  const TensorD b = head_forward(shuffled, p);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += std::abs(a[i] - b[i]);
  EXPECT_GT(diff, 1e-6);
}

TEST(HeadBackward, MatchesFiniteDifferences) {
  auto p = build_head<double>(small_head(), 8);
  std::uint64_t s = 80;
  p.visit([&](const std::string&, TensorD& t) {
    if (t.rank() == 1) t = random_tensor<double>(t.shape(), ++s, -0.2, 0.2);
  });
  auto f = random_tensor<double>({4, 32}, 9);
  const auto w = random_tensor<double>({3}, 10);
  HeadTrace<double> trace;
  head_forward(f, p, &trace);
  HeadParams<double> grads = zeros_like(p);
  const TensorD df = head_backward(trace, p, w, grads);
  auto loss = [&] { return testing::weighted_sum(head_forward(f, p), w); };
  auto params = testing::grad_params(p, grads);
  params.push_back({"features", f.values(), df.values()});
  const auto report = nn::grad_check(loss, params, 1e-4);
  EXPECT_TRUE(report.passed()) << report.max_rel_error;
}

TEST(Bottleneck, EqualsLogits) {
  const auto p = build_head<float>(small_head(), 11);
  const auto f = random_tensor<float>({4, 32}, 12);
  const nn::Tensor logits = head_forward(f, p);
  const BottleneckVector b = bottleneck(f, p, "track@0");
  EXPECT_EQ(b.segment_id, "track@0");
  ASSERT_EQ(b.values.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(b.values[i], logits[i]);
  EXPECT_EQ(bottleneck(f, p).values, b.values);
}

TEST(Predict, UniformLogitsPickClassZero) {
  const std::vector<float> logits(20, 0.0f);
  const Prediction p = predict(logits);
  EXPECT_EQ(p.label, 0u);
  for (double q : p.probs) EXPECT_NEAR(q, 0.05, 1e-12);
}

TEST(Predict, UniqueMaxWins) {
  const std::vector<float> logits = {0.1f, -2.0f, 3.0f, 2.9f};
  const Prediction p = predict(logits);
  EXPECT_EQ(p.label, 2u);
  EXPECT_NEAR(std::accumulate(p.probs.begin(), p.probs.end(), 0.0), 1.0, 1e-6);
  const std::vector<float> tie = {1.0f, 5.0f, 5.0f};
  EXPECT_EQ(predict(tie).label, 1u);
}

TEST(Predict, InvariantToConstantShift) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<float> logits(7);
    for (auto& v : logits) v = static_cast<float>(rng.uniform(-5, 5));
    std::vector<float> shifted = logits;
    const float c = static_cast<float>(rng.uniform(-100, 100));
    for (auto& v : shifted) v += c;
    EXPECT_EQ(predict(logits).label, predict(shifted).label);
  }
}

}  // namespace
}  // namespace wavecls
