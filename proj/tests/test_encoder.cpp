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

#include "test_util.hpp"
#include "wavecls/encoder.hpp"
#include "wavecls/error.hpp"
#include "wavecls/nn/grad_check.hpp"

namespace wavecls {
namespace {

using nn::TensorD;
using testing::random_tensor;

EncoderConfig small_config(std::size_t layers = 3, std::size_t channels = 4,
                           std::size_t len = 32) {
  EncoderConfig cfg;
  cfg.n_layers = layers;
  cfg.channels = channels;
  cfg.kernel = 2;
  cfg.seg_len = len;
  return cfg;
}

// Random biases too, so no gradient path is trivially zero.
EncoderParams<double> random_encoder(const EncoderConfig& cfg, std::uint64_t seed) {
  EncoderParams<double> p = build_encoder<double>(cfg, seed);
  std::uint64_t s = seed * 1000;
  p.visit([&](const std::string&, TensorD& t) {
    if (t.rank() == 1) t = random_tensor<double>(t.shape(), ++s, -0.2, 0.2);
  });
  return p;
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-1, 1);
  return x;
}

TEST(EncoderConfig, DefaultMatchesArchitecture) {
  const EncoderConfig cfg;
  EXPECT_EQ(cfg.channels, 40u);
  EXPECT_EQ(cfg.kernel, 2u);
  EXPECT_EQ(cfg.seg_len, 16000u);
  const auto d = cfg.dilations();
  ASSERT_EQ(d.size(), cfg.n_layers);
  EXPECT_EQ(d.front(), 1u);
  EXPECT_EQ(d.back(), 512u);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], std::size_t{1} << i);
}

TEST(EncoderConfig, InvalidConfigsThrow) {
  EncoderConfig cfg;
  cfg.channels = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = EncoderConfig{};
  cfg.n_layers = 0;
  EXPECT_THROW(build_encoder<float>(cfg, 0), ConfigError);
  cfg = EncoderConfig{};
  cfg.n_layers = 40;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(ReceptiveField, ClosedForm) {
  EncoderConfig one = small_config(1);
  EXPECT_EQ(receptive_field(one), 2u);
  EXPECT_EQ(receptive_field(EncoderConfig{}), 1024u);
  EncoderConfig k1 = small_config(6);
  k1.kernel = 1;
  EXPECT_EQ(receptive_field(k1), 1u);
  EncoderConfig k3 = small_config(3);
  k3.kernel = 3;
  EXPECT_EQ(receptive_field(k3), 1u + 2 * (1 + 2 + 4));
}

TEST(BuildEncoder, DefaultShapes) {
  const auto p = build_encoder<float>(EncoderConfig{}, 1);
  EXPECT_EQ(p.layers.size(), 10u);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& layer = p.layers[l];
    EXPECT_EQ(layer.filter.weight.shape(), (nn::Shape{40, 40, 2}));
    EXPECT_EQ(layer.gate.weight.shape(), (nn::Shape{40, 40, 2}));
    EXPECT_EQ(layer.filter.dilation, std::size_t{1} << l);
    EXPECT_TRUE(layer.filter.causal);
    EXPECT_TRUE(layer.gate.causal);
    EXPECT_EQ(layer.residual.weight.shape(), (nn::Shape{40, 40, 1}));
    EXPECT_EQ(layer.skip.weight.shape(), (nn::Shape{40, 40, 1}));
  }
  EXPECT_EQ(p.input_proj.weight.shape(), (nn::Shape{40, 1, 1}));
  EXPECT_EQ(p.post_proj.weight.shape(), (nn::Shape{40, 40, 1}));
}

TEST(BuildEncoder, SeedRepeatable) {
  const auto a = build_encoder<float>(small_config(), 5);
  const auto b = build_encoder<float>(small_config(), 5);
  const auto c = build_encoder<float>(small_config(), 6);
  std::vector<nn::Tensor> ta, tb, tc;
  a.visit([&](const std::string&, const nn::Tensor& t) { ta.push_back(t); });
  b.visit([&](const std::string&, const nn::Tensor& t) { tb.push_back(t); });
  c.visit([&](const std::string&, const nn::Tensor& t) { tc.push_back(t); });
  EXPECT_EQ(ta, tb);
  EXPECT_NE(ta, tc);
}

TEST(BuildEncoder, ParameterCountMatchesEnumeration) {
  for (const EncoderConfig& cfg : {EncoderConfig{}, small_config(), small_config(5, 7)}) {
    const auto p = build_encoder<float>(cfg, 0);
    std::size_t counted = 0;
    std::size_t tensors = 0;
    p.visit([&](const std::string&, const nn::Tensor& t) {
      counted += t.size();
      ++tensors;
    });
    EXPECT_EQ(counted, encoder_parameter_count(cfg));
    EXPECT_EQ(tensors, 2 * (2 + 4 * cfg.n_layers));
  }
  const std::size_t c = 40;
  EXPECT_EQ(encoder_parameter_count(EncoderConfig{}),
            (c + c) + 10 * (2 * (c * c * 2 + c) + 2 * (c * c + c)) + (c * c + c));
}

TEST(ResidualBlock, ZeroWeightsGiveIdentity) {
  const auto cfg = small_config();
  auto p = build_encoder<double>(cfg, 1);
  ResidualLayer<double> layer = zeros_like(p).layers[1];
  const auto x = random_tensor<double>({4, 32}, 2);
  const auto out = residual_block_forward(x, layer);
  EXPECT_EQ(out.residual, x);
  for (double v : out.skip.values()) EXPECT_EQ(v, 0.0);
}

TEST(ResidualBlock, Causal) {
  const auto p = random_encoder(small_config(), 3);
  const auto& layer = p.layers[2];
  const auto x = random_tensor<double>({4, 32}, 4);
  const auto base = residual_block_forward(x, layer);
  for (std::size_t t0 = 0; t0 < 32; t0 += 3) {
    TensorD bumped = x;
    for (std::size_t c = 0; c < 4; ++c) bumped(c, t0) += 0.5;
    const auto out = residual_block_forward(bumped, layer);
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t t = 0; t < t0; ++t) {
        EXPECT_EQ(out.residual(c, t), base.residual(c, t));
        EXPECT_EQ(out.skip(c, t), base.skip(c, t));
      }
    }
  }
}

TEST(ResidualBlock, BackwardMatchesFiniteDifferences) {
  auto p = random_encoder(small_config(), 5);
  ResidualLayer<double> layer = p.layers[1];
  auto x = random_tensor<double>({4, 32}, 6);
  const auto wr = random_tensor<double>({4, 32}, 7);
  const auto ws = random_tensor<double>({4, 32}, 8);
  ResidualBlockTrace<double> trace;
  residual_block_forward(x, layer, &trace);
  ResidualLayer<double> grads = zeros_like(p).layers[1];
  const TensorD dx = residual_block_backward(trace, layer, wr, ws, grads);
  auto loss = [&] {
    const auto out = residual_block_forward(x, layer);
    return testing::weighted_sum(out.residual, wr) + testing::weighted_sum(out.skip, ws);
  };
  auto params = testing::grad_params(layer, grads);
  params.push_back({"x", x.values(), dx.values()});
  const auto report = nn::grad_check(loss, params, 1e-4);
  EXPECT_TRUE(report.passed()) << report.max_rel_error;
}

TEST(Encoder, OutputShapeAndWrongLength) {
  const auto cfg = small_config(4, 5, 100);
  const auto p = build_encoder<float>(cfg, 1);
  std::vector<float> x(100, 0.1f);
  EXPECT_EQ(encoder_forward<float>(x, p).shape(), (nn::Shape{5, 100}));
  std::vector<float> bad(99);
  EXPECT_THROW(encoder_forward<float>(bad, p), ShapeError);
}

TEST(Encoder, ZeroInputZeroBiasGivesZero) {
  const auto p = build_encoder<double>(small_config(), 9);
  const std::vector<double> x(32, 0.0);
  const auto y = encoder_forward<double>(x, p);
  for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(Encoder, CausalAtRandomPositions) {
  const auto cfg = small_config(5, 4, 200);
  const auto p = random_encoder(cfg, 10);
  const auto x = random_signal(200, 11);
  const TensorD base = encoder_forward<double>(x, p);
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t t = rng.index(199);
    auto bumped = x;
    for (std::size_t u = t + 1; u < 200; ++u) bumped[u] += rng.uniform(-1, 1);
    const TensorD y = encoder_forward<double>(bumped, p);
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t s = 0; s <= t; ++s) ASSERT_EQ(y(c, s), base(c, s));
    }
  }
}

TEST(Encoder, ReceptiveFieldByPerturbation) {
  const auto cfg = small_config(4, 4, 64);  // receptive field 16
  const std::size_t rf = receptive_field(cfg);
  ASSERT_EQ(rf, 16u);
  const auto p = random_encoder(cfg, 13);
  const auto x = random_signal(64, 14);
  const TensorD base = encoder_forward<double>(x, p);
  const std::size_t t = 50;
  auto changes_output = [&](std::size_t src) {
    auto bumped = x;
    bumped[src] += 0.7;
    const TensorD y = encoder_forward<double>(bumped, p);
    for (std::size_t c = 0; c < 4; ++c) {
      if (y(c, t) != base(c, t)) return true;
    }
    return false;
  };
  EXPECT_TRUE(changes_output(t - (rf - 1)));
  EXPECT_FALSE(changes_output(t - rf));
  EXPECT_TRUE(changes_output(t));
}

TEST(Encoder, SkipSumScalesWithSkipWeights) {
  const auto cfg = small_config(3, 4, 40);
  auto p = build_encoder<double>(cfg, 15);  // zero biases
  const auto x = random_signal(40, 16);
  EncoderTrace<double> before;
  encoder_forward<double>(x, p, &before);
  const double alpha = 2.5;
  for (auto& layer : p.layers) {
    for (auto& v : layer.skip.weight.values()) v *= alpha;
  }
  EncoderTrace<double> after;
  encoder_forward<double>(x, p, &after);
  for (std::size_t i = 0; i < before.skip_sum.size(); ++i) {
    EXPECT_NEAR(after.skip_sum[i], alpha * before.skip_sum[i], 1e-12);
  }
}

TEST(Encoder, BackwardMatchesFiniteDifferences) {
  const auto cfg = small_config(3, 4, 32);
  auto p = random_encoder(cfg, 17);
  auto x = random_signal(32, 18);
  const auto w = random_tensor<double>({4, 32}, 19);
  EncoderTrace<double> trace;
  encoder_forward<double>(x, p, &trace);
  EncoderParams<double> grads = zeros_like(p);
  const TensorD dx = encoder_backward(trace, p, w, grads);
  auto loss = [&] { return testing::weighted_sum(encoder_forward<double>(x, p), w); };
  auto params = testing::grad_params(p, grads);
  params.push_back({"input", x, dx.values()});
  const auto report = nn::grad_check(loss, params, 1e-4);
  EXPECT_TRUE(report.passed()) << report.max_rel_error;
}

}  // namespace
}  // namespace wavecls
