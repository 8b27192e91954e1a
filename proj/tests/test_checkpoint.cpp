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

#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_util.hpp"
#include "wavecls/audio_io.hpp"
#include "wavecls/checkpoint.hpp"
#include "wavecls/error.hpp"

namespace wavecls {
namespace {

ModelConfig small_config(std::size_t n_classes) {
  ModelConfig cfg;
  cfg.encoder.n_layers = 3;
  cfg.encoder.channels = 4;
  cfg.encoder.kernel = 2;
  cfg.encoder.seg_len = 64;
  cfg.head.in_channels = 4;
  cfg.head.blocks = {{6, 3, 2, 2}, {8, 3, 2, 2}};
  cfg.head.n_classes = n_classes;
  return cfg;
}

Checkpoint sample_checkpoint(std::size_t n_classes = 3) {
  Checkpoint c;
  c.params = build_model<float>(small_config(n_classes), 5);
  // Non-zero biases so every tensor carries information.
  std::uint64_t s = 40;
  c.params.visit([&](const std::string&, nn::Tensor& t) {
    if (t.rank() == 1) t = testing::random_tensor<float>(t.shape(), ++s, -0.3, 0.3);
  });
  for (std::size_t i = 0; i < n_classes; ++i) c.class_names.push_back("artist_" + std::to_string(i));
  c.meta = {7, 0.625, 1234, 0.004};
  return c;
}

std::uint32_t u32_at(const std::vector<std::uint8_t>& b, std::size_t pos) {
  return static_cast<std::uint32_t>(b[pos]) | static_cast<std::uint32_t>(b[pos + 1]) << 8 |
         static_cast<std::uint32_t>(b[pos + 2]) << 16 | static_cast<std::uint32_t>(b[pos + 3]) << 24;
}

TEST(Checkpoint, RoundTripIsExact) {
  const Checkpoint c = sample_checkpoint();
  const Checkpoint back = parse_checkpoint(serialize_checkpoint(c));
  EXPECT_EQ(back.config(), c.config());
  EXPECT_EQ(back.class_names, c.class_names);
  EXPECT_EQ(back.meta, c.meta);
  const auto a = c.params.tensors();
  const auto b = back.params.tensors();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i]->shape(), b[i]->shape());
    EXPECT_EQ(std::memcmp(a[i]->data(), b[i]->data(), a[i]->size() * sizeof(float)), 0);
  }
}

TEST(Checkpoint, SaveLoadForwardIsBitIdentical) {
  testing::TempDir dir("ckpt");
  const Checkpoint c = sample_checkpoint();
  save_checkpoint(c, dir / "m.ckpt");
  const Checkpoint back = load_checkpoint(dir / "m.ckpt");
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    std::vector<float> x(64);
    for (auto& v : x) v = static_cast<float>(rng.uniform(-1, 1));
    const auto y0 = model_forward<float>(x, c.params);
    const auto y1 = model_forward<float>(x, back.params);
    ASSERT_EQ(y0.size(), y1.size());
    EXPECT_EQ(std::memcmp(y0.data(), y1.data(), y0.size() * sizeof(float)), 0);
  }
}

TEST(Checkpoint, LayoutFollowsDocumentedFormat) {
  const Checkpoint c = sample_checkpoint();
  const auto bytes = serialize_checkpoint(c);
  ASSERT_GT(bytes.size(), 11u);
  EXPECT_EQ(std::memcmp(bytes.data(), "WVCLS1\0", 7), 0);
  const std::uint32_t hlen = u32_at(bytes, 7);
  const std::string header(bytes.begin() + 11, bytes.begin() + 11 + hlen);
  const auto j = nlohmann::json::parse(header);
  // Canonical form: compact and key-sorted, so dumping again is a fixpoint.
  EXPECT_EQ(j.dump(), header);
  EXPECT_EQ(j["classes"].get<std::vector<std::string>>(), c.class_names);
  std::vector<std::pair<std::string, const nn::Tensor*>> tensors;
  c.params.visit([&](const std::string& n, const nn::Tensor& t) { tensors.emplace_back(n, &t); });
  EXPECT_EQ(j["tensor_count"].get<std::size_t>(), tensors.size());

  std::size_t pos = 11 + hlen;
  for (const auto& [name, t] : tensors) {
    const std::uint32_t nlen = u32_at(bytes, pos);
    pos += 4;
    EXPECT_EQ(std::string(bytes.begin() + pos, bytes.begin() + pos + nlen), name);
    pos += nlen;
    const std::uint32_t rank = u32_at(bytes, pos);
    pos += 4;
    ASSERT_EQ(rank, t->rank());
    for (std::uint32_t r = 0; r < rank; ++r, pos += 4) EXPECT_EQ(u32_at(bytes, pos), t->dim(r));
    for (float v : t->values()) {
      float got;
      const std::uint32_t raw = u32_at(bytes, pos);
      std::memcpy(&got, &raw, 4);
      ASSERT_EQ(got, v);
      pos += 4;
    }
  }
  EXPECT_EQ(pos, bytes.size());
}

TEST(Checkpoint, CorruptMagicIsRejected) {
  auto bytes = serialize_checkpoint(sample_checkpoint());
  bytes[0] = 'X';
  EXPECT_THROW(parse_checkpoint(bytes), CheckpointError);
  EXPECT_THROW(parse_checkpoint(std::vector<std::uint8_t>{'W', 'V'}), CheckpointError);
}

TEST(Checkpoint, TruncationAnywhereIsRejected) {
  const auto bytes = serialize_checkpoint(sample_checkpoint());
  for (std::size_t cut : {std::size_t{0}, std::size_t{9}, std::size_t{30}, bytes.size() / 2,
                          bytes.size() - 1}) {
    std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + cut);
    EXPECT_THROW(parse_checkpoint(part), CheckpointError) << cut;
  }
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(parse_checkpoint(extra), CheckpointError);
}

TEST(Checkpoint, ShapeMismatchIsRejected) {
  auto bytes = serialize_checkpoint(sample_checkpoint());
  // The first tensor's first dimension sits right after its name and rank.
  const std::size_t pos = 11 + u32_at(bytes, 7);
  const std::size_t dim_pos = pos + 4 + u32_at(bytes, pos) + 4;
  bytes[dim_pos] ^= 1;
  EXPECT_THROW(parse_checkpoint(bytes), CheckpointError);
}

TEST(Checkpoint, MissingFileIsIoError) {
  testing::TempDir dir("ckpt_missing");
  EXPECT_THROW(load_checkpoint(dir / "nope.ckpt"), IoError);
}

TEST(Checkpoint, LabelSpaceMustMatch) {
  Checkpoint c;
  c.params = build_model<float>(default_model_config(20), 1);
  EXPECT_NO_THROW(require_label_space(c, 20));
  EXPECT_THROW(require_label_space(c, 19), ConfigError);
}

}  // namespace
}  // namespace wavecls
