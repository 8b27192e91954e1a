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

#include <array>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "wavecls/embed.hpp"
#include "wavecls/error.hpp"
#include "wavecls/trainer.hpp"

namespace wavecls {
namespace {

Checkpoint small_checkpoint() {
  ModelConfig cfg;
  cfg.encoder.n_layers = 2;
  cfg.encoder.channels = 4;
  cfg.encoder.kernel = 2;
  cfg.encoder.seg_len = 32;
  cfg.head.in_channels = 4;
  cfg.head.blocks = {{6, 3, 2, 2}, {8, 3, 2, 2}};
  cfg.head.n_classes = 3;
  Checkpoint c;
  c.params = build_model<float>(cfg, 2);
  c.class_names = {"ann", "bob", "cy"};
  return c;
}

std::vector<Segment> segments(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Segment> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].parent_track_id = "track" + std::to_string(i % 3);
    out[i].offset = 32 * (i / 3);
    out[i].label = i % 3;
    out[i].samples.resize(32);
    for (auto& v : out[i].samples) v = static_cast<float>(rng.uniform(-1, 1));
  }
  return out;
}

TEST(Extract, RowsAreLogits) {
  const auto c = small_checkpoint();
  auto segs = segments(7, 1);
  segs[6].samples = segs[0].samples;
  const auto e = extract_embeddings(c, segs);
  EXPECT_NO_THROW(e.validate());
  ASSERT_EQ(e.size(), 7u);
  EXPECT_EQ(e.dim, 3u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(e.ids[i], segs[i].id());
    EXPECT_EQ(e.labels[i], segs[i].label);
    const auto logits = model_forward<float>(segs[i].samples, c.params);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(e.row(i)[k], static_cast<double>(logits[k]));
  }
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(e.row(6)[k], e.row(0)[k]);
}

TEST(Extract, LabelOutsideCheckpointThrows) {
  auto segs = segments(2, 2);
  segs[1].label = 3;
  EXPECT_THROW(extract_embeddings(small_checkpoint(), segs), ConfigError);
}

TEST(EmbeddingSet, ValidateCatchesRowMismatch) {
  EmbeddingSet e;
  e.dim = 2;
  e.points = {1, 2, 3, 4};
  e.labels = {0, 1};
  e.ids = {"a"};
  EXPECT_THROW(e.validate(), DataError);
}

TEST(MeanByTrack, AveragesRowsSortedByTrack) {
  EmbeddingSet e;
  e.dim = 2;
  e.points = {1, 2, 10, 20, 3, 4, 30, 40};
  e.labels = {0, 1, 0, 1};
  e.ids = {"a@0", "b@0", "a@1", "b@1"};
  const std::vector<std::string> tracks = {"z", "b", "z", "b"};
  const auto m = mean_by_track(e, tracks);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.ids[0], "b");
  EXPECT_EQ(m.ids[1], "z");
  EXPECT_EQ(m.labels[0], 1u);
  EXPECT_DOUBLE_EQ(m.row(0)[0], 20.0);
  EXPECT_DOUBLE_EQ(m.row(0)[1], 30.0);
  EXPECT_DOUBLE_EQ(m.row(1)[0], 2.0);
  EXPECT_DOUBLE_EQ(m.row(1)[1], 3.0);
}

TEST(Granularity, ParseAndName) {
  EXPECT_EQ(parse_granularity("segment"), Granularity::kSegment);
  EXPECT_EQ(parse_granularity("track"), Granularity::kTrack);
  EXPECT_EQ(to_string(Granularity::kTrack), "track");
  EXPECT_THROW(parse_granularity("song"), UsageError);
}

TEST(EmbeddingCsv, HeaderRowsAndRoundTrip) {
  const std::vector<std::array<double, 2>> xy = {{1.25, -3.5}, {0.1234567, 9.0}, {0, 0}};
  const std::vector<std::size_t> labels = {2, 0, 1};
  const std::vector<std::string> ids = {"t1@0", "t2@16000", "t3@0"};
  const std::vector<std::string> names = {"ann", "bob", "cy"};
  const std::string text = format_embedding_csv(xy, labels, ids, names);
  EXPECT_EQ(text.substr(0, text.find('\n')), "id,label,artist,x,y");
  const auto rows = parse_embedding_csv(text);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].id, "t1@0");
  EXPECT_EQ(rows[0].artist, "cy");
  EXPECT_EQ(rows[0].label, 2u);
  EXPECT_NEAR(rows[1].x, 0.123457, 1e-12);
  EXPECT_DOUBLE_EQ(rows[0].y, -3.5);
}

TEST(EmbeddingCsv, ExportWritesFile) {
  testing::TempDir dir("embed");
  const std::vector<std::array<double, 2>> xy = {{1, 2}};
  const std::vector<std::size_t> labels = {0};
  const std::vector<std::string> ids = {"a"};
  const std::vector<std::string> names = {"ann"};
  export_embedding_csv(xy, labels, ids, names, dir / "e.csv");
  const auto bytes = read_file_bytes(dir / "e.csv");
  const std::string text(bytes.begin(), bytes.end());
  EXPECT_EQ(parse_embedding_csv(text).size(), 1u);
  const std::vector<std::size_t> too_many = {0, 1};
  EXPECT_ANY_THROW(format_embedding_csv(xy, too_many, ids, names));
}

}  // namespace
}  // namespace wavecls
