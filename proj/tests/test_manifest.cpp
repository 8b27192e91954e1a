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

#include <map>
#include <set>

#include "test_util.hpp"
#include "wavecls/error.hpp"
#include "wavecls/manifest.hpp"

namespace wavecls {
namespace {

DatasetManifest make_manifest(const std::vector<std::pair<std::string, std::size_t>>& artists) {
  std::vector<ManifestEntry> entries;
  for (const auto& [artist, n] : artists) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = artist + "_" + std::to_string(i);
      entries.push_back({id, artist + "/" + std::to_string(i) + ".wav", artist,
                         Split::kUnassigned, Channel::kMono});
    }
  }
  return DatasetManifest(std::move(entries));
}

SplitCounts count_splits(const DatasetManifest& m, const std::string& artist = "") {
  SplitCounts c;
  for (const auto& e : m.entries()) {
    if (!artist.empty() && e.artist != artist) continue;
    if (e.split == Split::kTrain) ++c.train;
    if (e.split == Split::kValid) ++c.valid;
    if (e.split == Split::kTest) ++c.test;
  }
  return c;
}

TEST(Manifest, ClassIndicesFollowSortedArtistNames) {
  const auto m = make_manifest({{"beatles", 1}, {"aerosmith", 1}});
  EXPECT_EQ(m.class_names(), (std::vector<std::string>{"aerosmith", "beatles"}));
  EXPECT_EQ(m.class_index("aerosmith"), 0u);
  EXPECT_EQ(m.class_index("beatles"), 1u);
  EXPECT_THROW(m.class_index("queen"), DataError);
}

TEST(Manifest, DuplicateTrackIdThrows) {
  std::vector<ManifestEntry> e = {{"a", "x.wav", "A", Split::kTrain, Channel::kMono},
                                  {"a", "y.wav", "B", Split::kTrain, Channel::kMono}};
  EXPECT_THROW(DatasetManifest{e}, DataError);
}

TEST(Manifest, SaveLoadRoundTrip) {
  testing::TempDir dir("manifest");
  std::vector<ManifestEntry> e = {
      {"t1", "a/one.wav", "Artist, The", Split::kTrain, Channel::kRight},
      {"t2", "b/two \"x\".wav", "beta", Split::kTest, Channel::kLeft},
      {"t3", "c.wav", "beta", Split::kUnassigned, Channel::kMono}};
  const DatasetManifest m(e);
  save_manifest(m, dir / "m.csv");
  const DatasetManifest back = load_manifest(dir / "m.csv");
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.base_dir(), dir.path());
  EXPECT_EQ(back.resolve(back.entries()[0]), dir.path() / "a/one.wav");
}

TEST(Manifest, HeaderAndColumnOrder) {
  const std::string text = format_manifest(make_manifest({{"x", 1}}));
  EXPECT_EQ(text.substr(0, text.find('\n')), "track_id,path,artist,split,channel");
  const auto m = parse_manifest("artist,split,channel,track_id,path\nA,valid,mono,t,p.wav\n");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.entries()[0].split, Split::kValid);
  EXPECT_EQ(m.entries()[0].path, "p.wav");
}

TEST(Manifest, ParseErrors) {
  EXPECT_THROW(parse_manifest("track_id,path,artist,split\nt,p,a,train\n"), ParseError);
  EXPECT_THROW(parse_manifest("track_id,path,artist,split,channel\nt,p,a,holdout,mono\n"),
               ParseError);
  EXPECT_THROW(parse_manifest("track_id,path,artist,split,channel\nt,p,a,train,center\n"),
               ParseError);
  EXPECT_THROW(parse_manifest("track_id,path,artist,split,channel\nt,p,a,train\n"),
               ParseError);
  EXPECT_THROW(
      parse_manifest("track_id,path,artist,split,channel\nt,p,a,train,mono\nt,q,a,test,mono\n"),
      ParseError);
  EXPECT_THROW(parse_manifest(""), ParseError);
  EXPECT_THROW(load_manifest("/nonexistent/dir/m.csv"), IoError);
}

TEST(SplitBySong, TenTracksEightOneOne) {
  const auto m = split_by_song(make_manifest({{"solo", 10}}), {0.8, 0.1, 0.1}, 3);
  const auto c = count_splits(m);
  EXPECT_EQ(c.train, 8u);
  EXPECT_EQ(c.valid, 1u);
  EXPECT_EQ(c.test, 1u);
}

TEST(SplitBySong, DeterministicPerSeed) {
  const auto base = make_manifest({{"a", 12}, {"b", 9}, {"c", 5}});
  EXPECT_EQ(split_by_song(base, {}, 11), split_by_song(base, {}, 11));
  // Input order does not matter.
  std::vector<ManifestEntry> reversed(base.entries().rbegin(), base.entries().rend());
  const auto a = split_by_song(base, {}, 11);
  const auto b = split_by_song(DatasetManifest(reversed), {}, 11);
  std::map<std::string, Split> sa;
  std::map<std::string, Split> sb;
  for (const auto& e : a.entries()) sa[e.track_id] = e.split;
  for (const auto& e : b.entries()) sb[e.track_id] = e.split;
  EXPECT_EQ(sa, sb);
}

TEST(SplitBySong, ArtistTwentySizes) {
  // 1413 tracks over 20 artists, 70 or 71 each.
  std::vector<std::pair<std::string, std::size_t>> artists;
  for (int a = 0; a < 20; ++a) artists.push_back({"artist" + std::to_string(a), a < 13 ? 71 : 70});
  const auto m = split_by_song(make_manifest(artists), {0.8, 0.1, 0.1}, 0);
  ASSERT_EQ(m.size(), 1413u);
  const auto c = count_splits(m);
  EXPECT_NEAR(static_cast<double>(c.train), 1140.0, 20.0);
  EXPECT_NEAR(static_cast<double>(c.valid), 142.0, 20.0);
  EXPECT_NEAR(static_cast<double>(c.test), 131.0, 20.0);
}

TEST(SplitBySong, EveryArtistInEverySplit) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<std::string, std::size_t>> artists;
    const std::size_t n_artists = 1 + rng.index(6);
    for (std::size_t a = 0; a < n_artists; ++a) {
      artists.push_back({"art" + std::to_string(a), 3 + rng.index(40)});
    }
    const auto base = make_manifest(artists);
    const auto m = split_by_song(base, {0.7, 0.2, 0.1}, trial);
    EXPECT_EQ(m.size(), base.size());
    std::set<std::string> ids;
    for (const auto& e : m.entries()) {
      EXPECT_NE(e.split, Split::kUnassigned);
      ids.insert(e.track_id);
    }
    EXPECT_EQ(ids.size(), base.size());
    for (const auto& [artist, n] : artists) {
      const auto c = count_splits(m, artist);
      EXPECT_GE(c.train, 1u);
      EXPECT_GE(c.valid, 1u);
      EXPECT_GE(c.test, 1u);
      EXPECT_EQ(c.train + c.valid + c.test, n);
    }
  }
}

TEST(SplitBySong, TooFewTracksThrows) {
  EXPECT_THROW(split_by_song(make_manifest({{"a", 5}, {"b", 2}}), {}, 0), StratificationError);
}

TEST(SplitBySong, RatiosMustSumToOne) {
  EXPECT_THROW(validate_ratios({0.8, 0.1, 0.2}), ConfigError);
  EXPECT_THROW(validate_ratios({1.1, -0.05, -0.05}), ConfigError);
  EXPECT_NO_THROW(validate_ratios({0.6, 0.2, 0.2}));
  EXPECT_THROW(split_by_song(make_manifest({{"a", 5}}), {0.5, 0.5, 0.5}, 0), ConfigError);
}

TEST(StratifiedCounts, LargestRemainder) {
  const auto c = stratified_counts(71, {0.8, 0.1, 0.1});
  EXPECT_EQ(c.train + c.valid + c.test, 71u);
  EXPECT_EQ(c.train, 57u);
  const auto small = stratified_counts(3, {0.8, 0.1, 0.1});
  EXPECT_EQ(small.train, 1u);
  EXPECT_EQ(small.valid, 1u);
  EXPECT_EQ(small.test, 1u);
  EXPECT_THROW(stratified_counts(2, {}), StratificationError);
}

TEST(Split, ParseAndPrint) {
  for (Split s : {Split::kTrain, Split::kValid, Split::kTest, Split::kUnassigned}) {
    EXPECT_EQ(parse_split(to_string(s)), s);
  }
  EXPECT_THROW(parse_split("dev"), ParseError);
}

}  // namespace
}  // namespace wavecls
