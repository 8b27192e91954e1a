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
#include "wavecls/manifest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "wavecls/csv.hpp"
#include "wavecls/error.hpp"
#include "wavecls/random.hpp"

namespace wavecls {

namespace {

constexpr std::array<std::string_view, 5> kColumns = {"track_id", "path", "artist", "split",
                                                      "channel"};

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
    case Split::kUnassigned:
      return "unassigned";
  }
  return "unassigned";
}

Split parse_split(std::string_view token) {
  if (token == "train") return Split::kTrain;
  if (token == "valid") return Split::kValid;
  if (token == "test") return Split::kTest;
  if (token == "unassigned") return Split::kUnassigned;
  throw ParseError("unknown split '" + std::string(token) +
                   "' (expected train, valid, test or unassigned)");
}

DatasetManifest::DatasetManifest(std::vector<ManifestEntry> entries,
                                 std::filesystem::path base_dir)
    : entries_(std::move(entries)), base_dir_(std::move(base_dir)) {
  std::set<std::string_view> seen;
  for (const auto& e : entries_) {
    if (e.track_id.empty()) throw DataError("manifest: empty track_id");
    if (!seen.insert(e.track_id).second) {
      throw DataError("manifest: duplicate track_id '" + e.track_id + "'");
    }
  }
}

std::vector<std::string> DatasetManifest::class_names() const {
  std::set<std::string> names;
  for (const auto& e : entries_) names.insert(e.artist);
  return {names.begin(), names.end()};
}

std::size_t DatasetManifest::class_index(std::string_view artist) const {
  const auto names = class_names();
  const auto it = std::lower_bound(names.begin(), names.end(), artist);
  if (it == names.end() || *it != artist) {
    throw DataError("manifest: unknown artist '" + std::string(artist) + "'");
  }
  return static_cast<std::size_t>(it - names.begin());
}

std::vector<ManifestEntry> DatasetManifest::subset(Split split) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(out),
               [split](const ManifestEntry& e) { return e.split == split; });
  return out;
}

std::filesystem::path DatasetManifest::resolve(const ManifestEntry& entry) const {
  std::filesystem::path p(entry.path);
  if (p.is_relative() && !base_dir_.empty()) return base_dir_ / p;
  return p;
}

DatasetManifest parse_manifest(std::string_view text, std::filesystem::path base_dir) {
  std::vector<csv::Row> rows = csv::parse(text);
  if (rows.empty()) throw ParseError("manifest: empty file");
  const csv::Row& header = rows.front();
  std::array<std::size_t, kColumns.size()> column{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw ParseError("manifest: missing column '" + std::string(kColumns[c]) + "'");
    }
    column[c] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != header.size()) {
      throw ParseError("manifest: line " + std::to_string(r + 1) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    ManifestEntry e;
    e.track_id = row[column[0]];
    e.path = row[column[1]];
    e.artist = row[column[2]];
    e.split = parse_split(row[column[3]]);
    e.channel = parse_channel(row[column[4]]);
    if (e.track_id.empty()) throw ParseError("manifest: empty track_id on line " + std::to_string(r + 1));
    if (!seen.insert(e.track_id).second) {
      throw ParseError("manifest: duplicate track_id '" + e.track_id + "'");
    }
    entries.push_back(std::move(e));
  }
  return DatasetManifest(std::move(entries), std::move(base_dir));
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out = csv::format_row({kColumns.begin(), kColumns.end()});
  for (const auto& e : manifest.entries()) {
    out += csv::format_row({e.track_id, e.path, e.artist, std::string(to_string(e.split)),
                            std::string(to_string(e.channel))});
  }
  return out;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.parent_path());
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << format_manifest(manifest);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void validate_ratios(const SplitRatios& r) {
  if (r.train < 0 || r.valid < 0 || r.test < 0) {
    throw ConfigError("split ratios must be non-negative");
  }
  if (std::abs(r.train + r.valid + r.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
}

SplitCounts stratified_counts(std::size_t n, const SplitRatios& ratios) {
  if (n < 3) {
    throw StratificationError("need at least 3 tracks to fill train/valid/test, got " +
                              std::to_string(n));
  }
  const std::array<double, 3> share = {ratios.train, ratios.valid, ratios.test};
  std::array<std::size_t, 3> count{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double q = share[i] * static_cast<double>(n);
    count[i] = static_cast<std::size_t>(std::floor(q + 1e-9));
    remainder[i] = q - static_cast<double>(count[i]);
    assigned += count[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; k = (k + 1) % 3, ++assigned) ++count[order[k]];
  // Every split gets a track, taken from the currently largest split.
  for (std::size_t i = 0; i < 3; ++i) {
    while (count[i] == 0) {
      const auto donor = static_cast<std::size_t>(
          std::max_element(count.begin(), count.end()) - count.begin());
      --count[donor];
      ++count[i];
    }
  }
  return {count[0], count[1], count[2]};
}

DatasetManifest split_by_song(const DatasetManifest& manifest, const SplitRatios& ratios,
                              std::uint64_t seed) {
  validate_ratios(ratios);
  std::map<std::string, std::vector<std::size_t>> by_artist;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    by_artist[manifest.entries()[i].artist].push_back(i);
  }

  std::vector<ManifestEntry> entries = manifest.entries();
  std::uint64_t stream = 0;
  for (auto& [artist, indices] : by_artist) {
    if (indices.size() < 3) {
      throw StratificationError("artist '" + artist + "' has " +
                                std::to_string(indices.size()) +
                                " tracks; at least 3 are needed for a train/valid/test split");
    }
    std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return entries[a].track_id < entries[b].track_id;
    });
    Rng rng(mix_seed(seed, stream++));
    rng.shuffle(indices.begin(), indices.end());
    const SplitCounts counts = stratified_counts(indices.size(), ratios);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      Split s = Split::kTest;
      if (k < counts.train) {
        s = Split::kTrain;
      } else if (k < counts.train + counts.valid) {
        s = Split::kValid;
      }
      entries[indices[k]].split = s;
    }
  }
  return DatasetManifest(std::move(entries), manifest.base_dir());
}

AudioTrack load_track(const DatasetManifest& manifest, const ManifestEntry& entry) {
  AudioTrack track = load_wav(manifest.resolve(entry), entry.channel);
  track.track_id = entry.track_id;
  track.artist_name = entry.artist;
  track.label = manifest.class_index(entry.artist);
  return track;
}

}  // namespace wavecls
