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
#ifndef WAVECLS_MANIFEST_HPP_
#define WAVECLS_MANIFEST_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wavecls/audio_io.hpp"

namespace wavecls {

enum class Split { kTrain, kValid, kTest, kUnassigned };

std::string_view to_string(Split split);
/// Accepts train, valid, test and unassigned; anything else is a ParseError.
Split parse_split(std::string_view token);

struct ManifestEntry {
  std::string track_id;
  std::string path;
  std::string artist;
  Split split = Split::kUnassigned;
  Channel channel = Channel::kMono;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// The list of tracks in a dataset. Class indices are dense and follow the
/// sorted order of artist names.
class DatasetManifest {
 public:
  DatasetManifest() = default;
  /// Throws DataError on a duplicate or empty track id.
  explicit DatasetManifest(std::vector<ManifestEntry> entries,
                           std::filesystem::path base_dir = {});

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::vector<std::string> class_names() const;
  /// Throws DataError for an artist not in the manifest.
  std::size_t class_index(std::string_view artist) const;

  std::vector<ManifestEntry> subset(Split split) const;

  /// Relative paths resolve against the directory the manifest came from.
  const std::filesystem::path& base_dir() const { return base_dir_; }
  std::filesystem::path resolve(const ManifestEntry& entry) const;

  /// Compares entries only; base directories may differ.
  friend bool operator==(const DatasetManifest& a, const DatasetManifest& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<ManifestEntry> entries_;
  std::filesystem::path base_dir_;
};

/// Parses manifest CSV text (header track_id,path,artist,split,channel in
/// any column order). Throws ParseError on a missing column, ragged row,
/// unknown token or duplicate track id.
DatasetManifest parse_manifest(std::string_view text, std::filesystem::path base_dir = {});
std::string format_manifest(const DatasetManifest& manifest);

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

/// Throws ConfigError unless the ratios are non-negative and sum to 1
/// within 1e-9.
void validate_ratios(const SplitRatios& ratios);

/// Per-artist song split. Each artist's tracks are shuffled with a seed
/// derived from the base seed, then cut into train/valid/test counts obtained by
/// largest-remainder rounding, with at least one track in every split.
/// Throws StratificationError for an artist with fewer than three tracks.
DatasetManifest split_by_song(const DatasetManifest& manifest, const SplitRatios& ratios,
                              std::uint64_t seed);

/// Per-artist track counts chosen by split_by_song for n tracks.
struct SplitCounts {
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;
};
SplitCounts stratified_counts(std::size_t n, const SplitRatios& ratios);

/// Decodes an entry's audio and stamps it with id, artist and class label.
AudioTrack load_track(const DatasetManifest& manifest, const ManifestEntry& entry);

}  // namespace wavecls

#endif  // WAVECLS_MANIFEST_HPP_
