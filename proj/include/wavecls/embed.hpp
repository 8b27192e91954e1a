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

#ifndef WAVECLS_EMBED_HPP_
#define WAVECLS_EMBED_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavecls/audio_io.hpp"
#include "wavecls/checkpoint.hpp"

namespace wavecls {

/// Bottleneck vectors, one row per segment (or track).
struct EmbeddingSet {
  std::size_t dim = 0;
  std::vector<double> points;  // row-major, size() x dim
  std::vector<std::size_t> labels;
  std::vector<std::string> ids;

  std::size_t size() const { return ids.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(points).subspan(i * dim, dim);
  }
  /// Throws DataError when the row counts disagree.
  void validate() const;
};

/// Runs the frozen model over every segment; rows are the head logits.
/// Throws ConfigError when a segment label lies outside the checkpoint's
/// label space.
EmbeddingSet extract_embeddings(const Checkpoint& ckpt, std::span<const Segment> segments);

enum class Granularity { kSegment, kTrack };

std::string_view to_string(Granularity g);
/// Throws UsageError for anything but "segment" or "track".
Granularity parse_granularity(std::string_view token);

/// Averages the rows of each track. `track_ids[i]` names the track of row i;
/// output rows are ordered by track id.
EmbeddingSet mean_by_track(const EmbeddingSet& segments,
                           std::span<const std::string> track_ids);

struct EmbeddingRow {
  std::string id;
  std::size_t label = 0;
  std::string artist;
  double x = 0.0;
  double y = 0.0;
};

/// Header `id,label,artist,x,y`; coordinates printed to 6 decimals.
std::string format_embedding_csv(std::span<const std::array<double, 2>> coords,
                                 std::span<const std::size_t> labels,
                                 std::span<const std::string> ids,
                                 std::span<const std::string> class_names);
std::vector<EmbeddingRow> parse_embedding_csv(std::string_view text);

void export_embedding_csv(std::span<const std::array<double, 2>> coords,
                          std::span<const std::size_t> labels,
                          std::span<const std::string> ids,
                          std::span<const std::string> class_names,
                          const std::filesystem::path& path);

}  // namespace wavecls

#endif  // WAVECLS_EMBED_HPP_
