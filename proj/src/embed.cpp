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

#include "wavecls/embed.hpp"

#include <cstdio>
#include <map>

#include "wavecls/csv.hpp"
#include "wavecls/error.hpp"
#include "wavecls/trainer.hpp"

namespace wavecls {

void EmbeddingSet::validate() const {
  if (labels.size() != ids.size() || points.size() != ids.size() * dim) {
    throw DataError("embedding set rows disagree: " + std::to_string(ids.size()) + " ids, " +
                    std::to_string(labels.size()) + " labels, " +
                    std::to_string(points.size()) + " values of width " +
                    std::to_string(dim));
  }
}

EmbeddingSet extract_embeddings(const Checkpoint& ckpt, std::span<const Segment> segments) {
  const std::size_t n_classes = ckpt.config().n_classes();
  for (const auto& s : segments) {
    if (s.label >= n_classes) {
      throw ConfigError("segment " + s.id() + " has label " + std::to_string(s.label) +
                        " but the checkpoint knows " + std::to_string(n_classes) +
                        " classes");
    }
  }
  const auto logits = batch_logits(ckpt.params, segments);
  EmbeddingSet out;
  out.dim = n_classes;
  out.points.reserve(segments.size() * n_classes);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    out.points.insert(out.points.end(), logits[i].begin(), logits[i].end());
    out.labels.push_back(segments[i].label);
    out.ids.push_back(segments[i].id());
  }
  return out;
}

std::string_view to_string(Granularity g) {
  return g == Granularity::kTrack ? "track" : "segment";
}

Granularity parse_granularity(std::string_view token) {
  if (token == "segment") return Granularity::kSegment;
  if (token == "track") return Granularity::kTrack;
  throw UsageError("granularity must be 'segment' or 'track', got '" + std::string(token) +
                   "'");
}

EmbeddingSet mean_by_track(const EmbeddingSet& segments,
                           std::span<const std::string> track_ids) {
  segments.validate();
  if (track_ids.size() != segments.size()) {
    throw DataError("mean_by_track: one track id per row required");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < track_ids.size(); ++i) groups[track_ids[i]].push_back(i);

  EmbeddingSet out;
  out.dim = segments.dim;
  for (const auto& [track, rows] : groups) {
    std::vector<double> mean(out.dim, 0.0);
    for (std::size_t r : rows) {
      const auto v = segments.row(r);
      for (std::size_t k = 0; k < out.dim; ++k) mean[k] += v[k];
    }
    for (double& v : mean) v /= static_cast<double>(rows.size());
    out.points.insert(out.points.end(), mean.begin(), mean.end());
    out.labels.push_back(segments.labels[rows.front()]);
    out.ids.push_back(track);
  }
  return out;
}

std::string format_embedding_csv(std::span<const std::array<double, 2>> coords,
                                 std::span<const std::size_t> labels,
                                 std::span<const std::string> ids,
                                 std::span<const std::string> class_names) {
  if (coords.size() != labels.size() || coords.size() != ids.size()) {
    throw DataError("embedding export: inconsistent row counts");
  }
  std::string out = csv::format_row({"id", "label", "artist", "x", "y"});
  char x[32];
  char y[32];
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (labels[i] >= class_names.size()) {
      throw DataError("embedding export: label " + std::to_string(labels[i]) +
                      " has no artist name");
    }
    std::snprintf(x, sizeof(x), "%.6f", coords[i][0]);
    std::snprintf(y, sizeof(y), "%.6f", coords[i][1]);
    out += csv::format_row({ids[i], std::to_string(labels[i]), class_names[labels[i]], x, y});
  }
  return out;
}

std::vector<EmbeddingRow> parse_embedding_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows[0] != csv::Row{"id", "label", "artist", "x", "y"}) {
    throw ParseError("embedding CSV: header must be id,label,artist,x,y");
  }
  std::vector<EmbeddingRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != 5) throw ParseError("embedding CSV: ragged row " + std::to_string(i + 1));
    try {
      out.push_back({r[0], std::stoul(r[1]), r[2], std::stod(r[3]), std::stod(r[4])});
    } catch (const std::logic_error&) {
      throw ParseError("embedding CSV: bad number on row " + std::to_string(i + 1));
    }
  }
  return out;
}

void export_embedding_csv(std::span<const std::array<double, 2>> coords,
                          std::span<const std::size_t> labels,
                          std::span<const std::string> ids,
                          std::span<const std::string> class_names,
                          const std::filesystem::path& path) {
  const std::string text = format_embedding_csv(coords, labels, ids, class_names);
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                   text.size()));
}

}  // namespace wavecls
