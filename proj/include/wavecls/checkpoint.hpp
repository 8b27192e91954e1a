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

#ifndef WAVECLS_CHECKPOINT_HPP_
#define WAVECLS_CHECKPOINT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wavecls/model.hpp"

namespace wavecls {

struct CheckpointMeta {
  std::size_t epoch = 0;
  double valid_accuracy = 0.0;
  std::uint64_t seed = 0;
  double segment_seconds = 1.0;

  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

/// Trained weights plus everything needed to use them: the architecture,
/// the class-index -> artist table and training metadata.
struct Checkpoint {
  ModelParams<float> params;
  std::vector<std::string> class_names;
  CheckpointMeta meta;

  ModelConfig config() const { return params.config(); }
};

/// File layout, all integers little-endian:
///   "WVCLS1\0"
///   u32 header length, header = key-sorted compact JSON
///     {classes, config, format, meta, tensor_count}
///   per tensor: u32 name length, UTF-8 name, u32 rank, u32 dims..., f32 payload
std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt);

/// Throws CheckpointError on bad magic, truncation, or tensors that do not
/// match the header's architecture.
Checkpoint parse_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Throws ConfigError unless the checkpoint predicts exactly `n_classes`.
void require_label_space(const Checkpoint& ckpt, std::size_t n_classes);

}  // namespace wavecls

#endif  // WAVECLS_CHECKPOINT_HPP_
