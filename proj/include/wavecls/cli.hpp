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

#ifndef WAVECLS_CLI_HPP_
#define WAVECLS_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wavecls/encoder.hpp"
#include "wavecls/head.hpp"
#include "wavecls/manifest.hpp"
#include "wavecls/model.hpp"
#include "wavecls/trainer.hpp"

namespace wavecls::cli {

/// Settings shared by the subcommands. Loaded from a JSON file; flags given
/// on the command line take precedence.
struct RunConfig {
  std::filesystem::path manifest;
  double segment_seconds = 1.0;
  EncoderConfig encoder;  // seg_len is derived from segment_seconds
  std::vector<HeadBlockConfig> head_blocks = HeadConfig{}.blocks;
  TrainConfig train;
  SplitRatios ratios;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  bool deterministic = false;

  std::size_t segment_samples() const;
  /// Encoder and head sized for `n_classes` artists.
  ModelConfig model_config(std::size_t n_classes) const;
};

/// Keys: manifest, segment_seconds, seed, out, deterministic, ratios[3],
/// encoder{n_layers, channels, kernel}, head{blocks[...]}, train{...}.
/// Absent keys keep their defaults. Throws ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

/// Segment lengths used in the input-size sweep; others only warn.
bool is_standard_segment_seconds(double seconds);

/// "Hh Mmin", minutes rounded down.
std::string format_duration(double seconds);

/// Entry point. `args` excludes the program name. Returns the exit code:
/// 0 on success, 1 for any library error, 2 for command-line misuse.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wavecls::cli

#endif  // WAVECLS_CLI_HPP_
