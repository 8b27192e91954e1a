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

#ifndef WAVECLS_SYNTHETIC_HPP_
#define WAVECLS_SYNTHETIC_HPP_

// Toy "artists": each class plays notes on its own oscillator shape in its
// own frequency band, with additive noise. Used for smoke tests and demos.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wavecls/manifest.hpp"

namespace wavecls::synthetic {

enum class Waveform { kSine, kSquare, kSaw, kTriangle };

struct ToySpec {
  std::size_t n_artists = 4;
  std::size_t tracks_per_artist = 5;
  double track_seconds = 10.0;
  double note_seconds = 0.25;
  double noise = 0.05;
  std::uint64_t seed = 7;
};

Waveform artist_waveform(std::size_t artist);
/// Lower edge of the artist's band in Hz; notes fall in [f, 1.5 f).
double artist_base_frequency(std::size_t artist);

/// Mono samples in [-1, 1] at 16 kHz.
std::vector<float> toy_track(const ToySpec& spec, std::size_t artist, std::size_t track);

/// Writes artistNN/trackNN.wav files plus manifest.csv (no splits) under
/// `dir` and returns the manifest.
DatasetManifest write_toy_dataset(const std::filesystem::path& dir, const ToySpec& spec);

}  // namespace wavecls::synthetic

#endif  // WAVECLS_SYNTHETIC_HPP_
