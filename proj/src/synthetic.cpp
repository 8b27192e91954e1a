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

#include "wavecls/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "wavecls/error.hpp"
#include "wavecls/random.hpp"

namespace wavecls::synthetic {
namespace {

double oscillator(Waveform w, double phase) {
  const double frac = phase - std::floor(phase);
  switch (w) {
    case Waveform::kSine:
      return std::sin(2.0 * std::numbers::pi * frac);
    case Waveform::kSquare:
      return frac < 0.5 ? 1.0 : -1.0;
    case Waveform::kSaw:
      return 2.0 * frac - 1.0;
    case Waveform::kTriangle:
      return frac < 0.5 ? 4.0 * frac - 1.0 : 3.0 - 4.0 * frac;
  }
  return 0.0;
}

std::string two_digits(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02zu", n);
  return buf;
}

}  // namespace

Waveform artist_waveform(std::size_t artist) {
  return static_cast<Waveform>(artist % 4);
}

double artist_base_frequency(std::size_t artist) {
  return 110.0 * std::pow(2.0, static_cast<double>(artist) * 1.25);
}

std::vector<float> toy_track(const ToySpec& spec, std::size_t artist, std::size_t track) {
  if (spec.track_seconds <= 0.0 || spec.note_seconds <= 0.0) {
    throw ConfigError("toy track and note lengths must be positive");
  }
  Rng rng(mix_seed(spec.seed, artist * 1000 + track));
  const auto n = static_cast<std::size_t>(spec.track_seconds * kSampleRate);
  const auto note_len = static_cast<std::size_t>(spec.note_seconds * kSampleRate);
  const Waveform w = artist_waveform(artist);
  const double base = artist_base_frequency(artist);

  std::vector<float> out(n);
  double phase = 0.0;
  double freq = base;
  double amp = 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % note_len == 0) {
      freq = base * rng.uniform(1.0, 1.5);
      amp = rng.uniform(0.3, 0.6);
    }
    phase += freq / kSampleRate;
    const double v = amp * oscillator(w, phase) + spec.noise * rng.normal();
    out[i] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  return out;
}

DatasetManifest write_toy_dataset(const std::filesystem::path& dir, const ToySpec& spec) {
  std::vector<ManifestEntry> entries;
  for (std::size_t a = 0; a < spec.n_artists; ++a) {
    const std::string artist = "artist" + two_digits(a);
    std::filesystem::create_directories(dir / artist);
    for (std::size_t t = 0; t < spec.tracks_per_artist; ++t) {
      const auto samples = toy_track(spec, a, t);
      std::vector<std::int16_t> pcm(samples.size());
      for (std::size_t i = 0; i < samples.size(); ++i) pcm[i] = to_pcm16(samples[i]);
      const std::string rel = artist + "/track" + two_digits(t) + ".wav";
      write_file_bytes(dir / rel, encode_wav(pcm, 1));
      entries.push_back({artist + "_track" + two_digits(t), rel, artist, Split::kUnassigned,
                         Channel::kMono});
    }
  }
  DatasetManifest manifest(std::move(entries), dir);
  save_manifest(manifest, dir / "manifest.csv");
  return manifest;
}

}  // namespace wavecls::synthetic
