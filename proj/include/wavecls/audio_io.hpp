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
#ifndef WAVECLS_AUDIO_IO_HPP_
#define WAVECLS_AUDIO_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavecls {

/// The only accepted input rate. Nothing is resampled.
inline constexpr std::uint32_t kSampleRate = 16000;

/// Which channel of a WAV file becomes the track. Mono on a stereo file
/// averages the two channels; Left on a mono file reads its only channel.
enum class Channel { kMono, kLeft, kRight };

std::string_view to_string(Channel channel);
/// Throws ParseError for anything other than mono/left/right.
Channel parse_channel(std::string_view token);

/// A decoded waveform, scaled into [-1, 1).
struct AudioTrack {
  std::string track_id;
  std::vector<float> samples;
  std::uint32_t sample_rate = kSampleRate;
  std::size_t label = 0;
  std::string artist_name;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// A fixed-length block cut from a track; it inherits the track's label.
struct Segment {
  std::string parent_track_id;
  std::size_t offset = 0;
  std::vector<float> samples;
  std::size_t label = 0;

  /// "<track_id>@<offset>"
  std::string id() const;
};

struct WavInfo {
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
  std::size_t frames = 0;

  double duration_seconds() const {
    return sample_rate ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

/// Parses the RIFF header only. Throws FormatError when the container is
/// not PCM16 mono/stereo; does not check the sample rate.
WavInfo inspect_wav(std::span<const std::uint8_t> bytes);

/// PCM16 values are divided by 32768. Throws FormatError, RateError (not
/// 16 kHz) or ChannelError (right channel of a mono file).
AudioTrack decode_wav(std::span<const std::uint8_t> bytes, Channel channel);

/// Writes a canonical 44-byte-header PCM16 file from interleaved samples.
std::vector<std::uint8_t> encode_wav(std::span<const std::int16_t> interleaved,
                                     std::uint16_t channels,
                                     std::uint32_t sample_rate = kSampleRate);

/// Rounds a [-1, 1] float to PCM16 (scale 32768, clamped to the int16 range).
std::int16_t to_pcm16(float sample);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

/// Reads and decodes a WAV file. The track id is left empty.
AudioTrack load_wav(const std::filesystem::path& path, Channel channel);

/// Non-overlapping windows from offset 0; the incomplete tail is dropped.
std::vector<Segment> segment_track(const AudioTrack& track, std::size_t seg_len);

}  // namespace wavecls

#endif  // WAVECLS_AUDIO_IO_HPP_
