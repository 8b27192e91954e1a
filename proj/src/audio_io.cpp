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
#include "wavecls/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "wavecls/error.hpp"

namespace wavecls {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

struct ParsedWav {
  WavInfo info;
  std::size_t data_offset = 0;
};

ParsedWav parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw FormatError("wav: missing RIFF/WAVE header");
  }
  ParsedWav parsed;
  bool have_fmt = false;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16 || body + size > bytes.size()) throw FormatError("wav: truncated fmt chunk");
      std::uint16_t format = read_u16(bytes, body);
      if (format == kFormatExtensible) {
        if (size < 40) throw FormatError("wav: truncated extensible fmt chunk");
        format = read_u16(bytes, body + 24);  // first two bytes of the subformat GUID
      }
      if (format != kFormatPcm) {
        throw FormatError("wav: unsupported encoding " + std::to_string(format) +
                          " (only integer PCM is accepted)");
      }
      parsed.info.channels = read_u16(bytes, body + 2);
      parsed.info.sample_rate = read_u32(bytes, body + 4);
      parsed.info.bits_per_sample = read_u16(bytes, body + 14);
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (!have_fmt) throw FormatError("wav: data chunk precedes fmt chunk");
      if (body + size > bytes.size()) throw FormatError("wav: truncated data chunk");
      parsed.data_offset = body;
      const std::size_t frame_bytes =
          static_cast<std::size_t>(parsed.info.channels) * (parsed.info.bits_per_sample / 8);
      parsed.info.frames = frame_bytes ? size / frame_bytes : 0;
      have_data = true;
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw FormatError("wav: no fmt chunk");
  if (!have_data) throw FormatError("wav: no data chunk");
  if (parsed.info.bits_per_sample != 16) {
    throw FormatError("wav: " + std::to_string(parsed.info.bits_per_sample) +
                      "-bit samples are not supported (PCM16 only)");
  }
  if (parsed.info.channels != 1 && parsed.info.channels != 2) {
    throw FormatError("wav: " + std::to_string(parsed.info.channels) +
                      " channels are not supported (1 or 2 only)");
  }
  return parsed;
}

}  // namespace

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::kMono:
      return "mono";
    case Channel::kLeft:
      return "left";
    case Channel::kRight:
      return "right";
  }
  return "mono";
}

Channel parse_channel(std::string_view token) {
  if (token == "mono") return Channel::kMono;
  if (token == "left") return Channel::kLeft;
  if (token == "right") return Channel::kRight;
  throw ParseError("unknown channel '" + std::string(token) + "' (expected mono, left or right)");
}

std::string Segment::id() const { return parent_track_id + "@" + std::to_string(offset); }

WavInfo inspect_wav(std::span<const std::uint8_t> bytes) { return parse_wav(bytes).info; }

AudioTrack decode_wav(std::span<const std::uint8_t> bytes, Channel channel) {
  const ParsedWav parsed = parse_wav(bytes);
  const WavInfo& info = parsed.info;
  if (info.sample_rate != kSampleRate) {
    throw RateError("wav: sample rate " + std::to_string(info.sample_rate) +
                    " Hz, expected " + std::to_string(kSampleRate) + " Hz (no resampling)");
  }
  if (channel == Channel::kRight && info.channels < 2) {
    throw ChannelError("wav: right channel requested from a mono file");
  }

  AudioTrack track;
  track.sample_rate = info.sample_rate;
  track.samples.resize(info.frames);
  const std::size_t stride = info.channels;
  auto sample_at = [&](std::size_t frame, std::size_t ch) {
    const std::size_t at = parsed.data_offset + 2 * (frame * stride + ch);
    return static_cast<std::int16_t>(read_u16(bytes, at));
  };
  constexpr float kScale = 1.0f / 32768.0f;
  for (std::size_t f = 0; f < info.frames; ++f) {
    if (stride == 1) {
      track.samples[f] = sample_at(f, 0) * kScale;
    } else if (channel == Channel::kLeft) {
      track.samples[f] = sample_at(f, 0) * kScale;
    } else if (channel == Channel::kRight) {
      track.samples[f] = sample_at(f, 1) * kScale;
    } else {
      const int sum = sample_at(f, 0) + sample_at(f, 1);
      track.samples[f] = static_cast<float>(sum) * (kScale * 0.5f);
    }
  }
  return track;
}

std::vector<std::uint8_t> encode_wav(std::span<const std::int16_t> interleaved,
                                     std::uint16_t channels, std::uint32_t sample_rate) {
  if (channels == 0 || interleaved.size() % channels != 0) {
    throw FormatError("wav: sample count is not a multiple of the channel count");
  }
  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, channels);
  put_u32(out, sample_rate);
  put_u32(out, sample_rate * channels * 2);
  put_u16(out, static_cast<std::uint16_t>(channels * 2));
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (std::int16_t s : interleaved) put_u16(out, static_cast<std::uint16_t>(s));
  return out;
}

std::int16_t to_pcm16(float sample) {
  const float scaled = std::round(sample * 32768.0f);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0f, 32767.0f));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

AudioTrack load_wav(const std::filesystem::path& path, Channel channel) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_wav(bytes, channel);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const RateError& e) {
    throw RateError(path.string() + ": " + e.what());
  } catch (const ChannelError& e) {
    throw ChannelError(path.string() + ": " + e.what());
  }
}

std::vector<Segment> segment_track(const AudioTrack& track, std::size_t seg_len) {
  if (seg_len == 0) throw ConfigError("segment length must be >= 1");
  const std::size_t count = track.samples.size() / seg_len;
  std::vector<Segment> segments;
  segments.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const auto first = track.samples.begin() + static_cast<std::ptrdiff_t>(s * seg_len);
    segments.push_back(Segment{track.track_id, s * seg_len,
                               std::vector<float>(first, first + static_cast<std::ptrdiff_t>(seg_len)),
                               track.label});
  }
  return segments;
}

}  // namespace wavecls
