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

#include "wavecls/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "json.hpp"
#include "wavecls/audio_io.hpp"
#include "wavecls/error.hpp"

namespace wavecls {

namespace {

constexpr char kMagic[] = "WVCLS1";  // written with its terminating NUL
constexpr std::size_t kMagicSize = sizeof(kMagic);
constexpr int kFormatVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}

std::uint32_t to_u32(std::size_t v, const char* what) {
  if (v > UINT32_MAX) throw CheckpointError(std::string("checkpoint: ") + what + " too large");
  return static_cast<std::uint32_t>(v);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > bytes_.size() - pos_) throw CheckpointError("checkpoint: truncated file");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    auto b = take(4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

nlohmann::json header_json(const Checkpoint& ckpt, std::size_t tensor_count) {
  return {{"classes", ckpt.class_names},
          {"config", to_json(ckpt.config())},
          {"format", kFormatVersion},
          {"meta",
           {{"epoch", ckpt.meta.epoch},
            {"valid_accuracy", ckpt.meta.valid_accuracy},
            {"seed", ckpt.meta.seed},
            {"segment_seconds", ckpt.meta.segment_seconds}}},
          {"tensor_count", tensor_count}};
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt) {
  std::vector<std::pair<std::string, const nn::Tensor*>> tensors;
  ckpt.params.visit(
      [&](const std::string& name, const nn::Tensor& t) { tensors.emplace_back(name, &t); });

  std::vector<std::uint8_t> out(kMagic, kMagic + kMagicSize);
  const std::string header = header_json(ckpt, tensors.size()).dump();
  put_u32(out, to_u32(header.size(), "header"));
  out.insert(out.end(), header.begin(), header.end());
  for (const auto& [name, t] : tensors) {
    put_u32(out, to_u32(name.size(), "tensor name"));
    out.insert(out.end(), name.begin(), name.end());
    put_u32(out, to_u32(t->rank(), "rank"));
    for (std::size_t d : t->shape()) put_u32(out, to_u32(d, "dimension"));
    for (float v : t->values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

Checkpoint parse_checkpoint(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (bytes.size() < kMagicSize || std::memcmp(in.take(kMagicSize).data(), kMagic, kMagicSize) != 0) {
    throw CheckpointError("checkpoint: bad magic (not a wavecls checkpoint)");
  }
  const std::uint32_t header_len = in.u32();
  const auto header_bytes = in.take(header_len);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_bytes.begin(), header_bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: unreadable header: ") + e.what());
  }

  Checkpoint ckpt;
  std::size_t tensor_count = 0;
  ModelConfig cfg;
  try {
    if (header.at("format").get<int>() != kFormatVersion) {
      throw CheckpointError("checkpoint: unsupported format version");
    }
    cfg = model_config_from_json(header.at("config"));
    ckpt.class_names = header.at("classes").get<std::vector<std::string>>();
    const auto& meta = header.at("meta");
    ckpt.meta.epoch = meta.at("epoch").get<std::size_t>();
    ckpt.meta.valid_accuracy = meta.at("valid_accuracy").get<double>();
    ckpt.meta.seed = meta.at("seed").get<std::uint64_t>();
    ckpt.meta.segment_seconds = meta.at("segment_seconds").get<double>();
    tensor_count = header.at("tensor_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: malformed header: ") + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }

  try {
    cfg.validate();
    ckpt.params = zeros_like(build_model<float>(cfg, 0));
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("checkpoint: invalid architecture: ") + e.what());
  }
  if (ckpt.class_names.size() != cfg.n_classes()) {
    throw CheckpointError("checkpoint: class table has " +
                          std::to_string(ckpt.class_names.size()) + " names for " +
                          std::to_string(cfg.n_classes()) + " classes");
  }

  std::vector<std::pair<std::string, nn::Tensor*>> expected;
  ckpt.params.visit([&](const std::string& name, nn::Tensor& t) { expected.emplace_back(name, &t); });
  if (tensor_count != expected.size()) {
    throw CheckpointError("checkpoint: header lists " + std::to_string(tensor_count) +
                          " tensors, architecture has " + std::to_string(expected.size()));
  }
  for (auto& [name, tensor] : expected) {
    const std::uint32_t name_len = in.u32();
    const auto name_bytes = in.take(name_len);
    const std::string got(name_bytes.begin(), name_bytes.end());
    if (got != name) {
      throw CheckpointError("checkpoint: expected tensor '" + name + "', found '" + got + "'");
    }
    const std::uint32_t rank = in.u32();
    nn::Shape shape(rank);
    for (auto& d : shape) d = in.u32();
    if (shape != tensor->shape()) {
      throw CheckpointError("checkpoint: tensor '" + name + "' has shape " +
                            nn::shape_string(shape) + ", architecture needs " +
                            nn::shape_string(tensor->shape()));
    }
    for (float& v : tensor->values()) v = std::bit_cast<float>(in.u32());
  }
  if (!in.done()) throw CheckpointError("checkpoint: trailing bytes after last tensor");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return parse_checkpoint(bytes);
  } catch (const CheckpointError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
}

void require_label_space(const Checkpoint& ckpt, std::size_t n_classes) {
  if (ckpt.config().n_classes() != n_classes) {
    throw ConfigError("checkpoint predicts " + std::to_string(ckpt.config().n_classes()) +
                      " classes but the dataset has " + std::to_string(n_classes));
  }
}

}  // namespace wavecls
