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

#ifndef WAVECLS_ERROR_HPP_
#define WAVECLS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wavecls {

// Base of every error the library throws. The CLI maps any of these to a
// nonzero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WAVECLS_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

// Malformed WAV container or unsupported encoding.
WAVECLS_DEFINE_ERROR(FormatError);
// Sample rate other than 16 kHz.
WAVECLS_DEFINE_ERROR(RateError);
// Requested channel does not exist in the file.
WAVECLS_DEFINE_ERROR(ChannelError);
// Manifest or CSV content that cannot be parsed.
WAVECLS_DEFINE_ERROR(ParseError);
// Per-artist split impossible (too few tracks).
WAVECLS_DEFINE_ERROR(StratificationError);
// Tensor extents that do not fit the operation.
WAVECLS_DEFINE_ERROR(ShapeError);
// Invalid or mismatched model / training configuration.
WAVECLS_DEFINE_ERROR(ConfigError);
// Bad data handed to training or evaluation (empty sets, labels out of range).
WAVECLS_DEFINE_ERROR(DataError);
// Checkpoint file that is corrupt or truncated.
WAVECLS_DEFINE_ERROR(CheckpointError);
// Filesystem failures.
WAVECLS_DEFINE_ERROR(IoError);
// Command-line misuse.
WAVECLS_DEFINE_ERROR(UsageError);

#undef WAVECLS_DEFINE_ERROR

}  // namespace wavecls

#endif  // WAVECLS_ERROR_HPP_
