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
#ifndef WAVECLS_CSV_HPP_
#define WAVECLS_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace wavecls::csv {

using Row = std::vector<std::string>;

/// RFC 4180 parsing: quoted fields may hold commas, quotes ("") and
/// newlines. A trailing newline does not produce an empty row; CRLF is
/// accepted.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);
std::string format_row(const Row& row);

}  // namespace wavecls::csv

#endif  // WAVECLS_CSV_HPP_
