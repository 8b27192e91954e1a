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

#include <gtest/gtest.h>

#include "wavecls/csv.hpp"
#include "wavecls/error.hpp"

namespace wavecls::csv {
namespace {

TEST(Csv, PlainRows) {
  const auto rows = parse("a,b,c\n1,2,3\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], (Row{"1", "2", "3"}));
}

TEST(Csv, QuotedFields) {
  const auto rows = parse("\"x,y\",\"say \"\"hi\"\"\",\"two\nlines\"\r\nz,,\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (Row{"x,y", "say \"hi\"", "two\nlines"}));
  EXPECT_EQ(rows[1], (Row{"z", "", ""}));
}

TEST(Csv, MissingTrailingNewline) {
  EXPECT_EQ(parse("a,b"), (std::vector<Row>{{"a", "b"}}));
}

TEST(Csv, UnterminatedQuoteThrows) { EXPECT_THROW(parse("\"abc\n"), ParseError); }

TEST(Csv, EscapeRoundTrip) {
  const Row row = {"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  EXPECT_EQ(escape("plain"), "plain");
  EXPECT_EQ(escape("a,b"), "\"a,b\"");
  const auto back = parse(format_row(row));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], row);
}

}  // namespace
}  // namespace wavecls::csv
