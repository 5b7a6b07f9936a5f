// asreval/strings.h

// Copyright 2026  asreval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Small tokenizing and number helpers shared by the file readers.

#ifndef ASREVAL_STRINGS_H_
#define ASREVAL_STRINGS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asreval {

/// Splits on any run of ASCII whitespace; leading/trailing runs ignored.
std::vector<std::string_view> SplitWhitespace(std::string_view line);

/// Splits on a single delimiter character, keeping empty fields.
std::vector<std::string_view> SplitOn(std::string_view text, char delim);

std::string Join(std::span<const std::string> words, std::string_view sep = " ");

/// Full-field parse; rejects trailing garbage, "nan" and infinities.
std::optional<double> ParseDouble(std::string_view field);
std::optional<std::int64_t> ParseInt(std::string_view field);

/// Shortest decimal form that reads back to the same double.
std::string FormatDouble(double value);

/// Fixed-point with `digits` decimals ("%.*f").
std::string FormatFixed(double value, int digits);

bool IsAsciiSpace(char c);

}  // namespace asreval

#endif  // ASREVAL_STRINGS_H_
