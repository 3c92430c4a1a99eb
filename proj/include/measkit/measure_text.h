// Copyright 2026 The measkit Authors.
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

// Measurements in running text: detection, prefix-free rewriting, the
// character-level tokenizer used by the probe model, and scale indices.
//
// Lexical rules (applied left to right, whitespace skipped):
//   "[MASK]"            one token
//   number literal      see numerics.h; one numeric token per character.
//                       Only starts where the previous byte is not a word
//                       character.
//   unit run            directly after a number:  chunk [ "/" digits* chunk ]
//                       with chunk = 1*( A-Z | a-z | "#" | "µ" ); one
//                       non-numeric token, even when it carries digits
//                       ("mg/100ml"). Must end at a word boundary.
//   word                ( letter | "_" | "µ" ) *( letter | digit | "_" | "µ" )
//   anything else       one token per UTF-8 code point

#ifndef MEASKIT_MEASURE_TEXT_H_
#define MEASKIT_MEASURE_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace measkit {

inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr int kDefaultScaleCap = 16;

struct MeasurementSpan {
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  std::string number_text;
  std::string unit_text;

  friend bool operator==(const MeasurementSpan&,
                         const MeasurementSpan&) = default;
};

// Non-overlapping spans, left to right: a number literal immediately
// followed by a unit run that parses as a whole.
std::vector<MeasurementSpan> detect_measurements(std::string_view text);

// Rewrites every detected measurement into prefix-free form, keeping the
// source notation of each number. Other bytes are copied unchanged.
std::string rule_convert_text(std::string_view text);

struct Token {
  std::string text;
  bool numeric = false;
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
};

std::vector<Token> tokenize(std::string_view text);

// Right-to-left scan: a non-numeric token resets to 0, a numeric token gets
// its right neighbour's index + 1 (so each numeric run ends at 1). Values
// above `cap` are clamped to `cap`.
std::vector<int> assign_scale_indices(const std::vector<bool>& numeric_flags,
                                      int cap = kDefaultScaleCap);
std::vector<int> assign_scale_indices(const std::vector<Token>& tokens,
                                      int cap = kDefaultScaleCap);

struct ScaleIndexedText {
  std::vector<std::string> tokens;
  std::vector<bool> numeric_flags;
  std::vector<int> scale_indices;
};

ScaleIndexedText annotate(std::string_view text, int cap = kDefaultScaleCap);

// One line per token: token TAB flag(0/1) TAB scale index.
std::string format_annotation(const ScaleIndexedText& annotated);
ScaleIndexedText parse_annotation(std::string_view dump);

}  // namespace measkit

#endif  // MEASKIT_MEASURE_TEXT_H_
