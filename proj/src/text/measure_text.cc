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

#include "measkit/measure_text.h"

#include <algorithm>
#include <sstream>

#include "measkit/error.h"
#include "measkit/numerics.h"
#include "measkit/units.h"

namespace measkit {
namespace {

constexpr std::string_view kMicroSign = "\xC2\xB5";

enum class LexKind { kNumber, kUnit, kWord, kMask, kOther };

struct Lexeme {
  LexKind kind;
  std::size_t begin;
  std::size_t end;
};

bool is_ascii_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
bool at_micro(std::string_view text, std::size_t pos) {
  return text.substr(pos, kMicroSign.size()) == kMicroSign;
}

// Byte length of the word character at pos, or 0.
std::size_t word_char_len(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return 0;
  char c = text[pos];
  if (is_ascii_letter(c) || is_ascii_digit(c) || c == '_') return 1;
  if (at_micro(text, pos)) return kMicroSign.size();
  return 0;
}

bool word_char_before(std::string_view text, std::size_t pos) {
  if (pos == 0) return false;
  char c = text[pos - 1];
  if (is_ascii_letter(c) || is_ascii_digit(c) || c == '_') return true;
  return pos >= 2 && at_micro(text, pos - 2);
}

std::size_t scan_unit_chunk(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  while (i < text.size()) {
    if (is_ascii_letter(text[i]) || text[i] == '#') {
      ++i;
    } else if (at_micro(text, i)) {
      i += kMicroSign.size();
    } else {
      break;
    }
  }
  return i;
}

// End of the unit run starting at pos, or pos when there is none.
std::size_t scan_unit_run(std::string_view text, std::size_t pos) {
  std::size_t end = scan_unit_chunk(text, pos);
  if (end == pos) return pos;
  if (end < text.size() && text[end] == '/') {
    std::size_t d = end + 1;
    while (d < text.size() && is_ascii_digit(text[d])) ++d;
    std::size_t den_end = scan_unit_chunk(text, d);
    if (den_end > d) end = den_end;
  }
  if (word_char_len(text, end) > 0) return pos;
  return end;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::vector<Lexeme> lex(std::string_view text) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (text.substr(i, kMaskToken.size()) == kMaskToken) {
      out.push_back({LexKind::kMask, i, i + kMaskToken.size()});
      i += kMaskToken.size();
      continue;
    }
    if (is_ascii_digit(text[i]) && !word_char_before(text, i)) {
      std::size_t n = scan_number(text, i);
      out.push_back({LexKind::kNumber, i, i + n});
      i += n;
      std::size_t unit_end = scan_unit_run(text, i);
      if (unit_end > i) {
        out.push_back({LexKind::kUnit, i, unit_end});
        i = unit_end;
      }
      continue;
    }
    if (std::size_t w = word_char_len(text, i); w > 0) {
      std::size_t end = i + w;
      while (std::size_t more = word_char_len(text, end)) end += more;
      out.push_back({LexKind::kWord, i, end});
      i = end;
      continue;
    }
    std::size_t n = std::min(utf8_length(static_cast<unsigned char>(text[i])),
                             text.size() - i);
    out.push_back({LexKind::kOther, i, i + n});
    i += n;
  }
  return out;
}

}  // namespace

std::vector<MeasurementSpan> detect_measurements(std::string_view text) {
  std::vector<MeasurementSpan> spans;
  std::vector<Lexeme> lexemes = lex(text);
  for (std::size_t i = 0; i + 1 < lexemes.size(); ++i) {
    const Lexeme& num = lexemes[i];
    const Lexeme& unit = lexemes[i + 1];
    if (num.kind != LexKind::kNumber || unit.kind != LexKind::kUnit ||
        unit.begin != num.end) {
      continue;
    }
    std::string_view unit_text = text.substr(unit.begin, unit.end - unit.begin);
    try {
      parse_unit(unit_text);
    } catch (const Error&) {
      continue;  // includes digit-bearing units such as "mg/100ml"
    }
    spans.push_back({num.begin, unit.end,
                     std::string(text.substr(num.begin, num.end - num.begin)),
                     std::string(unit_text)});
    ++i;
  }
  return spans;
}

std::string rule_convert_text(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 16);
  std::size_t cursor = 0;
  for (const MeasurementSpan& span : detect_measurements(text)) {
    out.append(text.substr(cursor, span.byte_start - cursor));
    Measurement m{parse_number(span.number_text), parse_unit(span.unit_text)};
    Notation notation = is_scientific_literal(span.number_text)
                            ? Notation::kScientific
                            : Notation::kDecimal;
    out += render_measurement(canonicalize(m), notation);
    cursor = span.byte_end;
  }
  out.append(text.substr(cursor));
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  for (const Lexeme& lx : lex(text)) {
    if (lx.kind == LexKind::kNumber) {
      for (std::size_t p = lx.begin; p < lx.end; ++p) {
        tokens.push_back({std::string(1, text[p]), true, p, p + 1});
      }
    } else {
      tokens.push_back({std::string(text.substr(lx.begin, lx.end - lx.begin)),
                        false, lx.begin, lx.end});
    }
  }
  return tokens;
}

std::vector<int> assign_scale_indices(const std::vector<bool>& numeric_flags,
                                      int cap) {
  if (cap < 1) throw Error(ErrorCode::kInvalidConfig, "scale cap must be >= 1");
  std::vector<int> indices(numeric_flags.size(), 0);
  int run = 0;
  for (std::size_t i = numeric_flags.size(); i-- > 0;) {
    run = numeric_flags[i] ? run + 1 : 0;
    indices[i] = std::min(run, cap);
  }
  return indices;
}

std::vector<int> assign_scale_indices(const std::vector<Token>& tokens,
                                      int cap) {
  std::vector<bool> flags;
  flags.reserve(tokens.size());
  for (const Token& t : tokens) flags.push_back(t.numeric);
  return assign_scale_indices(flags, cap);
}

ScaleIndexedText annotate(std::string_view text, int cap) {
  ScaleIndexedText out;
  std::vector<Token> tokens = tokenize(text);
  out.scale_indices = assign_scale_indices(tokens, cap);
  for (Token& t : tokens) {
    out.numeric_flags.push_back(t.numeric);
    out.tokens.push_back(std::move(t.text));
  }
  return out;
}

std::string format_annotation(const ScaleIndexedText& annotated) {
  std::string out;
  for (std::size_t i = 0; i < annotated.tokens.size(); ++i) {
    out += annotated.tokens[i];
    out += annotated.numeric_flags[i] ? "\t1\t" : "\t0\t";
    out += std::to_string(annotated.scale_indices[i]);
    out += '\n';
  }
  return out;
}

ScaleIndexedText parse_annotation(std::string_view dump) {
  ScaleIndexedText out;
  std::istringstream in{std::string(dump)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw Error(ErrorCode::kSchemaViolation,
                  "annotation line " + std::to_string(line_no) +
                      ": expected 3 tab-separated fields");
    }
    std::string flag = line.substr(t1 + 1, t2 - t1 - 1);
    if (flag != "0" && flag != "1") {
      throw Error(ErrorCode::kSchemaViolation,
                  "annotation line " + std::to_string(line_no) + ": bad flag");
    }
    out.tokens.push_back(line.substr(0, t1));
    out.numeric_flags.push_back(flag == "1");
    out.scale_indices.push_back(std::stoi(line.substr(t2 + 1)));
  }
  return out;
}

}  // namespace measkit
