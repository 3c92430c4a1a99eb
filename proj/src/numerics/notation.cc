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

#include <cstdlib>

#include "measkit/error.h"
#include "measkit/numerics.h"

namespace measkit {
namespace {

constexpr int kMaxRenderedExponent = 99;
constexpr std::size_t kMaxExponentDigits = 9;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t scan_digits(std::string_view text, std::size_t pos) {
  std::size_t end = pos;
  while (end < text.size() && is_digit(text[end])) ++end;
  return end - pos;
}

}  // namespace

std::string_view notation_name(Notation notation) {
  return notation == Notation::kDecimal ? "decimal" : "scientific";
}

Notation parse_notation(std::string_view name) {
  if (name == "decimal") return Notation::kDecimal;
  if (name == "scientific") return Notation::kScientific;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown notation '" + std::string(name) + "'");
}

std::size_t scan_number(std::string_view text, std::size_t pos) {
  std::size_t i = pos;
  std::size_t n = scan_digits(text, i);
  if (n == 0) return 0;
  i += n;
  if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
    i += 1 + scan_digits(text, i + 1);
  }
  if (i + 2 < text.size() && (text[i] == 'E' || text[i] == 'e') &&
      (text[i + 1] == '+' || text[i + 1] == '-') && is_digit(text[i + 2])) {
    i += 2 + scan_digits(text, i + 2);
  }
  return i - pos;
}

bool is_scientific_literal(std::string_view text) {
  return text.find_first_of("Ee") != std::string_view::npos;
}

ExactDecimal parse_number(std::string_view text) {
  if (text.empty() || scan_number(text, 0) != text.size()) {
    throw Error(ErrorCode::kMalformedNumber,
                "not a number literal: '" + std::string(text) + "'");
  }
  std::size_t int_len = scan_digits(text, 0);
  std::string digits(text.substr(0, int_len));
  std::size_t i = int_len;
  int fraction_len = 0;
  if (i < text.size() && text[i] == '.') {
    std::size_t f = scan_digits(text, i + 1);
    digits.append(text.substr(i + 1, f));
    fraction_len = static_cast<int>(f);
    i += 1 + f;
  }
  int exponent = 0;
  if (i < text.size()) {  // exponent part, validated by scan_number
    bool negative = text[i + 1] == '-';
    std::string_view exp_digits = text.substr(i + 2);
    if (exp_digits.size() > kMaxExponentDigits) {
      throw Error(ErrorCode::kMalformedNumber,
                  "exponent out of range: '" + std::string(text) + "'");
    }
    exponent = std::atoi(std::string(exp_digits).c_str());
    if (negative) exponent = -exponent;
  }
  ExactDecimal value(digits, exponent - fraction_len);
  if (value.is_zero() && value.exponent() > 0) return ExactDecimal();
  return value;
}

std::string render(const ExactDecimal& value, Notation notation) {
  const std::string& digits = value.coefficient();
  const int exponent = value.exponent();
  if (notation == Notation::kDecimal) {
    if (exponent >= 0) {
      if (value.is_zero()) return "0";
      return digits + std::string(static_cast<std::size_t>(exponent), '0');
    }
    const std::size_t frac = static_cast<std::size_t>(-exponent);
    if (digits.size() > frac) {
      return digits.substr(0, digits.size() - frac) + "." +
             digits.substr(digits.size() - frac);
    }
    return "0." + std::string(frac - digits.size(), '0') + digits;
  }

  std::string mantissa;
  int sci_exponent = 0;
  if (value.is_zero()) {
    mantissa = "0";
    if (exponent < 0) {
      mantissa += "." + std::string(static_cast<std::size_t>(-exponent), '0');
    }
  } else {
    mantissa = digits.substr(0, 1);
    if (digits.size() > 1) mantissa += "." + digits.substr(1);
    sci_exponent = value.magnitude();
  }
  if (sci_exponent > kMaxRenderedExponent ||
      sci_exponent < -kMaxRenderedExponent) {
    throw Error(ErrorCode::kExponentOverflow,
                "exponent " + std::to_string(sci_exponent) +
                    " does not fit two digits");
  }
  const int magnitude = sci_exponent < 0 ? -sci_exponent : sci_exponent;
  std::string out = mantissa + "E";
  out += sci_exponent < 0 ? '-' : '+';
  if (magnitude < 10) out += '0';
  out += std::to_string(magnitude);
  return out;
}

std::string convert_notation(std::string_view text, Notation target) {
  return render(parse_number(text), target);
}

}  // namespace measkit
