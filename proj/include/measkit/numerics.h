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

// Exact decimal numbers and their two surface notations.
//
// Number grammar (shared by parse_number and the text lexer):
//
//   number    = digits , [ "." , digits ] , [ exponent ] ;
//   exponent  = ( "E" | "e" ) , ( "+" | "-" ) , digits ;
//   digits    = digit , { digit } ;
//   digit     = "0" | "1" | "2" | "3" | "4" | "5" | "6" | "7" | "8" | "9" ;
//
// A "." or an exponent marker that is not followed by the rest of its
// production is not part of the literal ("3.8." is the literal "3.8";
// "5Eq" is the literal "5").

#ifndef MEASKIT_NUMERICS_H_
#define MEASKIT_NUMERICS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "measkit/rng.h"

namespace measkit {

enum class Notation { kDecimal, kScientific };

std::string_view notation_name(Notation notation);
Notation parse_notation(std::string_view name);

// Non-negative value coefficient * 10^exponent with an arbitrary-precision
// coefficient kept as a decimal digit string. Trailing zeros of the
// coefficient are significant: 3.50 and 3.5 are value-equal but not
// identical, and render differently.
class ExactDecimal {
 public:
  ExactDecimal() = default;  // zero

  // `digits` may carry leading zeros; they are stripped.
  ExactDecimal(std::string_view digits, int exponent);
  static ExactDecimal from_integer(std::uint64_t coefficient, int exponent = 0);

  const std::string& coefficient() const { return coefficient_; }
  int exponent() const { return exponent_; }
  int sig_digits() const { return static_cast<int>(coefficient_.size()); }
  bool is_zero() const { return coefficient_ == "0"; }

  // floor(log10(value)); undefined for zero.
  int magnitude() const {
    return static_cast<int>(coefficient_.size()) - 1 + exponent_;
  }

  // Exact multiplication by 10^k; keeps the significant digits.
  ExactDecimal scaled(int k) const;

  // Trailing zeros moved into the exponent; zero becomes 0E0.
  ExactDecimal normalized() const;

  // Field-for-field identity (coefficient digits and exponent).
  bool identical(const ExactDecimal& other) const {
    return coefficient_ == other.coefficient_ && exponent_ == other.exponent_;
  }

  double to_double() const;

  friend std::weak_ordering operator<=>(const ExactDecimal& a,
                                        const ExactDecimal& b);
  friend bool operator==(const ExactDecimal& a, const ExactDecimal& b) {
    return (a <=> b) == 0;
  }

 private:
  std::string coefficient_ = "0";
  int exponent_ = 0;
};

ExactDecimal operator+(const ExactDecimal& a, const ExactDecimal& b);
// Requires a >= b; throws kMalformedNumber otherwise (values are
// non-negative by construction).
ExactDecimal operator-(const ExactDecimal& a, const ExactDecimal& b);

// Half-open decade interval [10^low_exponent, 10^high_exponent).
struct NumberRange {
  int low_exponent = -2;
  int high_exponent = 2;

  bool contains(const ExactDecimal& value) const;
  ExactDecimal low() const { return ExactDecimal::from_integer(1, low_exponent); }
  ExactDecimal high() const { return ExactDecimal::from_integer(1, high_exponent); }
};

inline constexpr NumberRange kInterpolationRange{-2, 2};
inline constexpr NumberRange kExtrapolationRange{-3, 3};

// Length of the longest number literal starting at `pos`, or 0.
std::size_t scan_number(std::string_view text, std::size_t pos = 0);

ExactDecimal parse_number(std::string_view text);
std::string render(const ExactDecimal& value, Notation notation);
std::string convert_notation(std::string_view text, Notation target);
bool is_scientific_literal(std::string_view text);

// Fractional-digit counts drawn by the sampler.
inline constexpr int kMaxFractionDigits = 3;

// Draws a number from `range` whose decimal rendering has 0-3 fractional
// digits (count drawn uniformly first). The decade is then drawn uniformly
// among the decades of `range` that can hold a value with that many
// fractional digits, and the mantissa uniformly from [1, 10) rounded
// half-up to that grid; a mantissa that rounds up to 10 is redrawn.
ExactDecimal sample_number(const NumberRange& range, Rng& rng);

// The decades sample_number can pick for a given fractional-digit count.
struct DecadeChoice {
  int first = 0;
  int last = -1;  // inclusive; empty when last < first
};
DecadeChoice feasible_decades(const NumberRange& range, int fraction_digits);

}  // namespace measkit

#endif  // MEASKIT_NUMERICS_H_
