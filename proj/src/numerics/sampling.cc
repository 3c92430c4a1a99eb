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

#include <algorithm>
#include <array>

#include "measkit/error.h"
#include "measkit/numerics.h"

namespace measkit {
namespace {

// Extra mantissa resolution below the target grid, used to emulate a
// continuous uniform mantissa before half-up rounding.
constexpr int kSubGridDigits = 9;
constexpr int kMaxU64Digits = 18;

std::uint64_t pow10_u64(int n) {
  std::uint64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

}  // namespace

DecadeChoice feasible_decades(const NumberRange& range, int fraction_digits) {
  // A value with f fractional digits and leading digit at 10^d exists iff
  // d >= -f.
  return {std::max(range.low_exponent, -fraction_digits),
          range.high_exponent - 1};
}

ExactDecimal sample_number(const NumberRange& range, Rng& rng) {
  if (range.low_exponent >= range.high_exponent) {
    throw Error(ErrorCode::kInvalidConfig, "empty number range");
  }
  std::array<int, kMaxFractionDigits + 1> usable{};
  int n_usable = 0;
  for (int f = 0; f <= kMaxFractionDigits; ++f) {
    DecadeChoice c = feasible_decades(range, f);
    if (c.last >= c.first) usable[static_cast<std::size_t>(n_usable++)] = f;
  }
  if (n_usable == 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "number range holds no value with at most 3 fractional digits");
  }
  const int f = usable[rng.uniform(static_cast<std::uint64_t>(n_usable))];
  const DecadeChoice choice = feasible_decades(range, f);
  const int d = static_cast<int>(rng.uniform_int(choice.first, choice.last));

  // Integer grid: value = k * 10^-f with k in [10^(d+f), 10^(d+f+1)).
  const int grid_digits = d + f + 1;
  if (grid_digits > kMaxU64Digits) {
    throw Error(ErrorCode::kInvalidConfig, "number range too wide to sample");
  }
  const int sub = std::min(kSubGridDigits, kMaxU64Digits - grid_digits);
  const std::uint64_t lo = pow10_u64(grid_digits - 1 + sub);
  const std::uint64_t hi = pow10_u64(grid_digits + sub);
  const std::uint64_t unit = pow10_u64(sub);
  const std::uint64_t top = pow10_u64(grid_digits);
  for (;;) {
    const std::uint64_t fine = lo + rng.uniform(hi - lo);
    const std::uint64_t k = sub > 0 ? (fine + unit / 2) / unit : fine;
    if (k < top) return ExactDecimal::from_integer(k, -f);
  }
}

}  // namespace measkit
