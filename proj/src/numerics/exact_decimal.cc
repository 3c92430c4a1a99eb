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
#include <cstdlib>

#include "measkit/error.h"
#include "measkit/numerics.h"

namespace measkit {
namespace {

std::string strip_leading_zeros(std::string_view digits) {
  std::size_t first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return "0";
  return std::string(digits.substr(first));
}

// Compares two non-negative integers given as digit strings without
// leading zeros.
int compare_digit_strings(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string add_digit_strings(const std::string& a, const std::string& b) {
  std::string out;
  out.reserve(std::max(a.size(), b.size()) + 1);
  int carry = 0;
  auto ia = a.rbegin(), ib = b.rbegin();
  while (ia != a.rend() || ib != b.rend() || carry) {
    int s = carry;
    if (ia != a.rend()) s += *ia++ - '0';
    if (ib != b.rend()) s += *ib++ - '0';
    out.push_back(static_cast<char>('0' + s % 10));
    carry = s / 10;
  }
  std::reverse(out.begin(), out.end());
  return strip_leading_zeros(out);
}

// a - b for a >= b.
std::string subtract_digit_strings(const std::string& a, const std::string& b) {
  std::string out;
  out.reserve(a.size());
  int borrow = 0;
  auto ia = a.rbegin(), ib = b.rbegin();
  while (ia != a.rend()) {
    int d = (*ia++ - '0') - borrow;
    if (ib != b.rend()) d -= *ib++ - '0';
    borrow = d < 0 ? 1 : 0;
    if (d < 0) d += 10;
    out.push_back(static_cast<char>('0' + d));
  }
  std::reverse(out.begin(), out.end());
  return strip_leading_zeros(out);
}

// Both operands as digit strings over the smaller exponent.
std::pair<std::string, std::string> aligned(const ExactDecimal& a,
                                            const ExactDecimal& b, int* exp) {
  *exp = std::min(a.exponent(), b.exponent());
  std::string da = a.coefficient();
  std::string db = b.coefficient();
  if (!a.is_zero()) da.append(static_cast<std::size_t>(a.exponent() - *exp), '0');
  if (!b.is_zero()) db.append(static_cast<std::size_t>(b.exponent() - *exp), '0');
  return {da, db};
}

}  // namespace

ExactDecimal::ExactDecimal(std::string_view digits, int exponent)
    : coefficient_(strip_leading_zeros(digits)), exponent_(exponent) {
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::kMalformedNumber,
                "coefficient must be a non-empty digit string");
  }
}

ExactDecimal ExactDecimal::from_integer(std::uint64_t coefficient,
                                        int exponent) {
  return ExactDecimal(std::to_string(coefficient), exponent);
}

ExactDecimal ExactDecimal::scaled(int k) const {
  ExactDecimal out = *this;
  out.exponent_ += k;
  return out;
}

ExactDecimal ExactDecimal::normalized() const {
  if (is_zero()) return ExactDecimal();
  std::size_t last = coefficient_.find_last_not_of('0');
  std::size_t trailing = coefficient_.size() - 1 - last;
  ExactDecimal out;
  out.coefficient_ = coefficient_.substr(0, last + 1);
  out.exponent_ = exponent_ + static_cast<int>(trailing);
  return out;
}

double ExactDecimal::to_double() const {
  std::string s = coefficient_ + "e" + std::to_string(exponent_);
  return std::strtod(s.c_str(), nullptr);
}

std::weak_ordering operator<=>(const ExactDecimal& a, const ExactDecimal& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return std::weak_ordering::equivalent;
    return a.is_zero() ? std::weak_ordering::less : std::weak_ordering::greater;
  }
  if (a.magnitude() != b.magnitude()) {
    return a.magnitude() < b.magnitude() ? std::weak_ordering::less
                                         : std::weak_ordering::greater;
  }
  // Same leading-digit position: compare digit by digit, padding the shorter
  // coefficient with zeros.
  const std::string& da = a.coefficient();
  const std::string& db = b.coefficient();
  const std::size_t n = std::max(da.size(), db.size());
  for (std::size_t i = 0; i < n; ++i) {
    char ca = i < da.size() ? da[i] : '0';
    char cb = i < db.size() ? db[i] : '0';
    if (ca != cb) {
      return ca < cb ? std::weak_ordering::less : std::weak_ordering::greater;
    }
  }
  return std::weak_ordering::equivalent;
}

ExactDecimal operator+(const ExactDecimal& a, const ExactDecimal& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int exp = 0;
  auto [da, db] = aligned(a, b, &exp);
  return ExactDecimal(add_digit_strings(da, db), exp);
}

ExactDecimal operator-(const ExactDecimal& a, const ExactDecimal& b) {
  if (a < b) {
    throw Error(ErrorCode::kMalformedNumber,
                "subtraction would produce a negative value");
  }
  if (b.is_zero()) return a;
  int exp = 0;
  auto [da, db] = aligned(a, b, &exp);
  if (compare_digit_strings(da, db) == 0) return ExactDecimal("0", exp);
  return ExactDecimal(subtract_digit_strings(da, db), exp);
}

bool NumberRange::contains(const ExactDecimal& value) const {
  return value >= low() && value < high();
}

}  // namespace measkit
