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

// Units of measure over a small fixed inventory: a prefixed numerator atom
// and an optional prefixed denominator atom ("mg/dl", "mEq/µl", "K").
//
// Symbols are case-sensitive ("m" milli or meter, "M" molar, "K" kelvin),
// except that liter is written "l" or "L". "#" (count) and "k" (thousand
// count) are atoms, never prefixes; "hr" and "min" only occur unprefixed in
// a denominator.

#ifndef MEASKIT_UNITS_H_
#define MEASKIT_UNITS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "measkit/numerics.h"

namespace measkit {

enum class Prefix : std::uint8_t {
  kNone,
  kDeci,
  kCenti,
  kMilli,
  kMicro,
  kNano,
  kPico,
  kFemto,
};

std::string_view prefix_symbol(Prefix prefix);  // "µ" is U+00B5
int prefix_exponent(Prefix prefix);
ExactDecimal prefix_factor(Prefix prefix);

enum class Atom : std::uint8_t {
  kMeter,
  kAmpere,
  kKelvin,
  kMolar,
  kEquivalent,
  kGram,
  kInternationalUnit,
  kEnzymeUnit,
  kLiter,
  kSecond,
  kHour,
  kMinute,
  kCount,
  kKiloCount,
};

std::string_view atom_symbol(Atom atom);
bool atom_takes_prefix(Atom atom);
bool atom_denominator_only(Atom atom);

struct UnitTerm {
  Prefix prefix = Prefix::kNone;
  Atom atom = Atom::kGram;
  // Spelling only: liter written "L". Ignored by dimension and quantity
  // comparisons, kept so that rewriting text preserves the author's case.
  bool capital_liter = false;

  friend bool operator==(const UnitTerm&, const UnitTerm&) = default;
};

struct Dimension {
  Atom numerator = Atom::kGram;
  std::optional<Atom> denominator;

  friend bool operator==(const Dimension&, const Dimension&) = default;
  friend auto operator<=>(const Dimension&, const Dimension&) = default;
};

struct Unit {
  UnitTerm numerator;
  std::optional<UnitTerm> denominator;

  Dimension dimension() const;
  bool prefix_free() const;
  // 10^(numerator prefix exponent - denominator prefix exponent).
  int scale_exponent() const;
  Unit without_prefixes() const;

  friend bool operator==(const Unit&, const Unit&) = default;
};

Unit parse_unit(std::string_view text);
std::string render_unit(const Unit& unit);
// Dimension rendered with lowercase liter, e.g. "g/l".
std::string dimension_name(const Dimension& dimension);

struct Measurement {
  ExactDecimal value;
  Unit unit;
};

enum class Ordering { kLess, kEqual, kGreater };

std::string_view ordering_name(Ordering ordering);

Measurement canonicalize(const Measurement& m);
// Both throw kDimensionMismatch when the unit atoms differ.
bool quantities_equal(const Measurement& a, const Measurement& b);
Ordering compare_measurements(const Measurement& a, const Measurement& b);

std::string render_measurement(const Measurement& m, Notation notation);

// One row of the unit inventory: the prefix-free head and the prefixed
// variants that may be generated for it.
struct UnitFamily {
  std::string head;
  std::vector<Unit> variants;

  Dimension dimension() const { return parse_unit(head).dimension(); }
};

// Plain-text inventory, one family per line:
//
//   <head>: <variant>, <variant>, ...
//
// Blank lines and lines starting with ';' are ignored. Every variant must
// share the head's dimension.
class UnitInventory {
 public:
  UnitInventory() = default;
  explicit UnitInventory(std::vector<UnitFamily> families);

  static const UnitInventory& builtin();
  static UnitInventory parse(std::string_view text);
  static UnitInventory load(const std::string& path);

  const std::vector<UnitFamily>& families() const { return families_; }
  bool empty() const { return families_.empty(); }

  // Families whose atoms all lie in `atoms`.
  UnitInventory restricted_to(std::span<const Atom> atoms) const;

  std::string to_text() const;

 private:
  std::vector<UnitFamily> families_;
};

// The built-in inventory in the text format above.
std::string_view builtin_inventory_text();

// Base atoms of the restricted ("common units") prompt set.
std::span<const Atom> common_atoms();

}  // namespace measkit

#endif  // MEASKIT_UNITS_H_
