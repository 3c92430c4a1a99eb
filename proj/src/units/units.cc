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

#include <array>

#include "measkit/error.h"
#include "measkit/units.h"

namespace measkit {
namespace {

struct PrefixInfo {
  Prefix prefix;
  std::string_view symbol;
  int exponent;
};

// Longest symbol first so that matching can stop at the first hit.
constexpr std::array<PrefixInfo, 7> kPrefixes = {{
    {Prefix::kMicro, "\xC2\xB5", -6},
    {Prefix::kFemto, "f", -15},
    {Prefix::kPico, "p", -12},
    {Prefix::kNano, "n", -9},
    {Prefix::kMilli, "m", -3},
    {Prefix::kCenti, "c", -2},
    {Prefix::kDeci, "d", -1},
}};

struct AtomInfo {
  Atom atom;
  std::string_view symbol;
  bool takes_prefix;
  bool denominator_only;
};

constexpr std::array<AtomInfo, 14> kAtoms = {{
    {Atom::kMeter, "m", true, false},
    {Atom::kAmpere, "A", true, false},
    {Atom::kKelvin, "K", true, false},
    {Atom::kMolar, "M", true, false},
    {Atom::kEquivalent, "Eq", true, false},
    {Atom::kGram, "g", true, false},
    {Atom::kInternationalUnit, "IU", true, false},
    {Atom::kEnzymeUnit, "U", true, false},
    {Atom::kLiter, "l", true, false},
    {Atom::kSecond, "s", true, false},
    {Atom::kHour, "hr", false, true},
    {Atom::kMinute, "min", false, true},
    {Atom::kCount, "#", false, false},
    {Atom::kKiloCount, "k", false, false},
}};

const AtomInfo& atom_info(Atom atom) {
  return kAtoms[static_cast<std::size_t>(atom)];
}

// Exact atom spelling, including the "L" liter alias.
std::optional<UnitTerm> match_atom(std::string_view text) {
  if (text == "L") return UnitTerm{Prefix::kNone, Atom::kLiter, true};
  for (const AtomInfo& a : kAtoms) {
    if (a.symbol == text) return UnitTerm{Prefix::kNone, a.atom, false};
  }
  return std::nullopt;
}

void check_position(const UnitTerm& term, bool in_denominator,
                    std::string_view text) {
  if (atom_info(term.atom).denominator_only && !in_denominator) {
    throw Error(ErrorCode::kMalformedUnit,
                "'" + std::string(text) + "' may only appear in a denominator");
  }
}

UnitTerm parse_term(std::string_view text, bool in_denominator) {
  if (text.empty()) {
    throw Error(ErrorCode::kMalformedUnit, "empty unit term");
  }
  if (auto bare = match_atom(text)) {
    check_position(*bare, in_denominator, text);
    return *bare;
  }
  for (const PrefixInfo& p : kPrefixes) {
    if (!text.starts_with(p.symbol)) continue;
    auto rest = match_atom(text.substr(p.symbol.size()));
    if (!rest) continue;
    if (!atom_info(rest->atom).takes_prefix) {
      throw Error(ErrorCode::kUnknownPrefix,
                  "'" + std::string(atom_symbol(rest->atom)) +
                      "' takes no prefix in '" + std::string(text) + "'");
    }
    check_position(*rest, in_denominator, text);
    rest->prefix = p.prefix;
    return *rest;
  }
  // Diagnose: a known atom at the end means the leading part is the problem.
  for (std::size_t cut = 1; cut < text.size(); ++cut) {
    if (match_atom(text.substr(cut))) {
      throw Error(ErrorCode::kUnknownPrefix,
                  "unknown prefix '" + std::string(text.substr(0, cut)) +
                      "' in '" + std::string(text) + "'");
    }
  }
  throw Error(ErrorCode::kUnknownAtom,
              "unknown unit '" + std::string(text) + "'");
}

std::string render_term(const UnitTerm& term) {
  std::string out(prefix_symbol(term.prefix));
  if (term.atom == Atom::kLiter && term.capital_liter) {
    out += "L";
  } else {
    out += atom_symbol(term.atom);
  }
  return out;
}

}  // namespace

std::string_view prefix_symbol(Prefix prefix) {
  for (const PrefixInfo& p : kPrefixes) {
    if (p.prefix == prefix) return p.symbol;
  }
  return "";
}

int prefix_exponent(Prefix prefix) {
  for (const PrefixInfo& p : kPrefixes) {
    if (p.prefix == prefix) return p.exponent;
  }
  return 0;
}

ExactDecimal prefix_factor(Prefix prefix) {
  return ExactDecimal::from_integer(1, prefix_exponent(prefix));
}

std::string_view atom_symbol(Atom atom) { return atom_info(atom).symbol; }
bool atom_takes_prefix(Atom atom) { return atom_info(atom).takes_prefix; }
bool atom_denominator_only(Atom atom) {
  return atom_info(atom).denominator_only;
}

Dimension Unit::dimension() const {
  Dimension d{numerator.atom, std::nullopt};
  if (denominator) d.denominator = denominator->atom;
  return d;
}

bool Unit::prefix_free() const {
  return numerator.prefix == Prefix::kNone &&
         (!denominator || denominator->prefix == Prefix::kNone);
}

int Unit::scale_exponent() const {
  int e = prefix_exponent(numerator.prefix);
  if (denominator) e -= prefix_exponent(denominator->prefix);
  return e;
}

Unit Unit::without_prefixes() const {
  Unit out = *this;
  out.numerator.prefix = Prefix::kNone;
  if (out.denominator) out.denominator->prefix = Prefix::kNone;
  return out;
}

Unit parse_unit(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kMalformedUnit, "empty unit");
  if (text.find_first_of(" \t\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::kMalformedUnit,
                "whitespace in unit '" + std::string(text) + "'");
  }
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Unit{parse_term(text, false), std::nullopt};
  }
  if (text.find('/', slash + 1) != std::string_view::npos) {
    throw Error(ErrorCode::kMalformedUnit,
                "more than one '/' in '" + std::string(text) + "'");
  }
  return Unit{parse_term(text.substr(0, slash), false),
              parse_term(text.substr(slash + 1), true)};
}

std::string render_unit(const Unit& unit) {
  std::string out = render_term(unit.numerator);
  if (unit.denominator) out += "/" + render_term(*unit.denominator);
  return out;
}

std::string dimension_name(const Dimension& dimension) {
  std::string out(atom_symbol(dimension.numerator));
  if (dimension.denominator) {
    out += "/";
    out += atom_symbol(*dimension.denominator);
  }
  return out;
}

std::string_view ordering_name(Ordering ordering) {
  switch (ordering) {
    case Ordering::kLess: return "Less";
    case Ordering::kEqual: return "Equal";
    case Ordering::kGreater: return "Greater";
  }
  return "?";
}

Measurement canonicalize(const Measurement& m) {
  return Measurement{m.value.scaled(m.unit.scale_exponent()),
                     m.unit.without_prefixes()};
}

namespace {

void require_same_dimension(const Measurement& a, const Measurement& b) {
  if (a.unit.dimension() != b.unit.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                render_unit(a.unit) + " vs " + render_unit(b.unit));
  }
}

}  // namespace

bool quantities_equal(const Measurement& a, const Measurement& b) {
  require_same_dimension(a, b);
  return canonicalize(a).value == canonicalize(b).value;
}

Ordering compare_measurements(const Measurement& a, const Measurement& b) {
  require_same_dimension(a, b);
  auto c = canonicalize(a).value <=> canonicalize(b).value;
  if (c < 0) return Ordering::kLess;
  if (c > 0) return Ordering::kGreater;
  return Ordering::kEqual;
}

std::string render_measurement(const Measurement& m, Notation notation) {
  return render(m.value, notation) + render_unit(m.unit);
}

}  // namespace measkit
