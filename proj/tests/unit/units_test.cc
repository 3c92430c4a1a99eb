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

#include <functional>
#include <string>

#include "gtest/gtest.h"
#include "measkit/error.h"
#include "measkit/units.h"
#include "support/rational_oracle.h"

namespace measkit {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kIo;
}

Measurement meas(const char* number, const char* unit) {
  return Measurement{parse_number(number), parse_unit(unit)};
}

TEST(ParseUnitTest, Ratio) {
  Unit u = parse_unit("mg/dl");
  EXPECT_EQ(u.numerator.prefix, Prefix::kMilli);
  EXPECT_EQ(u.numerator.atom, Atom::kGram);
  ASSERT_TRUE(u.denominator.has_value());
  EXPECT_EQ(u.denominator->prefix, Prefix::kDeci);
  EXPECT_EQ(u.denominator->atom, Atom::kLiter);
}

TEST(ParseUnitTest, BareAtom) {
  Unit u = parse_unit("g");
  EXPECT_EQ(u.numerator.prefix, Prefix::kNone);
  EXPECT_EQ(u.numerator.atom, Atom::kGram);
  EXPECT_FALSE(u.denominator.has_value());
  EXPECT_TRUE(u.prefix_free());
}

TEST(ParseUnitTest, MicroDenominator) {
  Unit u = parse_unit("mEq/\xC2\xB5l");
  EXPECT_EQ(u.numerator.prefix, Prefix::kMilli);
  EXPECT_EQ(u.numerator.atom, Atom::kEquivalent);
  EXPECT_EQ(u.denominator->prefix, Prefix::kMicro);
  EXPECT_EQ(u.denominator->atom, Atom::kLiter);
}

TEST(ParseUnitTest, CaseSensitivity) {
  EXPECT_EQ(parse_unit("m").numerator.atom, Atom::kMeter);
  EXPECT_EQ(parse_unit("M").numerator.atom, Atom::kMolar);
  EXPECT_EQ(parse_unit("mM").numerator.prefix, Prefix::kMilli);
  EXPECT_EQ(parse_unit("mm").numerator.atom, Atom::kMeter);
  EXPECT_EQ(parse_unit("K").numerator.atom, Atom::kKelvin);
  EXPECT_EQ(parse_unit("dL").denominator, std::nullopt);
  EXPECT_EQ(parse_unit("dL").dimension(), parse_unit("dl").dimension());
  EXPECT_EQ(render_unit(parse_unit("mg/dL")), "mg/dL");
}

TEST(ParseUnitTest, CountAtomsAreNotPrefixes) {
  Unit k = parse_unit("k/\xC2\xB5l");
  EXPECT_EQ(k.numerator.atom, Atom::kKiloCount);
  EXPECT_EQ(k.numerator.prefix, Prefix::kNone);
  EXPECT_NE(k.dimension(), parse_unit("#/\xC2\xB5l").dimension());
  EXPECT_EQ(code_of([] { parse_unit("mk"); }), ErrorCode::kUnknownPrefix);
  EXPECT_EQ(code_of([] { parse_unit("k#"); }), ErrorCode::kUnknownPrefix);
}

TEST(ParseUnitTest, Errors) {
  EXPECT_EQ(code_of([] { parse_unit("xyz"); }), ErrorCode::kUnknownAtom);
  EXPECT_EQ(code_of([] { parse_unit("qg"); }), ErrorCode::kUnknownPrefix);
  EXPECT_EQ(code_of([] { parse_unit("g/l/s"); }), ErrorCode::kMalformedUnit);
  EXPECT_EQ(code_of([] { parse_unit("g /l"); }), ErrorCode::kMalformedUnit);
  EXPECT_EQ(code_of([] { parse_unit(""); }), ErrorCode::kMalformedUnit);
  EXPECT_EQ(code_of([] { parse_unit("g/"); }), ErrorCode::kMalformedUnit);
  EXPECT_EQ(code_of([] { parse_unit("hr"); }), ErrorCode::kMalformedUnit);
  EXPECT_EQ(code_of([] { parse_unit("l/mhr"); }), ErrorCode::kUnknownPrefix);
}

TEST(PrefixFactorTest, SiValues) {
  EXPECT_TRUE(prefix_factor(Prefix::kMilli).identical(ExactDecimal("1", -3)));
  EXPECT_TRUE(prefix_factor(Prefix::kNone).identical(ExactDecimal("1", 0)));
  EXPECT_TRUE(prefix_factor(Prefix::kMicro).identical(ExactDecimal("1", -6)));
  EXPECT_EQ(prefix_exponent(Prefix::kFemto), -15);
  EXPECT_EQ(prefix_exponent(Prefix::kPico), -12);
  EXPECT_EQ(prefix_exponent(Prefix::kNano), -9);
  EXPECT_EQ(prefix_exponent(Prefix::kCenti), -2);
  EXPECT_EQ(prefix_exponent(Prefix::kDeci), -1);
}

TEST(CanonicalizeTest, Examples) {
  EXPECT_EQ(render_measurement(canonicalize(meas("2.5", "mg")), Notation::kDecimal),
            "0.0025g");
  EXPECT_EQ(render_measurement(canonicalize(meas("3.8", "g")), Notation::kDecimal),
            "3.8g");
  Measurement glucose = canonicalize(meas("85", "mg/dl"));
  EXPECT_EQ(render_measurement(glucose, Notation::kDecimal), "0.85g/l");
  oracle::Quantity q = oracle::quantity("85", "mg/dl");
  EXPECT_EQ(oracle::parse_literal(render(glucose.value, Notation::kDecimal)),
            q.value);
}

TEST(QuantitiesEqualTest, Examples) {
  EXPECT_TRUE(quantities_equal(meas("3.5", "g"), meas("3500", "mg")));
  EXPECT_TRUE(quantities_equal(meas("1", "g"), meas("1", "g")));
  EXPECT_FALSE(quantities_equal(meas("1.59", "mg"), meas("3.8", "g")));
  EXPECT_EQ(code_of([] { quantities_equal(meas("1", "g"), meas("1", "l")); }),
            ErrorCode::kDimensionMismatch);
}

TEST(CompareMeasurementsTest, Examples) {
  EXPECT_EQ(compare_measurements(meas("1.59", "mg"), meas("3.8", "g")),
            Ordering::kLess);
  EXPECT_EQ(compare_measurements(meas("2", "g"), meas("2", "g")),
            Ordering::kEqual);
  EXPECT_EQ(compare_measurements(meas("3.4", "g"), meas("2.8", "mg")),
            Ordering::kGreater);
  oracle::Quantity a = oracle::quantity("3.4", "g");
  oracle::Quantity b = oracle::quantity("2.8", "mg");
  EXPECT_GT(a.value, b.value);
}

TEST(RenderMeasurementTest, Examples) {
  EXPECT_EQ(render_measurement(meas("1.59", "mg"), Notation::kDecimal), "1.59mg");
  EXPECT_EQ(render_measurement(meas("32.6", "g"), Notation::kScientific),
            "3.26E+01g");
  EXPECT_EQ(render_measurement(meas("0", "g"), Notation::kDecimal), "0g");
}

std::vector<Unit> all_inventory_units() {
  std::vector<Unit> out;
  for (const UnitFamily& f : UnitInventory::builtin().families()) {
    out.push_back(parse_unit(f.head));
    for (const Unit& v : f.variants) out.push_back(v);
  }
  return out;
}

TEST(InventoryTest, RoundTripsEveryUnit) {
  for (const Unit& u : all_inventory_units()) {
    EXPECT_EQ(parse_unit(render_unit(u)), u) << render_unit(u);
  }
}

TEST(InventoryTest, BuiltinShape) {
  const UnitInventory& inv = UnitInventory::builtin();
  EXPECT_EQ(inv.families().size(), 16u);
  EXPECT_EQ(UnitInventory::parse(inv.to_text()).to_text(), inv.to_text());
}

TEST(InventoryTest, RestrictedToCommonAtoms) {
  auto common_atom = [](Atom a) {
    return a == Atom::kGram || a == Atom::kLiter || a == Atom::kMeter ||
           a == Atom::kSecond;
  };
  UnitInventory common = UnitInventory::builtin().restricted_to(common_atoms());
  std::vector<std::string> heads;
  for (const UnitFamily& f : common.families()) {
    heads.push_back(f.head);
    for (const Unit& v : f.variants) {
      EXPECT_TRUE(common_atom(v.numerator.atom));
      if (v.denominator) {
        EXPECT_TRUE(common_atom(v.denominator->atom));
      }
    }
  }
  EXPECT_EQ(heads, (std::vector<std::string>{"m", "g/l", "l", "g", "s"}));
}

TEST(InventoryTest, Malformed) {
  EXPECT_EQ(code_of([] { UnitInventory::parse("g: mg, ml\n"); }),
            ErrorCode::kMalformedInventory);
  EXPECT_EQ(code_of([] { UnitInventory::parse("mg: mg\n"); }),
            ErrorCode::kMalformedInventory);
  EXPECT_EQ(code_of([] { UnitInventory::parse("g mg\n"); }),
            ErrorCode::kMalformedInventory);
  EXPECT_EQ(code_of([] { UnitInventory::parse("g:\n"); }),
            ErrorCode::kMalformedInventory);
}

// Random measurement over the inventory for property checks.
Measurement random_measurement(Rng& rng, const UnitFamily& family) {
  ExactDecimal v = sample_number(kExtrapolationRange, rng);
  return Measurement{v, rng.pick(family.variants)};
}

TEST(UnitsProperty, CanonicalizeIdempotentAndQuantityPreserving) {
  Rng rng(5);
  const auto& families = UnitInventory::builtin().families();
  for (int i = 0; i < 20000; ++i) {
    Measurement m = random_measurement(rng, rng.pick(families));
    Measurement c = canonicalize(m);
    Measurement cc = canonicalize(c);
    ASSERT_TRUE(cc.value.identical(c.value));
    ASSERT_EQ(cc.unit, c.unit);
    ASSERT_TRUE(c.unit.prefix_free());
    ASSERT_TRUE(quantities_equal(m, c));
    oracle::Quantity q = oracle::quantity(render(m.value, Notation::kDecimal),
                                          render_unit(m.unit));
    ASSERT_EQ(oracle::parse_literal(render(c.value, Notation::kScientific)),
              q.value);
  }
}

TEST(UnitsProperty, EquivalenceOnRandomTriples) {
  Rng rng(6);
  const auto& families = UnitInventory::builtin().families();
  int equal_pairs = 0;
  for (int i = 0; i < 20000; ++i) {
    const UnitFamily& f = rng.pick(families);
    Measurement a = random_measurement(rng, f);
    // Re-express a under other prefixes so that equal triples actually occur.
    auto rescale = [&](const Measurement& m) {
      const Unit& u = rng.pick(f.variants);
      int shift = m.unit.scale_exponent() - u.scale_exponent();
      return Measurement{m.value.scaled(shift), u};
    };
    Measurement b = rng.bernoulli(0.5) ? rescale(a) : random_measurement(rng, f);
    Measurement c = rng.bernoulli(0.5) ? rescale(b) : random_measurement(rng, f);
    ASSERT_TRUE(quantities_equal(a, a));
    ASSERT_EQ(quantities_equal(a, b), quantities_equal(b, a));
    if (quantities_equal(a, b) && quantities_equal(b, c)) {
      ASSERT_TRUE(quantities_equal(a, c));
      ++equal_pairs;
    }
    Ordering ab = compare_measurements(a, b);
    Ordering ba = compare_measurements(b, a);
    ASSERT_EQ(ab == Ordering::kLess, ba == Ordering::kGreater);
    ASSERT_EQ(ab == Ordering::kEqual, quantities_equal(a, b));
    oracle::Quantity qa = oracle::quantity(render(a.value, Notation::kDecimal),
                                           render_unit(a.unit));
    oracle::Quantity qb = oracle::quantity(render(b.value, Notation::kDecimal),
                                           render_unit(b.unit));
    ASSERT_EQ(ab == Ordering::kLess, qa.value < qb.value);
  }
  EXPECT_GT(equal_pairs, 1000);
}

}  // namespace
}  // namespace measkit
