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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "measkit/error.h"
#include "measkit/measure_text.h"
#include "measkit/rng.h"
#include "measkit/units.h"
#include "support/rational_oracle.h"

namespace measkit {
namespace {

std::vector<std::string> texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<bool> flags(const std::vector<Token>& tokens) {
  std::vector<bool> out;
  for (const Token& t : tokens) out.push_back(t.numeric);
  return out;
}

TEST(DetectTest, TwoSpans) {
  auto spans = detect_measurements("1.59mg is smaller than 3.8g");
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].number_text, "1.59");
  EXPECT_EQ(spans[0].unit_text, "mg");
  EXPECT_EQ(spans[1].number_text, "3.8");
  EXPECT_EQ(spans[1].unit_text, "g");
}

TEST(DetectTest, NoDigits) {
  EXPECT_TRUE(detect_measurements("sort increasing order").empty());
}

TEST(DetectTest, RatioWithCapitalLiter) {
  auto spans = detect_measurements("85mg/dL of Glucose");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].number_text, "85");
  EXPECT_EQ(spans[0].unit_text, "mg/dL");
  EXPECT_EQ(spans[0].byte_start, 0u);
  EXPECT_EQ(spans[0].byte_end, 7u);
}

TEST(DetectTest, ScientificAndLists) {
  auto spans = detect_measurements("[3.4E-01mg, 2.8E+00g, 5\xC2\xB5g]");
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0].number_text, "3.4E-01");
  EXPECT_EQ(spans[1].unit_text, "g");
  EXPECT_EQ(spans[2].unit_text, "\xC2\xB5g");
}

TEST(DetectTest, RejectsNonUnitsAndSpacedUnits) {
  EXPECT_TRUE(detect_measurements("3 g").empty());
  EXPECT_TRUE(detect_measurements("3rd place").empty());
  EXPECT_TRUE(detect_measurements("a3g").empty());
  EXPECT_TRUE(detect_measurements("3gx").empty());
  EXPECT_TRUE(detect_measurements("5mg/100ml").empty());
}

TEST(DetectTest, SpansReconstructText) {
  const std::string text = "Compared to 3500mg, 3.5g is [MASK] (85mg/dL).";
  std::string rebuilt;
  std::size_t cursor = 0;
  for (const MeasurementSpan& s : detect_measurements(text)) {
    ASSERT_GE(s.byte_start, cursor);
    rebuilt += text.substr(cursor, s.byte_start - cursor);
    ASSERT_EQ(text.substr(s.byte_start, s.byte_end - s.byte_start),
              s.number_text + s.unit_text);
    rebuilt += s.number_text + s.unit_text;
    cursor = s.byte_end;
  }
  rebuilt += text.substr(cursor);
  EXPECT_EQ(rebuilt, text);
}

TEST(RuleConvertTest, Examples) {
  EXPECT_EQ(rule_convert_text("2.5mg is [MASK] than 3.8g"),
            "0.0025g is [MASK] than 3.8g");
  EXPECT_EQ(rule_convert_text("3.8g and 3.8g"), "3.8g and 3.8g");
  EXPECT_EQ(rule_convert_text("85mg/dL of Glucose is [MASK]"),
            "0.85g/L of Glucose is [MASK]");
  EXPECT_EQ(rule_convert_text("2.5E+00mg"), "2.5E-03g");
  EXPECT_EQ(rule_convert_text("5mg/100ml stays"), "5mg/100ml stays");
}

TEST(RuleConvertTest, GlucoseMatchesOracle) {
  oracle::Quantity q = oracle::quantity("85", "mg/dL");
  EXPECT_EQ(q.value, oracle::parse_literal("0.85"));
}

TEST(RuleConvertProperty, IdempotentAndQuantityPreserving) {
  Rng rng(13);
  const auto& families = UnitInventory::builtin().families();
  for (int i = 0; i < 5000; ++i) {
    std::string text = "x";
    std::vector<oracle::Quantity> originals;
    int n = 1 + static_cast<int>(rng.uniform(3));
    Notation notation = rng.bernoulli(0.5) ? Notation::kDecimal
                                           : Notation::kScientific;
    for (int k = 0; k < n; ++k) {
      const UnitFamily& f = rng.pick(families);
      Measurement m{sample_number(kExtrapolationRange, rng),
                    rng.pick(f.variants)};
      std::string number = render(m.value, notation);
      originals.push_back(oracle::quantity(number, render_unit(m.unit)));
      text += " " + number + render_unit(m.unit) + ",";
    }
    std::string once = rule_convert_text(text);
    ASSERT_EQ(rule_convert_text(once), once);
    auto spans = detect_measurements(once);
    ASSERT_EQ(spans.size(), originals.size()) << once;
    for (std::size_t k = 0; k < spans.size(); ++k) {
      ASSERT_TRUE(parse_unit(spans[k].unit_text).prefix_free());
      ASSERT_EQ(is_scientific_literal(spans[k].number_text),
                notation == Notation::kScientific);
      oracle::Quantity q =
          oracle::quantity(spans[k].number_text, spans[k].unit_text);
      ASSERT_EQ(q.value, originals[k].value) << text << " -> " << once;
      ASSERT_EQ(q.base, originals[k].base);
    }
  }
}

TEST(TokenizeTest, Examples) {
  auto t = tokenize("3.8g");
  EXPECT_EQ(texts(t), (std::vector<std::string>{"3", ".", "8", "g"}));
  EXPECT_EQ(flags(t), (std::vector<bool>{true, true, true, false}));
  t = tokenize("same");
  EXPECT_EQ(texts(t), (std::vector<std::string>{"same"}));
  EXPECT_EQ(flags(t), (std::vector<bool>{false}));
  t = tokenize("3500mg");
  EXPECT_EQ(texts(t), (std::vector<std::string>{"3", "5", "0", "0", "mg"}));
  EXPECT_EQ(flags(t), (std::vector<bool>{true, true, true, true, false}));
}

TEST(TokenizeTest, MaskListsAndScientific) {
  auto t = tokenize("[MASK] value among [1.2E-01g, 3mg] is 3mg.");
  EXPECT_EQ(texts(t),
            (std::vector<std::string>{"[MASK]", "value", "among", "[", "1",
                                      ".", "2", "E", "-", "0", "1", "g", ",",
                                      "3", "mg", "]", "is", "3", "mg", "."}));
}

TEST(TokenizeTest, DigitBearingUnitIsOneToken) {
  auto t = tokenize("5mg/100ml");
  EXPECT_EQ(texts(t), (std::vector<std::string>{"5", "mg/100ml"}));
  EXPECT_EQ(assign_scale_indices(t), (std::vector<int>{1, 0}));
}

TEST(ScaleIndexTest, Examples) {
  EXPECT_EQ(assign_scale_indices(tokenize("3500mg")),
            (std::vector<int>{4, 3, 2, 1, 0}));
  EXPECT_EQ(assign_scale_indices(tokenize("sort in increasing order")),
            (std::vector<int>{0, 0, 0, 0}));
  EXPECT_EQ(assign_scale_indices(tokenize("1.59mg is")),
            (std::vector<int>{4, 3, 2, 1, 0, 0}));
}

TEST(ScaleIndexTest, CapClamps) {
  std::vector<bool> f(20, true);
  std::vector<int> idx = assign_scale_indices(f, 16);
  EXPECT_EQ(idx.front(), 16);
  EXPECT_EQ(idx[4], 16);
  EXPECT_EQ(idx[5], 15);
  EXPECT_EQ(idx.back(), 1);
}

TEST(ScaleIndexProperty, RunStructure) {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    std::vector<bool> f(1 + rng.uniform(40));
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = rng.bernoulli(0.6);
    std::vector<int> idx = assign_scale_indices(f, 1000);
    int longest = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      ASSERT_EQ(idx[k] == 0, !f[k]);
      if (f[k] && (k + 1 == f.size() || !f[k + 1])) {
        ASSERT_EQ(idx[k], 1);
      }
      if (f[k] && k + 1 < f.size() && f[k + 1]) {
        ASSERT_EQ(idx[k], idx[k + 1] + 1);
      }
      longest = std::max(longest, idx[k]);
    }
    int run = 0, best = 0;
    for (bool b : f) {
      run = b ? run + 1 : 0;
      best = std::max(best, run);
    }
    ASSERT_EQ(longest, best);
  }
}

TEST(ScaleIndexProperty, DependsOnlyOnFlags) {
  std::vector<Token> a = tokenize("12.5g is [MASK] than 3g");
  std::vector<Token> b = a;
  for (Token& t : b) t.text = "z" + t.text;
  std::swap(b[0].text, b[5].text);
  EXPECT_EQ(assign_scale_indices(a), assign_scale_indices(b));
}

TEST(AnnotationTest, RoundTrip) {
  ScaleIndexedText a = annotate("1.59mg is [MASK] than 3.8g");
  std::string dump = format_annotation(a);
  EXPECT_EQ(dump.substr(0, 6), "1\t1\t4\n");
  ScaleIndexedText b = parse_annotation(dump);
  EXPECT_EQ(a.tokens, b.tokens);
  EXPECT_EQ(a.numeric_flags, b.numeric_flags);
  EXPECT_EQ(a.scale_indices, b.scale_indices);
}

TEST(AnnotationTest, Malformed) {
  EXPECT_THROW(parse_annotation("abc\n"), Error);
  EXPECT_THROW(parse_annotation("abc\t2\t0\n"), Error);
}

}  // namespace
}  // namespace measkit
