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
#include <numeric>

#include "measkit/datagen.h"
#include "measkit/error.h"

namespace measkit {
namespace {

constexpr int kMaxAttempts = 10000;

[[noreturn]] void exhausted(const SampleContext& ctx, std::string_view label) {
  throw Error(ErrorCode::kGenerationExhausted,
              "cannot realize label '" + std::string(label) + "' for " +
                  std::string(task_name(ctx.task)) + " in split " +
                  std::string(split_name(ctx.split)));
}

void require_label(TaskKind task, std::string_view label) {
  const auto& labels = base_labels(task);
  if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
    throw Error(ErrorCode::kInvalidConfig,
                "'" + std::string(label) + "' is not a base label of " +
                    std::string(task_name(task)));
  }
}

const UnitInventory& inventory_of(const SampleContext& ctx) {
  if (ctx.inventory == nullptr || ctx.inventory->empty()) {
    throw Error(ErrorCode::kInvalidConfig, "empty unit inventory");
  }
  return *ctx.inventory;
}

Measurement draw_measurement(const SampleContext& ctx, const UnitFamily& family,
                             Rng& rng) {
  ExactDecimal value = sample_number(ctx.range, rng);
  return Measurement{value, rng.pick(family.variants)};
}

// n measurements of one family with pairwise distinct quantities.
std::vector<Measurement> draw_distinct(const SampleContext& ctx, int n,
                                       Rng& rng) {
  const UnitFamily& family = rng.pick(inventory_of(ctx).families());
  std::vector<Measurement> out;
  for (int attempt = 0; attempt < kMaxAttempts && std::ssize(out) < n;
       ++attempt) {
    Measurement m = draw_measurement(ctx, family, rng);
    bool tie = std::any_of(out.begin(), out.end(), [&](const Measurement& o) {
      return quantities_equal(o, m);
    });
    if (!tie) out.push_back(std::move(m));
  }
  if (std::ssize(out) < n) exhausted(ctx, "distinct list");
  return out;
}

// Indices of `ms` in ascending quantity order.
std::vector<std::size_t> ascending_order(const std::vector<Measurement>& ms) {
  std::vector<std::size_t> idx(ms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return compare_measurements(ms[a], ms[b]) == Ordering::kLess;
  });
  return idx;
}

void check_list_length(int n) {
  if (n < 3 || n > 5) {
    throw Error(ErrorCode::kInvalidConfig, "list length must be in 3..5");
  }
}

// floor(v * 10^f) and whether v * 10^f is an integer.
std::pair<std::uint64_t, bool> floor_scaled(const ExactDecimal& v, int f) {
  ExactDecimal s = v.scaled(f);
  const std::string& d = s.coefficient();
  const int e = s.exponent();
  std::string whole;
  bool exact = true;
  if (e >= 0) {
    whole = d + std::string(static_cast<std::size_t>(e), '0');
  } else {
    const std::size_t drop = static_cast<std::size_t>(-e);
    whole = d.size() > drop ? d.substr(0, d.size() - drop) : "0";
    std::string dropped = d.size() > drop ? d.substr(d.size() - drop) : d;
    exact = dropped.find_first_not_of('0') == std::string::npos;
  }
  if (whole.size() > 18) {
    throw Error(ErrorCode::kInvalidConfig, "reference bound too large");
  }
  return {std::stoull(whole), exact};
}

struct Grid {
  int fraction_digits;
  std::uint64_t first;
  std::uint64_t last;  // inclusive
};

// Values k * 10^-f inside [low, high] and inside `range`.
std::optional<Grid> normal_grid(const EntityRecord& e, const NumberRange& range,
                                int f) {
  ExactDecimal lo = std::max(e.low, range.low());
  auto [lo_floor, lo_exact] = floor_scaled(lo, f);
  std::uint64_t first = lo_exact ? lo_floor : lo_floor + 1;
  auto [hi_floor, hi_exact] = floor_scaled(e.high, f);
  std::uint64_t last = hi_floor;
  // Values must stay below 10^high_exponent.
  auto [top, top_exact] = floor_scaled(range.high(), f);
  (void)top_exact;
  if (top == 0) return std::nullopt;
  last = std::min(last, top - 1);
  if (first == 0) first = 1;
  if (last < first) return std::nullopt;
  return Grid{f, first, last};
}

}  // namespace

Instance generate_comparison(const SampleContext& ctx, std::string_view label,
                             Rng& rng) {
  require_label(TaskKind::kComparison, label);
  const UnitFamily& family = rng.pick(inventory_of(ctx).families());
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Measurement a = draw_measurement(ctx, family, rng);
    Measurement b = draw_measurement(ctx, family, rng);
    Ordering o = compare_measurements(a, b);
    if (o == Ordering::kEqual) continue;
    const bool want_smaller = label == "smaller";
    if ((o == Ordering::kLess) != want_smaller) std::swap(a, b);
    return Instance{std::string(label), {a, b}, std::nullopt};
  }
  exhausted(ctx, label);
}

Instance generate_argminmax(const SampleContext& ctx, std::string_view label,
                            Rng& rng) {
  require_label(TaskKind::kArgMinMax, label);
  check_list_length(ctx.list_length);
  std::vector<Measurement> list = draw_distinct(ctx, ctx.list_length, rng);
  std::vector<std::size_t> order = ascending_order(list);
  std::size_t target;
  if (label == "smallest") {
    target = order.front();
  } else if (label == "largest") {
    target = order.back();
  } else {
    target = order[1 + rng.uniform(order.size() - 2)];
  }
  Instance out{std::string(label), list, std::nullopt};
  out.measurements.push_back(list[target]);
  return out;
}

Instance generate_sorting(const SampleContext& ctx, std::string_view label,
                          Rng& rng) {
  require_label(TaskKind::kSorting, label);
  check_list_length(ctx.list_length);
  std::vector<Measurement> source = draw_distinct(ctx, ctx.list_length, rng);
  std::vector<std::size_t> asc = ascending_order(source);
  std::vector<std::size_t> perm;
  if (label == "increasing") {
    perm = asc;
  } else if (label == "decreasing") {
    perm.assign(asc.rbegin(), asc.rend());
  } else {
    std::vector<std::size_t> desc(asc.rbegin(), asc.rend());
    perm.resize(source.size());
    do {
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
    } while (perm == asc || perm == desc);
  }
  Instance out{std::string(label), source, std::nullopt};
  for (std::size_t i : perm) out.measurements.push_back(source[i]);
  return out;
}

Instance generate_unit_conversion(const SampleContext& ctx,
                                  std::string_view label, Rng& rng) {
  require_label(TaskKind::kUnitConversion, label);
  const bool same = label == "same";
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const UnitFamily& family = rng.pick(inventory_of(ctx).families());
    if (family.variants.size() < 2) continue;
    Measurement first = draw_measurement(ctx, family, rng);
    std::vector<const Unit*> targets;
    for (const Unit& u : family.variants) {
      if (u == first.unit) continue;
      int shift = first.unit.scale_exponent() - u.scale_exponent();
      if (ctx.range.contains(first.value.scaled(shift))) targets.push_back(&u);
    }
    if (targets.empty()) continue;
    const Unit& to = *rng.pick(targets);
    const int shift = first.unit.scale_exponent() - to.scale_exponent();
    // The different pair re-expresses another value the same way, so both
    // labels share the digit patterns of a genuine conversion.
    ExactDecimal source = first.value;
    if (!same) {
      source = sample_number(ctx.range, rng);
      if (source == first.value) continue;
    }
    ExactDecimal converted = source.scaled(shift);
    if (!ctx.range.contains(converted)) continue;
    Measurement second{converted, to};
    if (quantities_equal(first, second) != same) continue;
    return Instance{std::string(label), {first, second}, std::nullopt};
  }
  exhausted(ctx, label);
}

Instance generate_ref_range(const SampleContext& ctx, std::string_view label,
                            Rng& rng) {
  require_label(TaskKind::kRefRange, label);
  if (ctx.entities == nullptr || ctx.entities->empty()) {
    throw Error(ErrorCode::kEmptyEntityTable, "entity table is empty");
  }
  const bool normal = label == "normal";
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const EntityRecord& e = rng.pick(ctx.entities->records());
    if (normal) {
      std::vector<Grid> grids;
      for (int f = 0; f <= kMaxFractionDigits; ++f) {
        if (auto g = normal_grid(e, ctx.range, f)) grids.push_back(*g);
      }
      if (grids.empty()) continue;
      const Grid& g = rng.pick(grids);
      std::uint64_t k = g.first + rng.uniform(g.last - g.first + 1);
      ExactDecimal v = ExactDecimal::from_integer(k, -g.fraction_digits);
      return Instance{std::string(label), {Measurement{v, e.unit}}, e};
    }
    ExactDecimal v = sample_number(ctx.range, rng);
    // Guard band: one unit in the last place of v on both sides.
    ExactDecimal ulp = ExactDecimal::from_integer(1, v.exponent());
    if (v + ulp >= e.low && v <= e.high + ulp) continue;
    return Instance{std::string(label), {Measurement{v, e.unit}}, e};
  }
  exhausted(ctx, label);
}

Instance generate_instance(const SampleContext& ctx, std::string_view label,
                           Rng& rng) {
  switch (ctx.task) {
    case TaskKind::kComparison: return generate_comparison(ctx, label, rng);
    case TaskKind::kArgMinMax: return generate_argminmax(ctx, label, rng);
    case TaskKind::kSorting: return generate_sorting(ctx, label, rng);
    case TaskKind::kUnitConversion:
      return generate_unit_conversion(ctx, label, rng);
    case TaskKind::kRefRange: return generate_ref_range(ctx, label, rng);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown task");
}

namespace {

std::string join_list(const std::vector<MeasurementField>& ms,
                      std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ", ";
    out += ms[i].value + ms[i].unit;
  }
  return out;
}

std::vector<std::string> template_slots(const MstSample& s) {
  const auto& ms = s.measurements;
  auto need = [&](bool ok) {
    if (!ok) {
      throw Error(ErrorCode::kSchemaViolation,
                  "sample " + s.id + ": measurement layout does not fit task " +
                      std::string(task_name(s.task)));
    }
  };
  switch (s.task) {
    case TaskKind::kComparison:
    case TaskKind::kUnitConversion:
      need(ms.size() == 2);
      return {join_list(ms, 0, 1), join_list(ms, 1, 2)};
    case TaskKind::kArgMinMax:
      need(ms.size() >= 4);
      return {join_list(ms, 0, ms.size() - 1),
              join_list(ms, ms.size() - 1, ms.size())};
    case TaskKind::kSorting:
      need(ms.size() >= 6 && ms.size() % 2 == 0);
      return {join_list(ms, 0, ms.size() / 2),
              join_list(ms, ms.size() / 2, ms.size())};
    case TaskKind::kRefRange:
      need(ms.size() == 1 && s.entity.has_value());
      return {join_list(ms, 0, 1), s.entity->name};
  }
  need(false);
  return {};
}

void set_text(MstSample& s, std::size_t template_index) {
  const auto& templates = task_templates(s.task);
  s.text = fill_template(templates.at(template_index), template_slots(s));
}

bool uses_common_units_only(const MstSample& s) {
  auto common = common_atoms();
  auto ok = [&](Atom a) {
    return std::find(common.begin(), common.end(), a) != common.end();
  };
  for (const MeasurementField& m : s.measurements) {
    Unit u = parse_unit(m.unit);
    if (!ok(u.numerator.atom)) return false;
    if (u.denominator && !ok(u.denominator->atom)) return false;
  }
  return true;
}

}  // namespace

MstSample render_sample(const SampleContext& ctx, const Instance& instance,
                        std::size_t template_index) {
  MstSample s;
  s.task = ctx.task;
  s.prompt_set = ctx.prompt_set;
  s.notation = ctx.notation;
  s.split = ctx.split;
  for (const Measurement& m : instance.measurements) {
    s.measurements.push_back({render(m.value, ctx.notation), render_unit(m.unit)});
  }
  if (instance.entity) {
    const EntityRecord& e = *instance.entity;
    // Bounds keep their source spelling; they are reference data, not part
    // of the prompt.
    s.entity = EntityField{e.name, e.unit_text, render(e.low, Notation::kDecimal),
                           render(e.high, Notation::kDecimal)};
  }
  s.candidates = candidates_for(ctx.task, ctx.prompt_set);
  s.answer = instance.label;
  set_text(s, template_index);
  return s;
}

void check_prompt_set_compatible(TaskKind task, PromptSet set) {
  if (task == TaskKind::kRefRange && set == PromptSet::kUoM) {
    throw Error(ErrorCode::kIncompatibleSet,
                "the uom prompt set does not apply to refrange");
  }
}

MstSample generate_sample(const SampleContext& ctx, std::string_view label,
                          Rng& rng) {
  check_prompt_set_compatible(ctx.task, ctx.prompt_set);
  Instance instance = generate_instance(ctx, label, rng);
  std::size_t tmpl = 0;
  if (ctx.prompt_set == PromptSet::kContext) {
    tmpl = static_cast<std::size_t>(rng.uniform(task_templates(ctx.task).size()));
  }
  return render_sample(ctx, instance, tmpl);
}

MstSample apply_prompt_set(const MstSample& sample, PromptSet set, Rng& rng) {
  check_prompt_set_compatible(sample.task, set);
  MstSample out = sample;
  out.prompt_set = set;
  out.candidates = candidates_for(sample.task, set);
  if (std::optional<std::string> base = label_class(sample.task, sample.answer)) {
    out.answer = *base;
  }
  switch (set) {
    case PromptSet::kBase:
      set_text(out, 0);
      break;
    case PromptSet::kLabel:
      break;
    case PromptSet::kContext:
      set_text(out, static_cast<std::size_t>(
                        rng.uniform(task_templates(sample.task).size())));
      break;
    case PromptSet::kUoM:
      if (!uses_common_units_only(sample)) {
        throw Error(ErrorCode::kIncompatibleSet,
                    "sample " + sample.id + " uses units outside g, l, m, s");
      }
      break;
  }
  return out;
}

}  // namespace measkit
