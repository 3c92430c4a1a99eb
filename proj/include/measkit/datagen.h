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

// Measuring-skill benchmark generation: task templates and answer
// candidates, the entity table, per-task sample generators, prompt-set
// variants, the gold-label oracle, and split construction.

#ifndef MEASKIT_DATAGEN_H_
#define MEASKIT_DATAGEN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "measkit/numerics.h"
#include "measkit/rng.h"
#include "measkit/units.h"

namespace measkit {

enum class TaskKind { kComparison, kArgMinMax, kSorting, kUnitConversion, kRefRange };
enum class PromptSet { kBase, kLabel, kContext, kUoM };
enum class Split { kTrain, kValidIn, kValidEx, kTestIn, kTestEx };

inline constexpr std::array<TaskKind, 5> kAllTasks = {
    TaskKind::kComparison, TaskKind::kArgMinMax, TaskKind::kSorting,
    TaskKind::kUnitConversion, TaskKind::kRefRange};
inline constexpr std::array<PromptSet, 4> kAllPromptSets = {
    PromptSet::kBase, PromptSet::kLabel, PromptSet::kContext, PromptSet::kUoM};
// Generation order; deduplication runs across splits in this order.
inline constexpr std::array<Split, 5> kAllSplits = {
    Split::kTrain, Split::kValidIn, Split::kValidEx, Split::kTestIn,
    Split::kTestEx};

std::string_view task_name(TaskKind task);  // "comparison", "argminmax", ...
std::string_view prompt_set_name(PromptSet set);  // "base", "label", ...
std::string_view split_name(Split split);  // "train", "valid_in", ...
// Each throws kInvalidConfig on an unknown name.
TaskKind parse_task(std::string_view name);
PromptSet parse_prompt_set(std::string_view name);
Split parse_split(std::string_view name);

bool is_extrapolation(Split split);
NumberRange split_range(Split split);

// ---------------------------------------------------------------------------
// Templates and candidates

// Placeholders are "[M]", "[LoM]" and "[ENT]"; order[j] names the logical
// slot that fills the j-th placeholder. Logical slots per task:
//   comparison, unitconversion   0: first measurement, 1: second
//   argminmax                    0: list, 1: target measurement
//   sorting                      0: source list, 1: result list
//   refrange                     0: measurement, 1: entity
struct PromptTemplate {
  std::string_view text;
  std::vector<int> order;
};

// Index 0 is the base template; all five are used by the context set.
const std::vector<PromptTemplate>& task_templates(TaskKind task);

std::string fill_template(const PromptTemplate& tmpl,
                          const std::vector<std::string>& slots);

// Answer candidates of the base set, in presentation order.
const std::vector<std::string>& base_labels(TaskKind task);
// Label order used in distribution reports.
const std::vector<std::string>& report_label_order(TaskKind task);
// The two synonyms of a base label.
const std::vector<std::string>& label_synonyms(TaskKind task,
                                               std::string_view label);
std::vector<std::string> candidates_for(TaskKind task, PromptSet set);
// Base label whose synonym class contains `word`, if any.
std::optional<std::string> label_class(TaskKind task, std::string_view word);
bool answer_matches(TaskKind task, std::string_view predicted,
                    std::string_view gold);

// ---------------------------------------------------------------------------
// Entity table

struct EntityRecord {
  std::string name;
  std::string unit_text;
  Unit unit;
  ExactDecimal low;   // inclusive, in `unit`
  ExactDecimal high;  // inclusive, in `unit`
};

// CSV with header `entity,unit,low,high`; no quoting, so names may not
// contain commas.
class EntityTable {
 public:
  EntityTable() = default;
  explicit EntityTable(std::vector<EntityRecord> records);

  static const EntityTable& builtin();
  static EntityTable parse(std::string_view csv);
  static EntityTable load(const std::string& path);

  const std::vector<EntityRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  const EntityRecord* find(std::string_view name) const;

 private:
  std::vector<EntityRecord> records_;
};

std::string_view builtin_entity_csv();

// ---------------------------------------------------------------------------
// Samples

struct MeasurementField {
  std::string value;
  std::string unit;

  friend bool operator==(const MeasurementField&,
                         const MeasurementField&) = default;
};

struct EntityField {
  std::string name;
  std::string unit;
  std::string low;
  std::string high;

  friend bool operator==(const EntityField&, const EntityField&) = default;
};

// `measurements` layout per task:
//   comparison, unitconversion   [M1, M2]
//   argminmax                    list..., target
//   sorting                      source list..., result list...
//   refrange                     [M]  (plus `entity`)
struct MstSample {
  std::string id;
  TaskKind task = TaskKind::kComparison;
  PromptSet prompt_set = PromptSet::kBase;
  Notation notation = Notation::kDecimal;
  Split split = Split::kTrain;
  std::string text;
  std::vector<std::string> candidates;
  std::string answer;
  std::vector<MeasurementField> measurements;
  std::optional<EntityField> entity;

  friend bool operator==(const MstSample&, const MstSample&) = default;
};

// A generated instance before rendering.
struct Instance {
  std::string label;
  std::vector<Measurement> measurements;
  std::optional<EntityRecord> entity;
};

struct SampleContext {
  TaskKind task = TaskKind::kComparison;
  PromptSet prompt_set = PromptSet::kBase;
  Notation notation = Notation::kDecimal;
  Split split = Split::kTrain;
  NumberRange range = kInterpolationRange;
  const UnitInventory* inventory = nullptr;
  const EntityTable* entities = nullptr;
  int list_length = 3;
};

// Per-task generators. `label` is the base label to realize; every value
// lies in ctx.range. Throw kGenerationExhausted when the configuration
// cannot produce the label.
Instance generate_comparison(const SampleContext& ctx, std::string_view label, Rng& rng);
Instance generate_argminmax(const SampleContext& ctx, std::string_view label, Rng& rng);
Instance generate_sorting(const SampleContext& ctx, std::string_view label, Rng& rng);
Instance generate_unit_conversion(const SampleContext& ctx, std::string_view label, Rng& rng);
Instance generate_ref_range(const SampleContext& ctx, std::string_view label, Rng& rng);
Instance generate_instance(const SampleContext& ctx, std::string_view label, Rng& rng);

MstSample render_sample(const SampleContext& ctx, const Instance& instance,
                        std::size_t template_index);

// Instance generation, then rendering; the context set draws its template
// from `rng` after the instance.
MstSample generate_sample(const SampleContext& ctx, std::string_view label, Rng& rng);

// Re-targets a sample to another prompt set. The context set redraws the
// template from `rng`; the uom set checks that every unit uses only g, l, m
// and s, and rejects reference-range samples (kIncompatibleSet).
MstSample apply_prompt_set(const MstSample& sample, PromptSet set, Rng& rng);
void check_prompt_set_compatible(TaskKind task, PromptSet set);

// Re-derives the gold base label from `measurements` (and `entity`) with
// exact arithmetic. Throws kSchemaViolation on a malformed layout.
std::string derive_label(const MstSample& sample);

// ---------------------------------------------------------------------------
// Splits

struct SplitPlan {
  Split split = Split::kTrain;
  NumberRange range;
  std::size_t count = 0;
  // Aligned with report_label_order(task).
  std::vector<double> label_fractions;
};

// Reference sample counts and label distributions, scaled by `scale`.
std::vector<SplitPlan> default_split_plans(TaskKind task, double scale = 1.0);

// Per-label sample counts for `count` samples (largest-remainder rounding).
std::vector<std::size_t> label_quotas(const std::vector<double>& fractions,
                                      std::size_t count);

struct GenConfig {
  TaskKind task = TaskKind::kComparison;
  PromptSet prompt_set = PromptSet::kBase;
  Notation notation = Notation::kDecimal;
  std::uint64_t seed = 7;
  double scale = 1.0;
  int list_length = 3;
  std::map<Split, std::size_t> count_overrides;
  UnitInventory inventory = UnitInventory::builtin();
  EntityTable entities = EntityTable::builtin();
  int jobs = 1;
};

struct Dataset {
  GenConfig config;
  std::vector<SplitPlan> plans;
  std::vector<std::vector<MstSample>> splits;  // aligned with plans
};

// Generates every split in kAllSplits order. Texts are unique across the
// whole dataset; a duplicate is regenerated from the next substream of its
// slot, so counts are met exactly. Output depends only on the config, not
// on `jobs`.
Dataset build_splits(const GenConfig& config);

inline constexpr std::string_view kGeneratorVersion = "measkit-datagen/1";
inline constexpr int kSchemaVersion = 1;

}  // namespace measkit

#endif  // MEASKIT_DATAGEN_H_
