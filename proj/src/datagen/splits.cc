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
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "measkit/datagen.h"
#include "measkit/error.h"
#include "measkit/parallel.h"

namespace measkit {
namespace {

struct Reference {
  std::array<std::size_t, 5> counts;
  // Per split, aligned with report_label_order.
  std::array<std::vector<double>, 5> fractions;
};

const Reference& reference(TaskKind task) {
  static const std::array<Reference, 5> kReference = {{
      {{299394, 29986, 30000, 29988, 30000},
       {{{0.5, 0.5}, {0.498, 0.502}, {0.495, 0.505}, {0.501, 0.499},
         {0.501, 0.499}}}},
      {{300000, 30000, 30000, 30000, 30000},
       {{{0.333, 0.334, 0.333}, {0.333, 0.334, 0.333}, {0.333, 0.334, 0.333},
         {0.332, 0.335, 0.333}, {0.335, 0.332, 0.333}}}},
      {{300000, 30000, 30000, 30000, 30000},
       {{{0.333, 0.332, 0.335}, {0.333, 0.332, 0.335}, {0.337, 0.332, 0.331},
         {0.337, 0.332, 0.331}, {0.328, 0.339, 0.333}}}},
      {{259588, 23931, 28814, 23538, 28696},
       {{{0.489, 0.511}, {0.489, 0.511}, {0.5, 0.5}, {0.483, 0.517},
         {0.498, 0.502}}}},
      {{201061, 17111, 21212, 16948, 18429},
       {{{0.575, 0.425}, {0.593, 0.407}, {0.618, 0.382}, {0.586, 0.414},
         {0.659, 0.341}}}},
  }};
  return kReference[static_cast<std::size_t>(task)];
}

// Salt for the label-order stream, distinct from any sample index.
constexpr std::uint64_t kLabelStream = ~std::uint64_t{0};
constexpr int kMaxDuplicateRetries = 1000;

}  // namespace

std::vector<SplitPlan> default_split_plans(TaskKind task, double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "scale must be positive");
  }
  const Reference& ref = reference(task);
  std::vector<SplitPlan> plans;
  for (Split split : kAllSplits) {
    const auto i = static_cast<std::size_t>(split);
    plans.push_back({split, split_range(split),
                     static_cast<std::size_t>(
                         std::llround(static_cast<double>(ref.counts[i]) * scale)),
                     ref.fractions[i]});
  }
  return plans;
}

std::vector<std::size_t> label_quotas(const std::vector<double>& fractions,
                                      std::size_t count) {
  const double total = std::accumulate(fractions.begin(), fractions.end(), 0.0);
  if (fractions.empty() || !(total > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "label fractions must be positive");
  }
  std::vector<std::size_t> quotas(fractions.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] / total * static_cast<double>(count);
    quotas[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += quotas[i];
    remainders.push_back({exact - std::floor(exact), i});
  }
  // Largest remainder first; ties go to the earlier label.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < count; ++k, ++assigned) {
    ++quotas[remainders[k % remainders.size()].second];
  }
  return quotas;
}

Dataset build_splits(const GenConfig& config) {
  check_prompt_set_compatible(config.task, config.prompt_set);
  if (config.task == TaskKind::kRefRange && config.entities.empty()) {
    throw Error(ErrorCode::kEmptyEntityTable, "entity table is empty");
  }
  Dataset dataset;
  dataset.config = config;
  dataset.plans = default_split_plans(config.task, config.scale);
  for (SplitPlan& plan : dataset.plans) {
    auto it = config.count_overrides.find(plan.split);
    if (it != config.count_overrides.end()) plan.count = it->second;
  }

  UnitInventory inventory = config.inventory;
  if (config.prompt_set == PromptSet::kUoM) {
    inventory = inventory.restricted_to(common_atoms());
    if (inventory.empty()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "inventory has no family built from g, l, m, s");
    }
  }

  const std::uint64_t task_id = static_cast<std::uint64_t>(config.task);
  const std::uint64_t set_id = static_cast<std::uint64_t>(config.prompt_set);
  const std::uint64_t notation_id = static_cast<std::uint64_t>(config.notation);

  std::unordered_set<std::string> seen;
  for (const SplitPlan& plan : dataset.plans) {
    const std::uint64_t split_id = static_cast<std::uint64_t>(plan.split);
    SampleContext ctx;
    ctx.task = config.task;
    ctx.prompt_set = config.prompt_set;
    ctx.notation = config.notation;
    ctx.split = plan.split;
    ctx.range = plan.range;
    ctx.inventory = &inventory;
    ctx.entities = &config.entities;
    ctx.list_length = config.list_length;

    const auto& order = report_label_order(config.task);
    std::vector<std::size_t> quotas = label_quotas(plan.label_fractions, plan.count);
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < order.size(); ++k) {
      labels.insert(labels.end(), quotas[k], order[k]);
    }
    Rng label_rng(config.seed, {task_id, set_id, notation_id, split_id, kLabelStream});
    label_rng.shuffle(labels);

    auto make = [&](std::size_t slot, std::uint64_t attempt) {
      Rng rng(config.seed,
              {task_id, set_id, notation_id, split_id, slot, attempt});
      return generate_sample(ctx, labels[slot], rng);
    };

    std::vector<MstSample> samples(plan.count);
    parallel_for(plan.count, config.jobs,
                 [&](std::size_t i) { samples[i] = make(i, 0); });
    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::uint64_t attempt = 0;
      while (!seen.insert(samples[i].text).second) {
        if (++attempt > kMaxDuplicateRetries) {
          throw Error(ErrorCode::kGenerationExhausted,
                      fmt::format("{} {}: no unique text for slot {} after {} "
                                  "tries",
                                  task_name(config.task), split_name(plan.split),
                                  i, kMaxDuplicateRetries));
        }
        samples[i] = make(i, attempt);
      }
      samples[i].id = fmt::format("{}-{}-{}-{}-{:06d}", task_name(config.task),
                                  prompt_set_name(config.prompt_set),
                                  notation_name(config.notation),
                                  split_name(plan.split), i);
    }
    dataset.splits.push_back(std::move(samples));
  }
  return dataset;
}

}  // namespace measkit
