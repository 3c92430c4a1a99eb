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

#include "measkit/datagen.h"
#include "measkit/error.h"

namespace measkit {
namespace {

constexpr std::array<std::string_view, 5> kTaskNames = {
    "comparison", "argminmax", "sorting", "unitconversion", "refrange"};
constexpr std::array<std::string_view, 4> kPromptSetNames = {
    "base", "label", "context", "uom"};
constexpr std::array<std::string_view, 5> kSplitNames = {
    "train", "valid_in", "valid_ex", "test_in", "test_ex"};

template <typename Enum, std::size_t N>
Enum parse_name(const std::array<std::string_view, N>& names,
                std::string_view name, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  throw Error(ErrorCode::kInvalidConfig,
              std::string("unknown ") + what + " '" + std::string(name) + "'");
}

struct LabelEntry {
  std::string label;
  std::vector<std::string> synonyms;
};

struct TaskText {
  std::vector<PromptTemplate> templates;
  std::vector<LabelEntry> labels;  // base candidate order
  std::vector<std::string> report_order;
};

const TaskText& task_text(TaskKind task) {
  static const std::array<TaskText, 5> kText = {{
      {{{"[M] is [MASK] than [M]", {0, 1}},
        {"compared to [M], [M] is [MASK] value", {1, 0}},
        {"the measurement of control group ([M]) is [MASK] than [M]", {0, 1}},
        {"comparison: [M], [M], result: [MASK]", {0, 1}},
        {"[M] [MASK] [M]", {0, 1}}},
       {{"larger", {"higher", "bigger"}}, {"smaller", {"lower", "less"}}},
       {"smaller", "larger"}},
      {{{"[MASK] value among [LoM] is [M]", {0, 1}},
        {"[M] is the [MASK] value of [LoM]", {1, 0}},
        {"Among the list of measurements [LoM], the [MASK] value is [M]", {0, 1}},
        {"argmin,argmax: [LoM], [M], result: [MASK]", {0, 1}},
        {"[MASK] [LoM] , [M]", {0, 1}}},
       {{"largest", {"biggest", "maximum"}},
        {"smallest", {"lowest", "minimum"}},
        {"middle", {"medium", "intermediate"}}},
       {"smallest", "middle", "largest"}},
      {{{"sort [LoM] in [MASK] order is [LoM]", {0, 1}},
        {"arranging [LoM] in [MASK] order is [LoM]", {0, 1}},
        {"[LoM] is obtained by sorting [LoM] in [MASK] order", {1, 0}},
        {"sort: [LoM], [LoM], result: [MASK]", {0, 1}},
        {"[LoM] [MASK] [LoM]", {0, 1}}},
       {{"increasing", {"growing", "ascending"}},
        {"decreasing", {"reducing", "descending"}},
        {"random", {"unclear", "confusing"}}},
       {"decreasing", "random", "increasing"}},
      {{{"[M] and [M] are [MASK] value", {0, 1}},
        {"convert [M] to [MASK] value, then the result is [M]", {0, 1}},
        {"compare [M] to [M], the two are the [MASK] value", {0, 1}},
        {"measurement comparison: [M], [M], result: [MASK]", {0, 1}},
        {"[M] , [M] [MASK]", {0, 1}}},
       {{"same", {"equal", "identical"}}, {"different", {"distinct", "unlike"}}},
       {"same", "different"}},
      {{{"[M] of [ENT] is [MASK]", {0, 1}},
        {"[M] of [ENT] falls into [MASK] range", {0, 1}},
        {"The physician decides [M] of [ENT] as [MASK]", {0, 1}},
        {"reference range: [ENT], [M], result: [MASK]", {1, 0}},
        {"[ENT] [M] [MASK]", {1, 0}}},
       {{"normal", {"regular", "safe"}}, {"abnormal", {"irregular", "lethal"}}},
       {"normal", "abnormal"}},
  }};
  return kText[static_cast<std::size_t>(task)];
}

}  // namespace

std::string_view task_name(TaskKind task) {
  return kTaskNames[static_cast<std::size_t>(task)];
}
std::string_view prompt_set_name(PromptSet set) {
  return kPromptSetNames[static_cast<std::size_t>(set)];
}
std::string_view split_name(Split split) {
  return kSplitNames[static_cast<std::size_t>(split)];
}
TaskKind parse_task(std::string_view name) {
  return parse_name<TaskKind>(kTaskNames, name, "task");
}
PromptSet parse_prompt_set(std::string_view name) {
  return parse_name<PromptSet>(kPromptSetNames, name, "prompt set");
}
Split parse_split(std::string_view name) {
  return parse_name<Split>(kSplitNames, name, "split");
}

bool is_extrapolation(Split split) {
  return split == Split::kValidEx || split == Split::kTestEx;
}

NumberRange split_range(Split split) {
  return is_extrapolation(split) ? kExtrapolationRange : kInterpolationRange;
}

const std::vector<PromptTemplate>& task_templates(TaskKind task) {
  return task_text(task).templates;
}

std::string fill_template(const PromptTemplate& tmpl,
                          const std::vector<std::string>& slots) {
  static constexpr std::array<std::string_view, 3> kPlaceholders = {
      "[M]", "[LoM]", "[ENT]"};
  std::string out;
  std::string_view text = tmpl.text;
  std::size_t next_slot = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    bool matched = false;
    for (std::string_view p : kPlaceholders) {
      if (text.substr(i, p.size()) != p) continue;
      if (next_slot >= tmpl.order.size()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "template has more placeholders than slots: " +
                        std::string(text));
      }
      out += slots.at(static_cast<std::size_t>(tmpl.order[next_slot++]));
      i += p.size();
      matched = true;
      break;
    }
    if (!matched) out += text[i++];
  }
  return out;
}

const std::vector<std::string>& base_labels(TaskKind task) {
  static const auto kLabels = [] {
    std::array<std::vector<std::string>, 5> out;
    for (TaskKind t : kAllTasks) {
      for (const LabelEntry& e : task_text(t).labels) {
        out[static_cast<std::size_t>(t)].push_back(e.label);
      }
    }
    return out;
  }();
  return kLabels[static_cast<std::size_t>(task)];
}

const std::vector<std::string>& report_label_order(TaskKind task) {
  return task_text(task).report_order;
}

const std::vector<std::string>& label_synonyms(TaskKind task,
                                               std::string_view label) {
  for (const LabelEntry& e : task_text(task).labels) {
    if (e.label == label) return e.synonyms;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "unknown label '" + std::string(label) + "' for task " +
                  std::string(task_name(task)));
}

std::vector<std::string> candidates_for(TaskKind task, PromptSet set) {
  std::vector<std::string> out;
  for (const LabelEntry& e : task_text(task).labels) {
    out.push_back(e.label);
    if (set == PromptSet::kLabel) {
      out.insert(out.end(), e.synonyms.begin(), e.synonyms.end());
    }
  }
  return out;
}

std::optional<std::string> label_class(TaskKind task, std::string_view word) {
  for (const LabelEntry& e : task_text(task).labels) {
    if (e.label == word ||
        std::find(e.synonyms.begin(), e.synonyms.end(), word) !=
            e.synonyms.end()) {
      return e.label;
    }
  }
  return std::nullopt;
}

bool answer_matches(TaskKind task, std::string_view predicted,
                    std::string_view gold) {
  std::optional<std::string> p = label_class(task, predicted);
  std::optional<std::string> g = label_class(task, gold);
  return p && g && *p == *g;
}

}  // namespace measkit
