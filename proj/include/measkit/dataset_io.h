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

// Dataset files. One sample per line (JSONL, UTF-8):
//
//   {"id": "...", "task": "comparison", "prompt_set": "base",
//    "notation": "decimal", "split": "train", "text": "... [MASK] ...",
//    "candidates": ["larger", "smaller"], "answer": "smaller",
//    "measurements": [{"value": "1.59", "unit": "mg"}, ...]}
//
// Reference-range samples add
//   "entity": {"name": "Glucose", "unit": "mg/dL", "low": "70", "high": "99"}
//
// A dataset directory holds {split}.jsonl for every split and manifest.json.

#ifndef MEASKIT_DATASET_IO_H_
#define MEASKIT_DATASET_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "measkit/datagen.h"

namespace measkit {

std::string sample_to_json(const MstSample& sample);
// Throws kSchemaViolation naming `line_no` when given.
MstSample sample_from_json(std::string_view line, int line_no = 0);

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<MstSample>& samples);
std::vector<MstSample> read_jsonl(const std::filesystem::path& path);

// <root>/<task>/<prompt set>/<notation>
std::filesystem::path dataset_dir(const std::filesystem::path& root,
                                  TaskKind task, PromptSet set,
                                  Notation notation);
std::filesystem::path split_path(const std::filesystem::path& dir, Split split);

std::string manifest_json(const Dataset& dataset);
// Writes every split file and manifest.json into `dir`.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

struct LabelShare {
  std::string label;
  std::size_t count = 0;
  double fraction = 0.0;
};

struct SplitStats {
  std::string name;  // split name, or the file stem when mixed
  std::optional<TaskKind> task;
  std::size_t count = 0;
  std::vector<LabelShare> labels;  // report_label_order; empty when count 0
};

SplitStats split_stats(const std::vector<MstSample>& samples,
                       const std::string& name);
std::vector<SplitStats> dataset_stats(
    const std::vector<std::filesystem::path>& files);
// "<split>  <range>  <count>  smaller: 0.501, larger: 0.499" per line.
std::string format_stats(const std::vector<SplitStats>& stats);

}  // namespace measkit

#endif  // MEASKIT_DATASET_IO_H_
