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

// Accuracy reports shared by every probing backend.
//
// CSV columns, in order:
//   model,task,prompt_set,notation,scale_embedding,split,seed,correct,total,
//   accuracy,fingerprint
// scale_embedding is "on" or "off"; accuracy is correct/total with six
// decimals. One row per (run, split).

#ifndef MEASKIT_EVAL_REPORT_H_
#define MEASKIT_EVAL_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace measkit {

struct EvalRow {
  std::string model;
  std::string task;
  std::string prompt_set;
  std::string notation;
  bool scale_embedding = false;
  std::string split;
  std::uint64_t seed = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::string fingerprint;

  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  }
  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

inline constexpr std::string_view kReportHeader =
    "model,task,prompt_set,notation,scale_embedding,split,seed,correct,total,"
    "accuracy,fingerprint";

std::string report_to_csv(const EvalReport& report);
// Throws kSchemaViolation on a bad header or row.
EvalReport report_from_csv(std::string_view csv);
void write_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report(const std::filesystem::path& path);

// All rows sharing model, task, prompt set, notation, scale flag and split.
struct AggregateRow {
  std::string model;
  std::string task;
  std::string prompt_set;
  std::string notation;
  bool scale_embedding = false;
  std::string split;
  std::vector<std::uint64_t> seeds;
  std::vector<double> per_seed;  // aligned with seeds
  double mean = 0.0;             // arithmetic mean of per_seed
  std::size_t correct = 0;
  std::size_t total = 0;
};

// Groups in first-appearance order.
std::vector<AggregateRow> aggregate(const EvalReport& report);

// One line per (model, scale flag, prompt set, notation); columns Comp, Arg,
// Sort, Unit and Ref, each split into test_in and test_ex. Mean accuracy in
// percent; "N/A" where no row exists. A per-seed listing follows.
std::string format_report_table(const EvalReport& report);

}  // namespace measkit

#endif  // MEASKIT_EVAL_REPORT_H_
