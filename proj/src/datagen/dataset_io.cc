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

#include "measkit/dataset_io.h"

#include <fstream>
#include <map>

#include <fmt/format.h>

#include "json.hpp"
#include "measkit/error.h"

namespace measkit {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void schema_error(int line_no, const std::string& why) {
  std::string where = line_no > 0 ? "line " + std::to_string(line_no) + ": "
                                  : std::string();
  throw Error(ErrorCode::kSchemaViolation, where + why);
}

const Json& field(const Json& j, const char* name, Json::value_t type,
                  int line_no) {
  auto it = j.find(name);
  if (it == j.end()) schema_error(line_no, std::string("missing field '") + name + "'");
  if (it->type() != type) {
    schema_error(line_no, std::string("field '") + name + "' has the wrong type");
  }
  return *it;
}

std::string string_field(const Json& j, const char* name, int line_no) {
  return field(j, name, Json::value_t::string, line_no).get<std::string>();
}

std::string format_count(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

}  // namespace

std::string sample_to_json(const MstSample& s) {
  Json j;
  j["id"] = s.id;
  j["task"] = task_name(s.task);
  j["prompt_set"] = prompt_set_name(s.prompt_set);
  j["notation"] = notation_name(s.notation);
  j["split"] = split_name(s.split);
  j["text"] = s.text;
  j["candidates"] = s.candidates;
  j["answer"] = s.answer;
  Json ms = Json::array();
  for (const MeasurementField& m : s.measurements) {
    ms.push_back({{"value", m.value}, {"unit", m.unit}});
  }
  j["measurements"] = std::move(ms);
  if (s.entity) {
    j["entity"] = {{"name", s.entity->name},
                   {"unit", s.entity->unit},
                   {"low", s.entity->low},
                   {"high", s.entity->high}};
  }
  return j.dump();
}

MstSample sample_from_json(std::string_view line, int line_no) {
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded()) schema_error(line_no, "invalid JSON");
  if (!j.is_object()) schema_error(line_no, "expected a JSON object");
  MstSample s;
  try {
    s.id = string_field(j, "id", line_no);
    s.task = parse_task(string_field(j, "task", line_no));
    s.prompt_set = parse_prompt_set(string_field(j, "prompt_set", line_no));
    s.notation = parse_notation(string_field(j, "notation", line_no));
    s.split = parse_split(string_field(j, "split", line_no));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaViolation) throw;
    schema_error(line_no, e.what());
  }
  s.text = string_field(j, "text", line_no);
  for (const Json& c : field(j, "candidates", Json::value_t::array, line_no)) {
    if (!c.is_string()) schema_error(line_no, "candidates must be strings");
    s.candidates.push_back(c.get<std::string>());
  }
  s.answer = string_field(j, "answer", line_no);
  for (const Json& m : field(j, "measurements", Json::value_t::array, line_no)) {
    if (!m.is_object()) schema_error(line_no, "measurement must be an object");
    s.measurements.push_back({string_field(m, "value", line_no),
                              string_field(m, "unit", line_no)});
  }
  if (j.contains("entity")) {
    const Json& e = field(j, "entity", Json::value_t::object, line_no);
    s.entity = EntityField{string_field(e, "name", line_no),
                           string_field(e, "unit", line_no),
                           string_field(e, "low", line_no),
                           string_field(e, "high", line_no)};
  }
  const std::size_t first_mask = s.text.find("[MASK]");
  if (first_mask == std::string::npos ||
      s.text.find("[MASK]", first_mask + 1) != std::string::npos) {
    schema_error(line_no, "text must contain exactly one [MASK]");
  }
  if (std::find(s.candidates.begin(), s.candidates.end(), s.answer) ==
      s.candidates.end()) {
    schema_error(line_no, "answer is not a candidate");
  }
  return s;
}

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<MstSample>& samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const MstSample& s : samples) out << sample_to_json(s) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<MstSample> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<MstSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      samples.push_back(sample_from_json(line, line_no));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
  return samples;
}

std::filesystem::path dataset_dir(const std::filesystem::path& root,
                                  TaskKind task, PromptSet set,
                                  Notation notation) {
  return root / std::string(task_name(task)) / std::string(prompt_set_name(set)) /
         std::string(notation_name(notation));
}

std::filesystem::path split_path(const std::filesystem::path& dir, Split split) {
  return dir / (std::string(split_name(split)) + ".jsonl");
}

std::string manifest_json(const Dataset& dataset) {
  const GenConfig& c = dataset.config;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["generator_version"] = kGeneratorVersion;
  j["task"] = task_name(c.task);
  j["prompt_set"] = prompt_set_name(c.prompt_set);
  j["notation"] = notation_name(c.notation);
  j["seed"] = c.seed;
  j["scale"] = c.scale;
  j["list_length"] = c.list_length;
  Json splits = Json::object();
  for (std::size_t i = 0; i < dataset.plans.size(); ++i) {
    const SplitPlan& plan = dataset.plans[i];
    SplitStats stats = split_stats(dataset.splits[i], std::string(split_name(plan.split)));
    Json sj;
    sj["file"] = std::string(split_name(plan.split)) + ".jsonl";
    sj["count"] = stats.count;
    sj["number_range"] = {{"low_exponent", plan.range.low_exponent},
                          {"high_exponent", plan.range.high_exponent}};
    Json labels = Json::object();
    for (const LabelShare& l : stats.labels) labels[l.label] = l.count;
    sj["label_counts"] = std::move(labels);
    Json target = Json::object();
    const auto& order = report_label_order(c.task);
    for (std::size_t k = 0; k < order.size(); ++k) {
      target[order[k]] = plan.label_fractions[k];
    }
    sj["target_label_fractions"] = std::move(target);
    splits[std::string(split_name(plan.split))] = std::move(sj);
  }
  j["splits"] = std::move(splits);
  return j.dump(2) + "\n";
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < dataset.plans.size(); ++i) {
    write_jsonl(split_path(dir, dataset.plans[i].split), dataset.splits[i]);
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / "manifest.json").string());
  out << manifest_json(dataset);
}

SplitStats split_stats(const std::vector<MstSample>& samples,
                       const std::string& name) {
  SplitStats stats;
  stats.name = name;
  stats.count = samples.size();
  if (samples.empty()) return stats;
  stats.task = samples.front().task;
  std::map<std::string, std::size_t> counts;
  for (const MstSample& s : samples) {
    if (s.task != *stats.task) {
      throw Error(ErrorCode::kSchemaViolation, name + ": mixed tasks");
    }
    std::optional<std::string> base = label_class(s.task, s.answer);
    ++counts[base ? *base : s.answer];
  }
  for (const std::string& label : report_label_order(*stats.task)) {
    std::size_t n = counts[label];
    stats.labels.push_back({label, n, static_cast<double>(n) / stats.count});
  }
  return stats;
}

std::vector<SplitStats> dataset_stats(
    const std::vector<std::filesystem::path>& files) {
  std::vector<SplitStats> out;
  for (const auto& file : files) {
    out.push_back(split_stats(read_jsonl(file), file.stem().string()));
  }
  return out;
}

std::string format_stats(const std::vector<SplitStats>& stats) {
  std::string out;
  for (const SplitStats& s : stats) {
    std::string range = "-";
    try {
      range = is_extrapolation(parse_split(s.name)) ? "extrapolation"
                                                    : "interpolation";
    } catch (const Error&) {
    }
    std::string labels;
    for (const LabelShare& l : s.labels) {
      if (!labels.empty()) labels += ", ";
      labels += fmt::format("{}: {:.3f}", l.label, l.fraction);
    }
    out += fmt::format("{:<10} {:<14} {:>9}  {}\n", s.name, range,
                       format_count(s.count), labels);
  }
  return out;
}

}  // namespace measkit
