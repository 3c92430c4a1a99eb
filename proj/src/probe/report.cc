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

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "measkit/error.h"
#include "measkit/eval_report.h"

namespace measkit {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename U>
U parse_unsigned(const std::string& text, int line_no, std::string_view what) {
  U value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kSchemaViolation,
                fmt::format("report line {}: bad {} '{}'", line_no, what, text));
  }
  return value;
}

struct TableColumn {
  std::string_view task;
  std::string_view heading;
};
constexpr TableColumn kColumns[] = {{"comparison", "Comp"},
                                    {"argminmax", "Arg"},
                                    {"sorting", "Sort"},
                                    {"unitconversion", "Unit"},
                                    {"refrange", "Ref"}};

std::string short_notation(const std::string& notation) {
  if (notation == "decimal") return "Deci";
  if (notation == "scientific") return "Sci";
  return notation;
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
  std::string out(kReportHeader);
  out += '\n';
  for (const EvalRow& r : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{:.6f},{}\n", r.model, r.task,
                       r.prompt_set, r.notation,
                       r.scale_embedding ? "on" : "off", r.split, r.seed,
                       r.correct, r.total, r.accuracy(), r.fingerprint);
  }
  return out;
}

EvalReport report_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw Error(ErrorCode::kSchemaViolation, "report: unexpected header");
  }
  EvalReport report;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f = split_fields(line);
    if (f.size() != 11) {
      throw Error(ErrorCode::kSchemaViolation,
                  fmt::format("report line {}: expected 11 fields, got {}",
                              line_no, f.size()));
    }
    if (f[4] != "on" && f[4] != "off") {
      throw Error(ErrorCode::kSchemaViolation,
                  fmt::format("report line {}: scale_embedding must be on/off",
                              line_no));
    }
    EvalRow r;
    r.model = f[0];
    r.task = f[1];
    r.prompt_set = f[2];
    r.notation = f[3];
    r.scale_embedding = f[4] == "on";
    r.split = f[5];
    r.seed = parse_unsigned<std::uint64_t>(f[6], line_no, "seed");
    r.correct = parse_unsigned<std::size_t>(f[7], line_no, "correct");
    r.total = parse_unsigned<std::size_t>(f[8], line_no, "total");
    r.fingerprint = f[10];
    if (r.correct > r.total) {
      throw Error(ErrorCode::kSchemaViolation,
                  fmt::format("report line {}: correct > total", line_no));
    }
    report.rows.push_back(std::move(r));
  }
  return report;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << report_to_csv(report);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

EvalReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return report_from_csv(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<AggregateRow> aggregate(const EvalReport& report) {
  std::vector<AggregateRow> out;
  for (const EvalRow& r : report.rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const AggregateRow& a) {
      return a.model == r.model && a.task == r.task &&
             a.prompt_set == r.prompt_set && a.notation == r.notation &&
             a.scale_embedding == r.scale_embedding && a.split == r.split;
    });
    if (it == out.end()) {
      out.push_back({r.model, r.task, r.prompt_set, r.notation,
                     r.scale_embedding, r.split, {}, {}, 0.0, 0, 0});
      it = out.end() - 1;
    }
    it->seeds.push_back(r.seed);
    it->per_seed.push_back(r.accuracy());
    it->correct += r.correct;
    it->total += r.total;
  }
  for (AggregateRow& a : out) {
    double sum = 0.0;
    for (double v : a.per_seed) sum += v;
    a.mean = sum / static_cast<double>(a.per_seed.size());
  }
  return out;
}

std::string format_report_table(const EvalReport& report) {
  std::vector<AggregateRow> groups = aggregate(report);
  struct Line {
    std::string model;
    std::string notation;
    std::map<std::string, double> cells;  // "task/split" -> mean
  };
  std::vector<Line> lines;
  for (const AggregateRow& a : groups) {
    std::string model = a.model + (a.scale_embedding ? "+scale" : "");
    if (a.prompt_set != "base") model += " [" + a.prompt_set + "]";
    std::string notation = short_notation(a.notation);
    auto it = std::find_if(lines.begin(), lines.end(), [&](const Line& l) {
      return l.model == model && l.notation == notation;
    });
    if (it == lines.end()) {
      lines.push_back({model, notation, {}});
      it = lines.end() - 1;
    }
    it->cells[a.task + "/" + a.split] = a.mean;
  }

  std::size_t model_w = 5;
  for (const Line& l : lines) model_w = std::max(model_w, l.model.size());
  std::string out = fmt::format("{:<{}}  {:<8}", "Model", model_w, "Notation");
  for (const TableColumn& c : kColumns) {
    out += fmt::format(" {:>6} {:>6}", std::string(c.heading) + "-in",
                       std::string(c.heading) + "-ex");
  }
  out += '\n';
  for (const Line& l : lines) {
    out += fmt::format("{:<{}}  {:<8}", l.model, model_w, l.notation);
    for (const TableColumn& c : kColumns) {
      for (std::string_view split : {"test_in", "test_ex"}) {
        auto cell = l.cells.find(std::string(c.task) + "/" + std::string(split));
        out += cell == l.cells.end()
                   ? fmt::format(" {:>6}", "N/A")
                   : fmt::format(" {:>6.1f}", 100.0 * cell->second);
      }
    }
    out += '\n';
  }

  out += "\nper-seed accuracy\n";
  for (const AggregateRow& a : groups) {
    out += fmt::format("{}{} {} {} {} {}:", a.model,
                       a.scale_embedding ? "+scale" : "", a.task, a.prompt_set,
                       a.notation, a.split);
    for (std::size_t i = 0; i < a.seeds.size(); ++i) {
      out += fmt::format(" seed{}={:.4f}", a.seeds[i], a.per_seed[i]);
    }
    out += fmt::format("  mean={:.4f} (n={})\n", a.mean, a.total);
  }
  return out;
}

}  // namespace measkit
