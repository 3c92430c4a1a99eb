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

#include <fstream>
#include <sstream>

#include "measkit/datagen.h"
#include "measkit/error.h"

namespace measkit {
namespace {

// Demo reference ranges; not clinical guidance. Keep in sync with
// data/entities.csv.
constexpr std::string_view kBuiltinEntities =
    "entity,unit,low,high\n"
    "Glucose,mg/dL,70,99\n"
    "Hemoglobin,g/dl,12,17.5\n"
    "Creatinine,mg/dl,0.6,1.3\n"
    "Potassium,mEq/l,3.5,5.1\n"
    "Calcium,mg/dl,8.5,10.5\n"
    "Magnesium,mg/dl,1.7,2.2\n"
    "Phosphate,mg/dl,2.5,4.5\n"
    "Albumin,g/dl,3.5,5.5\n"
    "Total protein,g/dl,6,8.3\n"
    "Bilirubin,mg/dl,0.1,1.2\n"
    "Urea nitrogen,mg/dl,7,20\n"
    "White blood cells,k/\xC2\xB5l,4.5,11\n"
    "Lactate,mM,0.5,2.2\n"
    "TSH,\xC2\xB5IU/ml,0.4,4.0\n"
    "Insulin,\xC2\xB5IU/ml,2.6,24.9\n"
    "ALT,U/l,7,56\n"
    "AST,U/l,10,40\n"
    "Bicarbonate,mEq/l,22,29\n"
    "Anion gap,mEq/l,3,11\n"
    "Ionized calcium,mM,1.12,1.32\n"
    "Uric acid,mg/dl,3.5,7.2\n"
    "Cortisol,\xC2\xB5g/dl,5,25\n"
    "Lymphocytes,k/\xC2\xB5l,1.0,4.8\n"
    "Neutrophils,k/\xC2\xB5l,1.5,8.0\n"
    "Fibrinogen,g/l,2,4\n"
    "Ammonia,\xC2\xB5g/dl,15,45\n";

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string_view builtin_entity_csv() { return kBuiltinEntities; }

EntityTable::EntityTable(std::vector<EntityRecord> records)
    : records_(std::move(records)) {
  for (const EntityRecord& r : records_) {
    if (r.name.empty()) {
      throw Error(ErrorCode::kMalformedEntityTable, "empty entity name");
    }
    if (!(r.low < r.high)) {
      throw Error(ErrorCode::kMalformedEntityTable,
                  "entity '" + r.name + "': low must be below high");
    }
  }
}

const EntityTable& EntityTable::builtin() {
  static const EntityTable table = parse(kBuiltinEntities);
  return table;
}

EntityTable EntityTable::parse(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<EntityRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split_csv_line(trim(line));
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kMalformedEntityTable,
                   "line " + std::to_string(line_no) + ": " + why);
    };
    if (!header_seen) {
      if (f != std::vector<std::string>{"entity", "unit", "low", "high"}) {
        throw fail("expected header 'entity,unit,low,high'");
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 4) throw fail("expected 4 fields");
    EntityRecord r;
    r.name = f[0];
    r.unit_text = f[1];
    try {
      r.unit = parse_unit(f[1]);
      r.low = parse_number(f[2]);
      r.high = parse_number(f[3]);
    } catch (const Error& e) {
      throw fail(e.what());
    }
    records.push_back(std::move(r));
  }
  if (!header_seen) {
    throw Error(ErrorCode::kMalformedEntityTable, "missing header");
  }
  return EntityTable(std::move(records));
}

EntityTable EntityTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const EntityRecord* EntityTable::find(std::string_view name) const {
  for (const EntityRecord& r : records_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace measkit
