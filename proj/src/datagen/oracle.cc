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

[[noreturn]] void bad_layout(const MstSample& s, const std::string& why) {
  throw Error(ErrorCode::kSchemaViolation, "sample " + s.id + ": " + why);
}

std::vector<Measurement> parse_fields(const MstSample& s) {
  std::vector<Measurement> out;
  for (const MeasurementField& m : s.measurements) {
    try {
      out.push_back({parse_number(m.value), parse_unit(m.unit)});
    } catch (const Error& e) {
      bad_layout(s, e.what());
    }
  }
  return out;
}

bool less(const Measurement& a, const Measurement& b) {
  return compare_measurements(a, b) == Ordering::kLess;
}

}  // namespace

std::string derive_label(const MstSample& s) {
  std::vector<Measurement> ms = parse_fields(s);
  switch (s.task) {
    case TaskKind::kComparison: {
      if (ms.size() != 2) bad_layout(s, "comparison needs 2 measurements");
      Ordering o = compare_measurements(ms[0], ms[1]);
      if (o == Ordering::kEqual) bad_layout(s, "tied comparison");
      return o == Ordering::kLess ? "smaller" : "larger";
    }
    case TaskKind::kArgMinMax: {
      if (ms.size() < 4) bad_layout(s, "argminmax needs a list and a target");
      const Measurement& target = ms.back();
      std::size_t below = 0, above = 0, equal = 0;
      for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
        Ordering o = compare_measurements(ms[i], target);
        if (o == Ordering::kLess) ++below;
        if (o == Ordering::kGreater) ++above;
        if (o == Ordering::kEqual) ++equal;
      }
      if (equal != 1) bad_layout(s, "target must occur exactly once in the list");
      if (below == 0) return "smallest";
      if (above == 0) return "largest";
      return "middle";
    }
    case TaskKind::kSorting: {
      if (ms.size() < 6 || ms.size() % 2 != 0) {
        bad_layout(s, "sorting needs two lists of equal length");
      }
      const std::size_t n = ms.size() / 2;
      std::vector<Measurement> source(ms.begin(), ms.begin() + n);
      std::vector<Measurement> result(ms.begin() + n, ms.end());
      // The result must be a permutation of the source, quantity-wise.
      std::vector<bool> used(n, false);
      for (const Measurement& r : result) {
        bool found = false;
        for (std::size_t i = 0; i < n && !found; ++i) {
          if (!used[i] && r.unit == source[i].unit &&
              r.value.identical(source[i].value)) {
            used[i] = found = true;
          }
        }
        if (!found) bad_layout(s, "result list is not a permutation of the source");
      }
      bool ascending = true, descending = true;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        Ordering o = compare_measurements(result[i], result[i + 1]);
        if (o == Ordering::kEqual) bad_layout(s, "tied sorting list");
        if (o != Ordering::kLess) ascending = false;
        if (o != Ordering::kGreater) descending = false;
      }
      if (ascending) return "increasing";
      if (descending) return "decreasing";
      return "random";
    }
    case TaskKind::kUnitConversion: {
      if (ms.size() != 2) bad_layout(s, "unitconversion needs 2 measurements");
      return quantities_equal(ms[0], ms[1]) ? "same" : "different";
    }
    case TaskKind::kRefRange: {
      if (ms.size() != 1 || !s.entity) {
        bad_layout(s, "refrange needs 1 measurement and an entity");
      }
      Measurement low, high;
      try {
        Unit u = parse_unit(s.entity->unit);
        low = {parse_number(s.entity->low), u};
        high = {parse_number(s.entity->high), u};
      } catch (const Error& e) {
        bad_layout(s, e.what());
      }
      const bool inside = !less(ms[0], low) && !less(high, ms[0]);
      return inside ? "normal" : "abnormal";
    }
  }
  bad_layout(s, "unknown task");
}

}  // namespace measkit
