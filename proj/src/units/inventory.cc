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
#include <array>
#include <fstream>
#include <sstream>

#include "measkit/error.h"
#include "measkit/units.h"

namespace measkit {
namespace {

// Keep in sync with data/units.txt.
constexpr std::string_view kBuiltinInventory =
    "; head: variants\n"
    "m: m, cm, mm, \xC2\xB5m, nm\n"
    "A: A, mA, \xC2\xB5" "A, nA\n"
    "K: K, mK, \xC2\xB5K\n"
    "M: M, mM, \xC2\xB5M, nM\n"
    "Eq/l: Eq/l, mEq/l, \xC2\xB5" "Eq/l, mEq/ml, mEq/\xC2\xB5l\n"
    "g/l: g/l, mg/l, \xC2\xB5g/l, mg/dl, g/dl, \xC2\xB5g/dl, ng/dl, g/ml, "
    "mg/ml\n"
    "IU/l: IU/l, IU/ml, mIU/ml, \xC2\xB5IU/ml, mIU/l, \xC2\xB5IU/l, "
    "IU/\xC2\xB5l, mIU/\xC2\xB5l\n"
    "U/l: U/l, U/ml, U/\xC2\xB5l\n"
    "l/min: l/min, dl/min, ml/min, \xC2\xB5l/min\n"
    "#/l: #/dl, #/ml, #/\xC2\xB5l\n"
    "k/l: k/dl, k/ml, k/\xC2\xB5l\n"
    "l: l, dl, ml, \xC2\xB5l, nl, pl, fl\n"
    "g: g, mg, \xC2\xB5g, ng, pg, fg\n"
    "s: s, ms, \xC2\xB5s, ns\n"
    "m/hr: m/hr, cm/hr, mm/hr, \xC2\xB5m/hr\n"
    "l/hr: l/hr, dl/hr, ml/hr, \xC2\xB5l/hr\n";

constexpr std::array<Atom, 4> kCommonAtoms = {Atom::kGram, Atom::kLiter,
                                              Atom::kMeter, Atom::kSecond};

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

bool atom_in(Atom atom, std::span<const Atom> atoms) {
  return std::find(atoms.begin(), atoms.end(), atom) != atoms.end();
}

}  // namespace

std::string_view builtin_inventory_text() { return kBuiltinInventory; }

std::span<const Atom> common_atoms() { return kCommonAtoms; }

UnitInventory::UnitInventory(std::vector<UnitFamily> families)
    : families_(std::move(families)) {
  for (const UnitFamily& f : families_) {
    const Unit head = parse_unit(f.head);
    if (!head.prefix_free()) {
      throw Error(ErrorCode::kMalformedInventory,
                  "family head '" + f.head + "' carries a prefix");
    }
    if (f.variants.empty()) {
      throw Error(ErrorCode::kMalformedInventory,
                  "family '" + f.head + "' has no variants");
    }
    for (const Unit& v : f.variants) {
      if (v.dimension() != head.dimension()) {
        throw Error(ErrorCode::kMalformedInventory,
                    "variant '" + render_unit(v) + "' does not match head '" +
                        f.head + "'");
      }
    }
  }
}

const UnitInventory& UnitInventory::builtin() {
  static const UnitInventory inventory = parse(kBuiltinInventory);
  return inventory;
}

UnitInventory UnitInventory::parse(std::string_view text) {
  std::vector<UnitFamily> families;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line);
    if (body.empty() || body.front() == ';') continue;
    std::size_t colon = body.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kMalformedInventory,
                  "line " + std::to_string(line_no) + ": missing ':'");
    }
    UnitFamily family;
    family.head = trim(std::string_view(body).substr(0, colon));
    std::stringstream variants(body.substr(colon + 1));
    std::string item;
    try {
      while (std::getline(variants, item, ',')) {
        std::string v = trim(item);
        if (v.empty()) continue;
        family.variants.push_back(parse_unit(v));
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedInventory,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    families.push_back(std::move(family));
  }
  return UnitInventory(std::move(families));
}

UnitInventory UnitInventory::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

UnitInventory UnitInventory::restricted_to(std::span<const Atom> atoms) const {
  std::vector<UnitFamily> kept;
  for (const UnitFamily& f : families_) {
    Dimension d = f.dimension();
    if (!atom_in(d.numerator, atoms)) continue;
    if (d.denominator && !atom_in(*d.denominator, atoms)) continue;
    kept.push_back(f);
  }
  return UnitInventory(std::move(kept));
}

std::string UnitInventory::to_text() const {
  std::string out;
  for (const UnitFamily& f : families_) {
    out += f.head + ":";
    for (std::size_t i = 0; i < f.variants.size(); ++i) {
      out += (i == 0 ? " " : ", ") + render_unit(f.variants[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace measkit
