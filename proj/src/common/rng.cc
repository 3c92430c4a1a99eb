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

#include "measkit/rng.h"

#include <cmath>
#include <numbers>

namespace measkit {
namespace {

void append_words(std::vector<std::uint32_t>& words, std::uint64_t v) {
  words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
  words.push_back(static_cast<std::uint32_t>(v >> 32));
}

std::mt19937_64 make_engine(std::uint64_t seed,
                            std::span<const std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * path.size() + 1);
  append_words(words, seed);
  // Path length is mixed in so {a} and {a, 0} differ.
  words.push_back(static_cast<std::uint32_t>(path.size()));
  for (std::uint64_t p : path) append_words(words, p);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(make_engine(seed, {})) {}

Rng::Rng(std::uint64_t seed, std::span<const std::uint64_t> path)
    : engine_(make_engine(seed, path)) {}

std::uint64_t Rng::uniform(std::uint64_t n) {
  // Rejection sampling: discard the low (2^64 mod n) values.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  return lo + static_cast<std::int64_t>(uniform(span));
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace measkit
