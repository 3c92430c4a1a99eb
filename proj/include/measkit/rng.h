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

#ifndef MEASKIT_RNG_H_
#define MEASKIT_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace measkit {

// Deterministic random stream. The engine (mt19937_64) and the seeding
// algorithm (seed_seq) are fully specified by the standard; the
// distributions below are hand-rolled because the std:: ones are
// implementation-defined, which would break byte-identical datasets across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent substream addressed by a path of counters, e.g.
  // {task, split, sample_index}. Substreams with different paths are
  // uncorrelated for all practical purposes.
  Rng(std::uint64_t seed, std::span<const std::uint64_t> path);
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : Rng(seed, std::span<const std::uint64_t>(path.begin(), path.size())) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, n). n must be positive.
  std::uint64_t uniform(std::uint64_t n);

  // Uniform on [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via Box-Muller (no cached spare, so the stream position
  // depends only on the number of calls).
  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(items.size()))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace measkit

#endif  // MEASKIT_RNG_H_
