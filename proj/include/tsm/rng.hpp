// Copyright 2026 The tsm Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace tsm {

// Portable random source: std::mt19937_64 (whose output sequence is fixed by
// the C++ standard) plus distribution code written out here, because the
// standard library distributions differ between implementations.
//
//   uniform()  = (next() >> 11) * 2^-53
//   normal()   = Box-Muller on two uniforms, u1 mapped into (0, 1]; the
//                second variate of each pair is cached
//   below(n)   = rejection sampling on next() to remove modulo bias
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double normal();
  std::size_t below(std::size_t n);

  // Fisher-Yates, last position first.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  // `k` distinct indices from [0, n) in ascending order.
  std::vector<std::size_t> choose_sorted(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer folded over `path`; gives each experiment cell its
// own stream independent of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

}  // namespace tsm
