// Copyright 2026 The topicsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOPICSIM_RNG_H_
#define TOPICSIM_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace topicsim {

using Rng = std::mt19937_64;

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a substream seed from a master seed and a path of indices
// (stream tag, grid index, run index, persona index, ...). Distinct paths
// yield statistically independent streams, so work items can be scheduled
// on any number of workers without changing results.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t key : path) h = SplitMix64(h ^ SplitMix64(key));
  return h;
}

inline Rng MakeRng(std::uint64_t seed,
                   std::initializer_list<std::uint64_t> path) {
  return Rng(DeriveSeed(seed, path));
}

// Stream tags; keep values stable, they are part of the reproducibility
// contract of result files.
namespace streams {
inline constexpr std::uint64_t kPopulation = 1;
inline constexpr std::uint64_t kParentPool = 2;
inline constexpr std::uint64_t kVisits = 3;
inline constexpr std::uint64_t kMarginals = 4;
}  // namespace streams

}  // namespace topicsim

#endif  // TOPICSIM_RNG_H_
