/*
Copyright 2026 The zeroreg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace zeroreg {

// Worker count used by parallel_for. Reads ZEROREG_NUM_THREADS once; falls
// back to std::thread::hardware_concurrency().
std::size_t num_threads();

// Overrides the worker count for the rest of the process (0 restores the
// environment/hardware default).
void set_num_threads(std::size_t n);

// Runs body(i) for i in [0, n). Work is split into contiguous chunks; callers
// must only write to per-index slots so results do not depend on the thread
// count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// splitmix64 finalizer. Used to derive independent, thread-count-independent
// RNG streams from (seed, stream ids...).
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
  return mix_seed(mix_seed(mix_seed(seed ^ mix_seed(a)) ^ b) ^ c);
}

using Rng = std::mt19937_64;

// k distinct indices drawn uniformly from [0, n), returned in ascending order.
// k >= n returns every index.
std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t k, Rng& rng);

}  // namespace zeroreg
