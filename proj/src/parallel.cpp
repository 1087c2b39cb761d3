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
#include "zeroreg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "zeroreg/common.hpp"

namespace zeroreg {

namespace {

std::atomic<std::size_t> g_thread_override{0};

std::size_t default_threads() {
  static const std::size_t n = [] {
    if (const char* env = std::getenv("ZEROREG_NUM_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }();
  return n;
}

}  // namespace

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::EmptyInput: return "empty_input";
    case ErrorCode::DegenerateGeometry: return "degenerate_geometry";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::SparsePatch: return "sparse_patch";
    case ErrorCode::ScaleEmpty: return "scale_empty";
    case ErrorCode::InsufficientConsensus: return "insufficient_consensus";
    case ErrorCode::InsufficientData: return "insufficient_data";
    case ErrorCode::DegenerateModel: return "degenerate_model";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

const char* to_string(Scale scale) {
  switch (scale) {
    case Scale::Local: return "local";
    case Scale::Middle: return "middle";
    case Scale::Global: return "global";
  }
  return "unknown";
}

std::size_t num_threads() {
  const std::size_t o = g_thread_override.load();
  return o > 0 ? o : default_threads();
}

void set_num_threads(std::size_t n) { g_thread_override.store(n); }

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(num_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end && !failed.load(); ++i) body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k >= n) return idx;
  // Partial Fisher-Yates over the first k slots.
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace zeroreg
