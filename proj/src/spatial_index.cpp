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
#include "zeroreg/spatial_index.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace zeroreg {

namespace {

constexpr std::uint32_t kLeafSize = 16;

double box_distance2(const Vec3& q, const Vec3& lo, const Vec3& hi) {
  double d2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (q[a] < lo[a]) {
      const double d = lo[a] - q[a];
      d2 += d * d;
    } else if (q[a] > hi[a]) {
      const double d = q[a] - hi[a];
      d2 += d * d;
    }
  }
  return d2;
}

}  // namespace

SpatialIndex::SpatialIndex(std::span<const Vec3> points)
    : points_(points.begin(), points.end()) {
  build();
}

SpatialIndex::SpatialIndex(std::vector<Vec3> points)
    : points_(std::move(points)) {
  build();
}

void SpatialIndex::build() {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::uint32_t{0});
  nodes_.clear();
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build_node(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = points_[order_[begin]];
  node.hi = node.lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    node.lo = node.lo.cwiseMin(points_[order_[i]]);
    node.hi = node.hi.cwiseMax(points_[order_[i]]);
  }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  Eigen::Index axis = 0;
  (node.hi - node.lo).maxCoeff(&axis);
  if (node.hi[axis] == node.lo[axis]) return id;  // all coincident

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = points_[a][axis];
                     const double cb = points_[b][axis];
                     return ca != cb ? ca < cb : a < b;
                   });
  const std::int32_t left = build_node(begin, mid);
  const std::int32_t right = build_node(mid, end);
  nodes_[id].axis = static_cast<int>(axis);
  nodes_[id].split = points_[order_[mid]][axis];
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<std::size_t> SpatialIndex::radius_neighbors(const Vec3& query,
                                                        double radius) const {
  std::vector<std::size_t> out;
  if (nodes_.empty() || radius < 0.0) return out;
  const double r2 = radius * radius;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance2(query, node.lo, node.hi) > r2) continue;
    if (node.axis < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        if ((points_[idx] - query).squaredNorm() <= r2) out.push_back(idx);
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> SpatialIndex::knn(const Vec3& query,
                                           std::size_t k) const {
  k = std::min(k, points_.size());
  std::vector<std::size_t> out;
  if (k == 0) return out;
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry> heap;  // max-heap on (d2, index)
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (heap.size() == k &&
        box_distance2(query, node.lo, node.hi) > heap.top().first) {
      continue;
    }
    if (node.axis < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        const std::uint32_t idx = order_[i];
        const Entry e{(points_[idx] - query).squaredNorm(), idx};
        if (heap.size() < k) {
          heap.push(e);
        } else if (e < heap.top()) {
          heap.pop();
          heap.push(e);
        }
      }
      continue;
    }
    // Visit the nearer child first (pushed last).
    const bool go_left = query[node.axis] < node.split;
    stack.push_back(go_left ? node.right : node.left);
    stack.push_back(go_left ? node.left : node.right);
  }
  out.resize(heap.size());
  for (std::size_t i = heap.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

}  // namespace zeroreg
