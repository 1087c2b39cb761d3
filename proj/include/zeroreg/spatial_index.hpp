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
#include <memory>
#include <span>
#include <vector>

#include "zeroreg/common.hpp"

namespace zeroreg {

// Static k-d tree over a copy of the input points. Immutable after
// construction; concurrent queries are safe.
class SpatialIndex {
 public:
  explicit SpatialIndex(std::span<const Vec3> points);
  explicit SpatialIndex(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }

  // Indices of all points with ||p - query|| <= radius, ascending.
  std::vector<std::size_t> radius_neighbors(const Vec3& query,
                                            double radius) const;

  // The k nearest points ordered by (distance, index). Returns min(k, size())
  // entries.
  std::vector<std::size_t> knn(const Vec3& query, std::size_t k) const;

 private:
  struct Node {
    std::uint32_t begin = 0;  // range into order_
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int axis = -1;  // -1: leaf
    double split = 0.0;
    Vec3 lo = Vec3::Zero();  // bounding box
    Vec3 hi = Vec3::Zero();
  };

  void build();
  std::int32_t build_node(std::uint32_t begin, std::uint32_t end);

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace zeroreg
