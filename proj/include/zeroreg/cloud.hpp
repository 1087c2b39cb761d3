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
#include <optional>
#include <span>
#include <vector>

#include "zeroreg/common.hpp"

namespace zeroreg {

// Ordered 3D points (meters) with optional per-point intensity.
//
// Construction validates that every coordinate is finite and that intensity,
// when present, has one entry per point.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> points,
                      std::vector<float> intensity = {});

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool has_intensity() const { return !intensity_.empty(); }

  const Vec3& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<float>& intensity() const { return intensity_; }

  Vec3 centroid() const;

  // New cloud made of the given indices (intensity follows).
  PointCloud select(std::span<const std::size_t> indices) const;

 private:
  std::vector<Vec3> points_;
  std::vector<float> intensity_;
};

// Principal axes of a point set.
//
// eigenvalues are sorted descending; axes holds the matching unit
// eigenvectors as columns (v1, v2, v3) and forms a right-handed basis.
struct PcaFrame {
  Vec3 eigenvalues = Vec3::Zero();
  Mat3 axes = Mat3::Identity();
  Vec3 mean = Vec3::Zero();

  Vec3 v1() const { return axes.col(0); }
  Vec3 v2() const { return axes.col(1); }
  Vec3 v3() const { return axes.col(2); }
  double sphericity() const { return eigenvalues[2] / eigenvalues[0]; }
};

// One point per occupied voxel of side `voxel_size`: the centroid of the
// voxel's members. Output is ordered by voxel key and does not depend on the
// input order. Voxel keys beyond +-2^20 cells throw OutOfRange.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size);

// Eigendecomposition of the covariance (normalized by n) of `points`.
//
// Sign convention per axis, applied to v1 and v3 (v2 = v3 x v1):
//   1. if `reference` is given, sum_i (p_i - reference) . v >= 0;
//   2. otherwise, or if that sum vanishes, the third central moment along v
//      is >= 0;
//   3. otherwise the largest-magnitude component of v is positive.
// Throws DegenerateGeometry when all points coincide and EmptyInput when
// `points` is empty.
PcaFrame pca(std::span<const Vec3> points,
             const std::optional<Vec3>& reference = std::nullopt);
PcaFrame pca(const PointCloud& cloud);

// Greedy farthest point sampling. Each pick maximizes the distance to the
// already-selected set (ties: lowest index). The default start is the point
// farthest from the centroid. n >= size() yields a full permutation.
std::vector<std::size_t> farthest_point_sampling(
    std::span<const Vec3> points, std::size_t n,
    std::optional<std::size_t> start = std::nullopt);
std::vector<std::size_t> farthest_point_sampling(
    const PointCloud& cloud, std::size_t n,
    std::optional<std::size_t> start = std::nullopt);

}  // namespace zeroreg
