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
#include "zeroreg/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace zeroreg {

PointCloud::PointCloud(std::vector<Vec3> points, std::vector<float> intensity)
    : points_(std::move(points)), intensity_(std::move(intensity)) {
  if (!intensity_.empty() && intensity_.size() != points_.size()) {
    throw Error(ErrorCode::Parameter,
                "intensity count does not match point count");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) {
      std::ostringstream msg;
      msg << "point " << i << " has a non-finite coordinate";
      throw Error(ErrorCode::Parameter, msg.str());
    }
  }
}

Vec3 PointCloud::centroid() const {
  Vec3 sum = Vec3::Zero();
  for (const auto& p : points_) sum += p;
  return points_.empty() ? sum : Vec3(sum / static_cast<double>(size()));
}

PointCloud PointCloud::select(std::span<const std::size_t> indices) const {
  std::vector<Vec3> pts;
  std::vector<float> inten;
  pts.reserve(indices.size());
  for (std::size_t i : indices) pts.push_back(points_.at(i));
  if (has_intensity()) {
    inten.reserve(indices.size());
    for (std::size_t i : indices) inten.push_back(intensity_[i]);
  }
  return PointCloud(std::move(pts), std::move(inten));
}

namespace {

constexpr std::int64_t kVoxelKeyLimit = std::int64_t{1} << 20;

std::uint64_t voxel_key(const Vec3& p, double voxel_size) {
  std::uint64_t key = 0;
  for (int a = 0; a < 3; ++a) {
    const double cell = std::floor(p[a] / voxel_size);
    if (!(cell >= -static_cast<double>(kVoxelKeyLimit) &&
          cell < static_cast<double>(kVoxelKeyLimit))) {
      throw Error(ErrorCode::OutOfRange,
                  "coordinate exceeds the voxel key range (2^20 cells)");
    }
    const auto biased =
        static_cast<std::uint64_t>(static_cast<std::int64_t>(cell) +
                                   kVoxelKeyLimit);
    key = (key << 21) | biased;
  }
  return key;
}

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

// Orients `v` in place by the documented three-step rule.
void orient_axis(Vec3& v, std::span<const Vec3> points, const Vec3& mean,
                 const std::optional<Vec3>& reference, double scale) {
  const double n = static_cast<double>(points.size());
  if (reference) {
    double s = 0.0;
    for (const auto& p : points) s += (p - *reference).dot(v);
    if (std::abs(s) > 1e-9 * n * scale) {
      if (s < 0) v = -v;
      return;
    }
  }
  double m3 = 0.0;
  for (const auto& p : points) {
    const double d = (p - mean).dot(v);
    m3 += d * d * d;
  }
  if (std::abs(m3) > 1e-9 * n * scale * scale * scale) {
    if (m3 < 0) v = -v;
    return;
  }
  Eigen::Index largest = 0;
  v.cwiseAbs().maxCoeff(&largest);
  if (v[largest] < 0) v = -v;
}

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw Error(ErrorCode::Parameter, "voxel size must be positive");
  }
  if (cloud.empty()) {
    throw Error(ErrorCode::EmptyInput, "cannot voxelize an empty cloud");
  }
  const auto& pts = cloud.points();
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    keyed[i] = {voxel_key(pts[i], voxel_size), static_cast<std::uint32_t>(i)};
  }
  // Members of a voxel are summed in coordinate order so the centroid is
  // bit-identical for any permutation of the input.
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    const Vec3& pa = pts[a.second];
    const Vec3& pb = pts[b.second];
    if (lex_less(pa, pb)) return true;
    if (lex_less(pb, pa)) return false;
    if (cloud.has_intensity()) {
      return cloud.intensity()[a.second] < cloud.intensity()[b.second];
    }
    return false;
  });

  std::vector<Vec3> out;
  std::vector<float> out_intensity;
  for (std::size_t begin = 0; begin < keyed.size();) {
    std::size_t end = begin;
    Vec3 sum = Vec3::Zero();
    double isum = 0.0;
    while (end < keyed.size() && keyed[end].first == keyed[begin].first) {
      sum += pts[keyed[end].second];
      if (cloud.has_intensity()) isum += cloud.intensity()[keyed[end].second];
      ++end;
    }
    const double count = static_cast<double>(end - begin);
    out.push_back(sum / count);
    if (cloud.has_intensity()) {
      out_intensity.push_back(static_cast<float>(isum / count));
    }
    begin = end;
  }
  return PointCloud(std::move(out), std::move(out_intensity));
}

PcaFrame pca(std::span<const Vec3> points, const std::optional<Vec3>& reference) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyInput, "pca of an empty point set");
  }
  const bool all_same = std::all_of(points.begin(), points.end(),
                                    [&](const Vec3& p) { return p == points[0]; });
  if (all_same) {
    throw Error(ErrorCode::DegenerateGeometry,
                "pca: all points are identical");
  }
  const double n = static_cast<double>(points.size());
  Vec3 mean = Vec3::Zero();
  for (const auto& p : points) mean += p;
  mean /= n;
  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) {
    const Vec3 d = p - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= n;

  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateGeometry, "pca: eigensolver failed");
  }
  PcaFrame frame;
  frame.mean = mean;
  for (int a = 0; a < 3; ++a) {
    // Eigen returns ascending eigenvalues.
    frame.eigenvalues[a] = std::max(0.0, solver.eigenvalues()[2 - a]);
    frame.axes.col(a) = solver.eigenvectors().col(2 - a).normalized();
  }
  if (!(frame.eigenvalues[0] > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "pca: zero spread");
  }
  const double scale = std::sqrt(frame.eigenvalues[0]);
  Vec3 v1 = frame.axes.col(0);
  Vec3 v3 = frame.axes.col(2);
  orient_axis(v1, points, mean, reference, scale);
  orient_axis(v3, points, mean, reference, scale);
  frame.axes.col(0) = v1;
  frame.axes.col(1) = v3.cross(v1).normalized();
  frame.axes.col(2) = v3;
  return frame;
}

PcaFrame pca(const PointCloud& cloud) { return pca(cloud.points()); }

std::vector<std::size_t> farthest_point_sampling(
    std::span<const Vec3> points, std::size_t n,
    std::optional<std::size_t> start) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyInput, "farthest point sampling of empty cloud");
  }
  if (n == 0) {
    throw Error(ErrorCode::Parameter, "farthest point sampling needs n >= 1");
  }
  const std::size_t count = points.size();
  n = std::min(n, count);

  std::size_t first = 0;
  if (start) {
    if (*start >= count) {
      throw Error(ErrorCode::Parameter, "FPS start index out of range");
    }
    first = *start;
  } else {
    Vec3 c = Vec3::Zero();
    for (const auto& p : points) c += p;
    c /= static_cast<double>(count);
    double best = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double d = (points[i] - c).squaredNorm();
      if (d > best) {
        best = d;
        first = i;
      }
    }
  }

  std::vector<std::size_t> selected;
  selected.reserve(n);
  std::vector<double> min_d2(count, std::numeric_limits<double>::infinity());
  std::vector<char> taken(count, 0);
  std::size_t current = first;
  for (std::size_t step = 0; step < n; ++step) {
    selected.push_back(current);
    taken[current] = 1;
    const Vec3 c = points[current];
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < count; ++i) {
      if (taken[i]) continue;
      const double d = (points[i] - c).squaredNorm();
      if (d < min_d2[i]) min_d2[i] = d;
      if (min_d2[i] > best) {
        best = min_d2[i];
        best_i = i;
      }
    }
    current = best_i;
  }
  return selected;
}

std::vector<std::size_t> farthest_point_sampling(
    const PointCloud& cloud, std::size_t n, std::optional<std::size_t> start) {
  return farthest_point_sampling(cloud.points(), n, start);
}

}  // namespace zeroreg
