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
#include "zeroreg/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "zeroreg/parallel.hpp"

namespace zeroreg {

void BootstrapConfig::validate() const {
  const auto& t = tau_scales;
  if (!(t[0] > 0.0 && t[0] <= t[1] && t[1] <= t[2] && t[2] < 1.0)) {
    throw Error(ErrorCode::Parameter,
                "scale densities must satisfy 0 < tau_l <= tau_m <= tau_g < 1");
  }
  if (!(kappa_spheric > 0.0 && kappa_spheric < kappa_disc)) {
    throw Error(ErrorCode::Parameter,
                "voxel coefficients must satisfy 0 < kappa_spheric < kappa_disc");
  }
  if (!(delta_v > 0.0 && delta_v <= 1.0)) {
    throw Error(ErrorCode::Parameter, "delta_v must lie in (0, 1]");
  }
  if (n_r < 2) throw Error(ErrorCode::Parameter, "N_r must be >= 2");
  if (!(r_max > 0.0)) throw Error(ErrorCode::Parameter, "r_max must be > 0");
  if (!(tau_v > 0.0)) throw Error(ErrorCode::Parameter, "tau_v must be > 0");
}

const char* to_string(Branch branch) {
  return branch == Branch::Spheric ? "spheric" : "disc";
}

const PointCloud& select_larger(const PointCloud& p, const PointCloud& q) {
  if (p.empty() && q.empty()) {
    throw Error(ErrorCode::EmptyInput, "both clouds are empty");
  }
  return q.size() > p.size() ? q : p;
}

VoxelSizeEstimate voxel_size_from_sample(std::span<const Vec3> sample,
                                         const BootstrapConfig& cfg) {
  if (sample.size() < 3) {
    throw Error(ErrorCode::DegenerateGeometry,
                "voxel size estimation needs at least 3 points");
  }
  const PcaFrame frame = pca(sample);
  const Vec3 v3 = frame.v3();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : sample) {
    const double proj = p.dot(v3);
    lo = std::min(lo, proj);
    hi = std::max(hi, proj);
  }
  VoxelSizeEstimate out;
  out.sphericity = frame.sphericity();
  out.spread = hi - lo;
  // Relative test: a coplanar sample leaves rounding-level spread only.
  const double extent = std::sqrt(frame.eigenvalues[0]);
  if (!(out.spread > 1e-9 * extent)) {
    throw Error(ErrorCode::DegenerateGeometry,
                "sample has zero spread along its smallest principal axis");
  }
  out.branch = out.sphericity >= cfg.tau_v ? Branch::Spheric : Branch::Disc;
  const double kappa =
      out.branch == Branch::Spheric ? cfg.kappa_spheric : cfg.kappa_disc;
  out.voxel_size = kappa * std::sqrt(out.spread);
  return out;
}

VoxelSizeEstimate compute_voxel_size(const PointCloud& cloud,
                                     const BootstrapConfig& cfg,
                                     std::uint64_t seed) {
  cfg.validate();
  if (cloud.size() < 3) {
    throw Error(ErrorCode::DegenerateGeometry,
                "voxel size estimation needs at least 3 points");
  }
  const auto wanted = static_cast<std::size_t>(
      std::llround(cfg.delta_v * static_cast<double>(cloud.size())));
  Rng rng(seed);
  const auto idx = sample_without_replacement(
      cloud.size(), std::clamp<std::size_t>(wanted, 3, cloud.size()), rng);
  std::vector<Vec3> sample;
  sample.reserve(idx.size());
  for (std::size_t i : idx) sample.push_back(cloud[i]);
  return voxel_size_from_sample(sample, cfg);
}

double radius_for_density(std::span<const Vec3> sample, double tau) {
  const std::size_t n = sample.size();
  if (n < 2) {
    throw Error(ErrorCode::DegenerateGeometry,
                "radius estimation needs at least 2 points");
  }
  std::vector<double> dist;
  dist.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist.push_back((sample[i] - sample[j]).norm());
    }
  }
  const double nn = static_cast<double>(n);
  const auto fraction = [&](std::size_t pairs_within) {
    return (nn + 2.0 * static_cast<double>(pairs_within)) / (nn * nn);
  };
  const auto count_le = [&](double r) {
    return static_cast<std::size_t>(
        std::count_if(dist.begin(), dist.end(), [r](double d) { return d <= r; }));
  };
  // k-th smallest pairwise distance, 1-based.
  const auto order_stat = [&](std::size_t k) {
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    return dist[k - 1];
  };

  const std::size_t total = dist.size();
  const double target = std::clamp((tau * nn * nn - nn) / 2.0, 0.0,
                                   static_cast<double>(total));
  std::vector<std::pair<double, std::size_t>> candidates;  // (r, pairs <= r)
  candidates.emplace_back(0.0, count_le(0.0));
  const auto lo_k = static_cast<std::size_t>(std::floor(target));
  const auto hi_k = static_cast<std::size_t>(std::ceil(target));
  for (std::size_t k : {lo_k, hi_k}) {
    if (k == 0) continue;
    const double a = order_stat(std::min(k, total));
    candidates.emplace_back(a, count_le(a));
    // Largest distance strictly below a: the count just before the jump at a.
    double below = -1.0;
    std::size_t below_count = 0;
    for (double d : dist) {
      if (d < a) {
        ++below_count;
        below = std::max(below, d);
      }
    }
    if (below >= 0.0) candidates.emplace_back(below, below_count);
  }
  double best_r = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  for (const auto& [r, c] : candidates) {
    const double err = std::abs(fraction(c) - tau);
    if (err < best_err || (err == best_err && r < best_r)) {
      best_err = err;
      best_r = r;
    }
  }
  return best_r;
}

std::array<double, 3> radii_from_sample(std::span<const Vec3> sample,
                                        const BootstrapConfig& cfg) {
  std::array<double, 3> radii{};
  for (std::size_t s = 0; s < 3; ++s) {
    const double r = radius_for_density(sample, cfg.tau_scales[s]);
    radii[s] = cfg.clamp == RadiusClamp::Truncate ? std::min(r, cfg.r_max)
                                                  : std::max(r, cfg.r_max);
  }
  return radii;
}

std::array<double, 3> estimate_radii(const PointCloud& cloud,
                                     const BootstrapConfig& cfg,
                                     std::uint64_t seed) {
  cfg.validate();
  if (cloud.size() < 2) {
    throw Error(ErrorCode::DegenerateGeometry,
                "radius estimation needs at least 2 points");
  }
  Rng rng(seed);
  const auto idx = sample_without_replacement(
      cloud.size(), std::min(cfg.n_r, cloud.size()), rng);
  std::vector<Vec3> sample;
  sample.reserve(idx.size());
  for (std::size_t i : idx) sample.push_back(cloud[i]);
  return radii_from_sample(sample, cfg);
}

}  // namespace zeroreg
