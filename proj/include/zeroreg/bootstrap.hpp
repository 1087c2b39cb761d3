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

#include <array>
#include <cstdint>
#include <span>

#include "zeroreg/cloud.hpp"

namespace zeroreg {

// How r_max bounds the estimated radii. Truncate applies min(r, r_max), the
// documented intent of a maximum radius; LiteralMax applies max(r, r_max) and
// exists only for comparison runs.
enum class RadiusClamp { Truncate, LiteralMax };

struct BootstrapConfig {
  double kappa_spheric = 0.10;
  double kappa_disc = 0.15;
  double tau_v = 0.05;
  std::array<double, 3> tau_scales{0.005, 0.02, 0.05};  // local, middle, global
  double delta_v = 0.10;
  std::size_t n_r = 2000;
  double r_max = 5.0;
  RadiusClamp clamp = RadiusClamp::Truncate;

  // Throws Parameter if any invariant is violated.
  void validate() const;
};

enum class Branch { Spheric, Disc };

const char* to_string(Branch branch);

struct VoxelSizeEstimate {
  double voxel_size = 0.0;
  double sphericity = 0.0;
  double spread = 0.0;
  Branch branch = Branch::Spheric;
};

struct BootstrapResult {
  double voxel_size = 0.0;
  std::array<double, 3> radii{};  // local, middle, global
  double sphericity = 0.0;
  double spread = 0.0;
  Branch branch = Branch::Spheric;
};

// Larger cloud by cardinality; ties go to p. Throws EmptyInput if both are
// empty.
const PointCloud& select_larger(const PointCloud& p, const PointCloud& q);

// v = kappa * sqrt(s) where kappa depends on the sphericity branch and s is
// the extent of `sample` along the smallest principal axis.
VoxelSizeEstimate voxel_size_from_sample(std::span<const Vec3> sample,
                                         const BootstrapConfig& cfg);

// Samples delta_v of the cloud (at least 3 points, seeded, without
// replacement) and applies voxel_size_from_sample.
VoxelSizeEstimate compute_voxel_size(const PointCloud& cloud,
                                     const BootstrapConfig& cfg,
                                     std::uint64_t seed);

// Fraction of `sample` within distance r of a sample point, averaged over all
// sample points (self-inclusive).
//
// The radius for density tau is the exact minimizer of
// |avg_fraction(r) - tau|: avg_fraction only changes at pairwise distances,
// so the count of pairs closest to (tau*n^2 - n)/2 is located with an order
// statistic over all pairwise distances. Ties prefer the smaller radius.
double radius_for_density(std::span<const Vec3> sample, double tau);

// Per-scale radii for an already-sampled set, clamped by r_max.
std::array<double, 3> radii_from_sample(std::span<const Vec3> sample,
                                        const BootstrapConfig& cfg);

// Samples min(n_r, size) points (seeded) and applies radii_from_sample.
std::array<double, 3> estimate_radii(const PointCloud& cloud,
                                     const BootstrapConfig& cfg,
                                     std::uint64_t seed);

}  // namespace zeroreg
