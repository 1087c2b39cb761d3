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
#include "zeroreg/patch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zeroreg/geometry.hpp"
#include "zeroreg/parallel.hpp"

namespace zeroreg {

namespace {

constexpr std::size_t kMinPatchPoints = 5;

std::size_t bin_index(double value, double lo, double hi, std::size_t bins) {
  const double t = (value - lo) / (hi - lo) * static_cast<double>(bins);
  if (!(t > 0.0)) return 0;
  return std::min(bins - 1, static_cast<std::size_t>(t));
}

std::size_t sector_index(double x, double y, std::size_t sectors) {
  const double phi = std::atan2(y, x);  // [-pi, pi]
  const double t =
      (phi + std::numbers::pi) / (2.0 * std::numbers::pi) * static_cast<double>(sectors);
  if (!(t > 0.0)) return 0;
  const auto w = static_cast<std::size_t>(t);
  return w >= sectors ? w - sectors : w;  // phi == pi wraps onto -pi
}

}  // namespace

HandcraftedBackend::HandcraftedBackend(CylShape shape) : shape_(shape) {
  if (shape_.height < 1 || shape_.sectors < 2 || shape_.channels < 5) {
    throw Error(ErrorCode::Parameter,
                "cylindrical map needs H >= 1, W >= 2 and D >= 5");
  }
}

PatchDescriptor HandcraftedBackend::describe(const Patch& patch,
                                             const PatchKey& key) const {
  if (patch.points.empty()) {
    throw Error(ErrorCode::SparsePatch, "cannot describe an empty patch");
  }
  const std::size_t H = shape_.height;
  const std::size_t W = shape_.sectors;
  const std::size_t D = shape_.channels;
  const std::size_t radial_bins = D - 4;
  const double n = static_cast<double>(patch.points.size());

  std::vector<double> cyl(shape_.size(), 0.0);
  std::vector<double> count(shape_.cells(), 0.0);
  std::vector<double> zsum(shape_.cells(), 0.0);
  std::vector<double> rhosum(shape_.cells(), 0.0);
  std::vector<std::vector<double>> zs(shape_.cells());

  for (const auto& p : patch.points) {
    const double rho = std::hypot(p.x(), p.y());
    const std::size_t h = bin_index(p.z(), -1.0, 1.0, H);
    const std::size_t w = sector_index(p.x(), p.y(), W);
    const std::size_t cell = h * W + w;
    const std::size_t r = bin_index(rho, 0.0, 1.0, radial_bins);
    cyl[cell * D + r] += 1.0;
    count[cell] += 1.0;
    zsum[cell] += p.z();
    rhosum[cell] += rho;
    zs[cell].push_back(p.z());
  }
  for (std::size_t cell = 0; cell < shape_.cells(); ++cell) {
    double* c = &cyl[cell * D];
    for (std::size_t r = 0; r < radial_bins; ++r) c[r] *= static_cast<double>(shape_.cells()) / n;
    if (count[cell] == 0.0) continue;
    const double mean_z = zsum[cell] / count[cell];
    double var = 0.0;
    for (double z : zs[cell]) var += (z - mean_z) * (z - mean_z);
    c[D - 4] = count[cell] / n;
    c[D - 3] = mean_z;
    c[D - 2] = std::sqrt(var / count[cell]);
    c[D - 1] = rhosum[cell] / count[cell];
  }

  PatchDescriptor out;
  out.shape = shape_;
  out.keypoint_index = key.keypoint_index;
  out.cyl.assign(cyl.begin(), cyl.end());
  std::vector<double> mean(D, 0.0);
  for (std::size_t cell = 0; cell < shape_.cells(); ++cell) {
    for (std::size_t d = 0; d < D; ++d) mean[d] += cyl[cell * D + d];
  }
  double norm2 = 0.0;
  for (double& m : mean) {
    m /= static_cast<double>(shape_.cells());
    norm2 += m * m;
  }
  const double norm = std::sqrt(norm2);
  out.vec.resize(D, 0.0f);
  if (norm > 0.0) {
    for (std::size_t d = 0; d < D; ++d) {
      out.vec[d] = static_cast<float>(mean[d] / norm);
    }
  }
  return out;
}

Patch extract_patch(const SpatialIndex& index, const Vec3& keypoint,
                    double radius, std::size_t n_patch, std::uint64_t seed,
                    Scale scale) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::Parameter, "patch radius must be positive");
  }
  if (n_patch < kMinPatchPoints) {
    throw Error(ErrorCode::Parameter, "N_patch must be at least 5");
  }
  auto neighbors = index.radius_neighbors(keypoint, radius);
  if (neighbors.size() < kMinPatchPoints) {
    std::ostringstream msg;
    msg << "patch has " << neighbors.size() << " neighbors (< "
        << kMinPatchPoints << ")";
    throw Error(ErrorCode::SparsePatch, msg.str());
  }
  if (neighbors.size() > n_patch) {
    Rng rng(seed);
    const auto keep = sample_without_replacement(neighbors.size(), n_patch, rng);
    std::vector<std::size_t> kept;
    kept.reserve(keep.size());
    for (std::size_t k : keep) kept.push_back(neighbors[k]);
    neighbors = std::move(kept);
  }
  std::vector<Vec3> raw;
  raw.reserve(neighbors.size());
  for (std::size_t i : neighbors) raw.push_back(index.points()[i]);

  Patch patch;
  patch.center = keypoint;
  patch.scale = scale;
  patch.radius = radius;
  try {
    patch.frame = pca(raw, keypoint);
  } catch (const Error& e) {
    throw Error(ErrorCode::SparsePatch, e.what());
  }
  patch.alignment = align_to_z(patch.frame.v3());
  patch.points.reserve(raw.size());
  for (const auto& p : raw) {
    Vec3 local = patch.alignment * (p - keypoint) / radius;
    // Rounding can push boundary points a hair past the unit ball.
    const double norm = local.norm();
    if (norm > 1.0) local /= norm;
    patch.points.push_back(local);
  }
  return patch;
}

PatchDescriptor describe(const Patch& patch, const DescriptorBackend& backend,
                         const PatchKey& key) {
  return backend.describe(patch, key);
}

ScaleEmbedding embed_scale(const PointCloud& cloud, const SpatialIndex& index,
                           Scale scale, double radius,
                           const DescriptorBackend& backend,
                           const EmbedOptions& options) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyInput, "embedding empty cloud");
  const auto scale_id = static_cast<std::uint64_t>(scale);
  Rng start_rng(derive_seed(options.seed, 0x5ca1e, scale_id));
  const std::size_t start =
      std::uniform_int_distribution<std::size_t>(0, cloud.size() - 1)(start_rng);
  const auto sampled = farthest_point_sampling(cloud, options.n_fps, start);

  struct Slot {
    bool ok = false;
    Patch patch;
    PatchDescriptor desc;
  };
  std::vector<Slot> slots(sampled.size());
  parallel_for(sampled.size(), [&](std::size_t i) {
    const PatchKey key{options.cloud_id, scale, static_cast<std::uint32_t>(i)};
    try {
      Patch patch = extract_patch(index, cloud[sampled[i]], radius,
                                  options.n_patch,
                                  derive_seed(options.seed, scale_id, i), scale);
      slots[i].desc = backend.describe(patch, key);
      if (!options.keep_patch_points) {
        patch.points.clear();
        patch.points.shrink_to_fit();
      }
      slots[i].patch = std::move(patch);
      slots[i].ok = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SparsePatch) throw;
    }
  });

  ScaleEmbedding out;
  out.scale = scale;
  out.radius = radius;
  out.sampled = sampled.size();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].ok) {
      ++out.dropped;
      continue;
    }
    out.keypoints.push_back(sampled[i]);
    out.patches.push_back(std::move(slots[i].patch));
    out.descriptors.push_back(std::move(slots[i].desc));
  }
  if (out.keypoints.empty()) {
    throw Error(ErrorCode::ScaleEmpty,
                std::string("every patch is sparse at the ") + to_string(scale) +
                    " scale");
  }
  return out;
}

std::array<ScaleEmbedding, 3> embed_cloud(const PointCloud& cloud,
                                          const std::array<double, 3>& radii,
                                          const DescriptorBackend& backend,
                                          const EmbedOptions& options) {
  const SpatialIndex index(cloud.points());
  std::array<ScaleEmbedding, 3> out;
  std::size_t empty = 0;
  for (Scale scale : kAllScales) {
    const auto s = static_cast<std::size_t>(scale);
    try {
      out[s] = embed_scale(cloud, index, scale, radii[s], backend, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ScaleEmpty) throw;
      out[s] = ScaleEmbedding{};
      out[s].scale = scale;
      out[s].radius = radii[s];
      ++empty;
    }
  }
  if (empty == 3) {
    throw Error(ErrorCode::ScaleEmpty, "every scale produced sparse patches");
  }
  return out;
}

}  // namespace zeroreg
