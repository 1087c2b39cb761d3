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
#include <iosfwd>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "zeroreg/cloud.hpp"
#include "zeroreg/spatial_index.hpp"

namespace zeroreg {

// Neighborhood of a keypoint expressed in its local reference frame.
//
// `alignment` is the Rodrigues rotation taking frame.v3() to +z; stored
// points are alignment * (p - center) / radius, so every one has norm <= 1.
// The azimuth origin of this frame is arbitrary but consistent, which is what
// relative yaw recovery between two patches needs.
struct Patch {
  Vec3 center = Vec3::Zero();
  Scale scale = Scale::Middle;
  double radius = 0.0;
  PcaFrame frame;
  Mat3 alignment = Mat3::Identity();
  std::vector<Vec3> points;
};

// Shape of the cylindrical map: height bins x azimuth sectors x channels.
struct CylShape {
  std::size_t height = 7;
  std::size_t sectors = 20;
  std::size_t channels = 32;

  std::size_t cells() const { return height * sectors; }
  std::size_t size() const { return height * sectors * channels; }
  bool operator==(const CylShape&) const = default;
};

struct PatchDescriptor {
  CylShape shape;
  std::vector<float> cyl;  // [h][w][d], row-major
  std::vector<float> vec;  // unit length (all zero only for empty input)
  std::size_t keypoint_index = 0;

  float at(std::size_t h, std::size_t w, std::size_t d) const {
    return cyl[(h * shape.sectors + w) * shape.channels + d];
  }
};

// Identifies a patch for descriptor providers that work from stored data.
struct PatchKey {
  std::uint64_t cloud_id = 0;
  Scale scale = Scale::Middle;
  std::uint32_t keypoint_index = 0;

  bool operator==(const PatchKey&) const = default;
};

class DescriptorBackend {
 public:
  virtual ~DescriptorBackend() = default;
  virtual CylShape shape() const = 0;
  // Throws SparsePatch when no descriptor can be produced for the patch.
  virtual PatchDescriptor describe(const Patch& patch,
                                   const PatchKey& key) const = 0;
};

// Hand-built SO(2)-equivariant cylindrical descriptor.
//
// Cells: `height` uniform bins of z over [-1, 1] and `sectors` azimuth
// sectors starting at -pi (half-open bins, lower index on a boundary).
// Channels per cell:
//   [0, channels-4)  histogram of rho = sqrt(x^2 + y^2) over uniform bins of
//                    [0, 1], scaled by cells / patch count (its mean over
//                    cells is the patch-level normalized histogram)
//   channels-4       occupancy (cell count / patch count)
//   channels-3       mean z of the cell's points
//   channels-2       standard deviation of z
//   channels-1       mean rho
// The vector feature is the per-channel mean over all cells, L2-normalized,
// hence invariant to rotations about the local z axis by whole sectors. Under
// other angles only its histogram and occupancy means are unchanged.
class HandcraftedBackend : public DescriptorBackend {
 public:
  explicit HandcraftedBackend(CylShape shape = {});
  CylShape shape() const override { return shape_; }
  PatchDescriptor describe(const Patch& patch,
                           const PatchKey& key) const override;

 private:
  CylShape shape_;
};

// Descriptors loaded from a binary record file. Each record is
//   u64 cloud id | u8 scale | u32 keypoint index | H*W*D f32 | D f32
// with every field little-endian.
class ExternalBackend : public DescriptorBackend {
 public:
  ExternalBackend(CylShape shape, const std::string& path);
  ExternalBackend(CylShape shape, std::istream& in);

  CylShape shape() const override { return shape_; }
  std::size_t size() const { return records_.size(); }
  PatchDescriptor describe(const Patch& patch,
                           const PatchKey& key) const override;

 private:
  struct KeyHash {
    std::size_t operator()(const PatchKey& k) const;
  };
  void read(std::istream& in);

  CylShape shape_;
  std::unordered_map<PatchKey, PatchDescriptor, KeyHash> records_;
};

void write_descriptor_record(std::ostream& out, const PatchKey& key,
                             const PatchDescriptor& desc);

// FNV-1a over the little-endian float64 coordinates of the cloud.
std::uint64_t cloud_id(const PointCloud& cloud);

// Gathers the radius neighborhood of `keypoint`, subsamples it to n_patch
// points (seeded) when larger, fits the frame on the kept points and
// normalizes them. Fewer than 5 neighbors throws SparsePatch.
Patch extract_patch(const SpatialIndex& index, const Vec3& keypoint,
                    double radius, std::size_t n_patch, std::uint64_t seed,
                    Scale scale = Scale::Middle);

PatchDescriptor describe(const Patch& patch, const DescriptorBackend& backend,
                         const PatchKey& key = {});

struct EmbedOptions {
  std::size_t n_fps = 1500;
  std::size_t n_patch = 512;
  std::uint64_t seed = 0;
  std::uint64_t cloud_id = 0;
  bool keep_patch_points = false;
};

// Output of one scale for one cloud. patches[i], descriptors[i] and
// keypoints[i] describe the same keypoint; keypoints index into the cloud.
struct ScaleEmbedding {
  Scale scale = Scale::Middle;
  double radius = 0.0;
  std::vector<std::size_t> keypoints;
  std::vector<Patch> patches;
  std::vector<PatchDescriptor> descriptors;
  std::size_t sampled = 0;  // FPS count before sparse patches were dropped
  std::size_t dropped = 0;
};

// FPS (seeded start, independent per scale), patch extraction and
// description for one scale. Throws ScaleEmpty if every patch is sparse.
ScaleEmbedding embed_scale(const PointCloud& cloud, const SpatialIndex& index,
                           Scale scale, double radius,
                           const DescriptorBackend& backend,
                           const EmbedOptions& options);

// All three scales; scales that come out empty are reported with no
// keypoints. Throws ScaleEmpty only if every scale is empty.
std::array<ScaleEmbedding, 3> embed_cloud(const PointCloud& cloud,
                                          const std::array<double, 3>& radii,
                                          const DescriptorBackend& backend,
                                          const EmbedOptions& options);

}  // namespace zeroreg
