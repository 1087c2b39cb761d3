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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zeroreg/cloud.hpp"
#include "zeroreg/geometry.hpp"

namespace zeroreg {

enum class CloudFormat { PlyAscii, PlyBinaryLe, KittiBin, XyzText };

const char* to_string(CloudFormat format);
std::optional<CloudFormat> parse_cloud_format(std::string_view name);

// .bin -> kitti_bin, .xyz/.txt -> xyz_text, .ply -> ply (encoding read from
// the header on load, binary on save).
std::optional<CloudFormat> format_from_path(std::string_view path);

// PLY reads x/y/z (and intensity if present) from the vertex element, which
// must come first. Malformed input throws Parse naming the line or byte
// offset; non-finite coordinates are rejected.
PointCloud read_cloud(std::istream& in, CloudFormat format);
PointCloud load_cloud(const std::string& path,
                      std::optional<CloudFormat> format = std::nullopt);

// Coordinates are written as 32-bit floats.
void write_cloud(std::ostream& out, const PointCloud& cloud, CloudFormat format);
void save_cloud(const std::string& path, const PointCloud& cloud,
                std::optional<CloudFormat> format = std::nullopt);

enum class PoseFormat { KittiOdometry, Tum };

const char* to_string(PoseFormat format);
std::optional<PoseFormat> parse_pose_format(std::string_view name);

// Rotations off SO(3) by more than 1e-3 (max-abs of R^T R - I) are
// re-orthonormalized and reported through `warnings`; reflections and wrong
// field counts throw Parse.
std::vector<Pose> read_poses(std::istream& in, PoseFormat format,
                             std::vector<std::string>* warnings = nullptr);
std::vector<Pose> load_poses(const std::string& path,
                             std::optional<PoseFormat> format = std::nullopt,
                             std::vector<std::string>* warnings = nullptr);

void write_poses(std::ostream& out, const std::vector<Pose>& poses,
                 PoseFormat format);
void save_poses(const std::string& path, const std::vector<Pose>& poses,
                PoseFormat format);

// Nearest rotation in the Frobenius sense.
Mat3 orthonormalize(const Mat3& m);

}  // namespace zeroreg
