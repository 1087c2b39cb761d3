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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zeroreg/cloud.hpp"
#include "zeroreg/geometry.hpp"

namespace zeroreg {

struct SuccessCriteria {
  double tau_trans = 2.0;  // meters
  double tau_rot = 5.0;    // degrees

  void validate() const;
};

// Named thresholds per benchmark dataset ("kitti", "eth", "scannet++i", ...).
std::optional<SuccessCriteria> find_criteria_preset(std::string_view name);

// Preset name (unknown names fall back to 2.0 m / 5 deg) or "tau_t,tau_r".
SuccessCriteria parse_criteria(std::string_view text);

// Geodesic angle between the rotations, degrees in [0, 180].
double rotation_error(const Mat3& r_hat, const Mat3& r_gt);

// ||t_gt - t_hat|| in meters.
double translation_error(const Vec3& t_hat, const Vec3& t_gt);

struct PairRecord {
  std::size_t index = 0;
  bool registered = true;  // false when the pipeline returned no pose
  double rte = 0.0;        // meters
  double rre = 0.0;        // degrees
  bool success = false;
  double time_ms = 0.0;
};

// Success iff rte <= tau_trans and rre <= tau_rot.
PairRecord evaluate_pair(const Pose& estimate, const Pose& gt,
                         const SuccessCriteria& criteria);

struct BenchmarkSummary {
  std::size_t n_pairs = 0;
  std::size_t n_success = 0;
  double success_rate = 0.0;  // percent
  double mean_rte_cm = 0.0;   // over successes
  double mean_rre_deg = 0.0;  // over successes
  bool squared_rte = false;   // mean_rte_cm holds the mean squared error (cm^2)
  double mean_time_ms = 0.0;
  std::vector<PairRecord> records;
};

BenchmarkSummary summarize(std::vector<PairRecord> records,
                           bool squared_rte = false);

// Greedy walk: from frame i, pair with the first later frame j displaced by
// at least tau_dist, then continue from j.
std::vector<std::pair<std::size_t, std::size_t>> make_pairs_by_distance(
    std::span<const Pose> poses, double tau_dist);

enum class SceneKind { IndoorRoom, LidarSweep };

const char* to_string(SceneKind kind);
std::optional<SceneKind> parse_scene_kind(std::string_view name);

struct SynthParams {
  double overlap = 0.6;  // shared fraction of each crop, (0, 1]
  // Noise sigma as a multiple of the voxel size estimated on the clean
  // source cloud; noise_sigma overrides it when set.
  double noise_voxel_fraction = 0.5;
  std::optional<double> noise_sigma;
  double max_rotation_deg = 180.0;
  double max_translation = 3.0;  // meters, uniform in a ball
  double density_scale = 1.0;    // multiplies the per-kind point density
  // Both crops take their points from one shared surface sample instead of
  // sampling the scene independently.
  bool shared_sampling = false;
  bool identity_transform = false;

  void validate() const;
};

struct SynthPair {
  PointCloud source;
  PointCloud target;
  Pose gt;  // maps source coordinates to target coordinates
  double noise_sigma = 0.0;
  double clean_voxel_size = 0.0;
};

SynthPair synth_scene(SceneKind kind, const SynthParams& params,
                      std::uint64_t seed);

}  // namespace zeroreg
