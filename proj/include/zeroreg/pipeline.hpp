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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zeroreg/bench.hpp"
#include "zeroreg/bootstrap.hpp"
#include "zeroreg/patch.hpp"
#include "zeroreg/solver.hpp"

namespace zeroreg {

struct PipelineConfig {
  BootstrapConfig bootstrap;
  std::size_t n_fps = 1500;
  std::size_t n_patch = 512;
  CylShape shape;  // H, W, D
  double temperature = 0.1;
  std::optional<double> epsilon;  // default 2 * voxel size
  std::size_t max_candidates = 5000;
  std::size_t ransac_max_iters = 50000;
  std::uint64_t rng_seed = 0;
  std::vector<Scale> scales{Scale::Local, Scale::Middle, Scale::Global};
  // Optional IRLS post-step on the RANSAC inliers.
  bool refine = false;
  RobustKernel refine_kernel{KernelKind::Huber, 1.0, 1.0, 1.0};
  std::size_t irls_iters = 20;
  bool gnc = false;
  // Precomputed descriptors; empty selects the built-in handcrafted one.
  std::string descriptor_file;

  void validate() const;
};

// Sets one field from its config-file key (kappa_spheric, tau_l, N_FPS, ...).
// Throws Parameter for unknown keys and Parse for malformed values.
void set_config_value(PipelineConfig& cfg, std::string_view key,
                      std::string_view value);

// Flat "key = value" lines; '#' starts a comment.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::string& path);
std::string format_config(const PipelineConfig& cfg);

enum class ReportStatus {
  Ok,
  InsufficientConsensus,  // degraded: RANSAC ran on every pooled pair
  InsufficientData,
  DegenerateGeometry,
  ScaleEmpty,
  EmptyInput,
  DegenerateModel,
};

const char* to_string(ReportStatus status);

struct ScaleStats {
  Scale scale = Scale::Middle;
  double radius = 0.0;
  std::size_t keypoints_p = 0;
  std::size_t keypoints_q = 0;
  std::size_t dropped_p = 0;  // sparse patches
  std::size_t dropped_q = 0;
  std::size_t matches = 0;
  bool empty = false;
};

struct StageTime {
  std::string stage;
  double ms = 0.0;
};

struct GroundTruthEval {
  double rte = 0.0;  // meters
  double rre = 0.0;  // degrees
  bool success = false;
  SuccessCriteria criteria;
};

struct RegistrationReport {
  ReportStatus status = ReportStatus::Ok;
  std::string message;
  bool has_pose = false;
  Pose pose;

  BootstrapResult bootstrap;
  std::size_t points_p = 0;
  std::size_t points_q = 0;
  std::size_t voxelized_p = 0;
  std::size_t voxelized_q = 0;
  double epsilon = 0.0;

  std::vector<ScaleStats> scales;
  std::size_t candidates = 0;
  std::size_t consensus_inliers = 0;
  std::size_t ransac_inliers = 0;
  std::size_t ransac_iterations = 0;
  bool ransac_low_confidence = false;
  bool degraded = false;  // consensus fell back to all pooled pairs

  bool refined = false;
  bool refine_stalled = false;

  std::vector<StageTime> timing;
  double total_ms = 0.0;

  std::optional<GroundTruthEval> ground_truth;
};

// The pipeline's first three steps alone: voxel size from the larger raw
// cloud, voxelization of both, radii from the larger voxelized cloud. Uses the
// same seeds as register_clouds, so the result equals report.bootstrap.
BootstrapResult bootstrap_pair(const PointCloud& p, const PointCloud& q,
                               const PipelineConfig& cfg);

// Bootstrap, voxelize, estimate radii, embed every scale, match, pool the
// pairwise candidates, run consensus and RANSAC (then optionally IRLS).
// Failures are reported through status rather than thrown, except invalid
// configuration (Parameter) and unreadable descriptor files.
RegistrationReport register_clouds(const PointCloud& p, const PointCloud& q,
                                   const PipelineConfig& cfg);

void attach_ground_truth(RegistrationReport& report, const Pose& gt,
                         const SuccessCriteria& criteria);

std::string report_to_json(const RegistrationReport& report,
                           bool include_timing = true);

std::string summary_to_json(const BenchmarkSummary& summary);
std::string summary_to_csv(const BenchmarkSummary& summary);

}  // namespace zeroreg
