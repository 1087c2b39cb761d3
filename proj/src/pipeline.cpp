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
#include "zeroreg/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <memory>

#include "zeroreg/consensus.hpp"
#include "zeroreg/matching.hpp"
#include "zeroreg/parallel.hpp"

namespace zeroreg {

const char* to_string(ReportStatus status) {
  switch (status) {
    case ReportStatus::Ok: return "ok";
    case ReportStatus::InsufficientConsensus: return "insufficient_consensus";
    case ReportStatus::InsufficientData: return "insufficient_data";
    case ReportStatus::DegenerateGeometry: return "degenerate_geometry";
    case ReportStatus::ScaleEmpty: return "scale_empty";
    case ReportStatus::EmptyInput: return "empty_input";
    case ReportStatus::DegenerateModel: return "degenerate_model";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

class StageClock {
 public:
  explicit StageClock(RegistrationReport& r) : report_(r), last_(Clock::now()) {}

  void lap(const char* stage) {
    const auto now = Clock::now();
    report_.timing.push_back(
        {stage, std::chrono::duration<double, std::milli>(now - last_).count()});
    last_ = now;
  }

  // Time since the last lap was booked elsewhere.
  void restart() { last_ = Clock::now(); }

 private:
  RegistrationReport& report_;
  Clock::time_point last_;
};

ReportStatus status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return ReportStatus::EmptyInput;
    case ErrorCode::DegenerateGeometry: return ReportStatus::DegenerateGeometry;
    case ErrorCode::ScaleEmpty: return ReportStatus::ScaleEmpty;
    case ErrorCode::InsufficientConsensus: return ReportStatus::InsufficientConsensus;
    case ErrorCode::DegenerateModel: return ReportStatus::DegenerateModel;
    default: return ReportStatus::InsufficientData;
  }
}

bool is_reportable(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::DegenerateGeometry:
    case ErrorCode::ScaleEmpty:
    case ErrorCode::InsufficientConsensus:
    case ErrorCode::InsufficientData:
    case ErrorCode::DegenerateModel:
      return true;
    default:
      return false;
  }
}

FeatureList features_of(const ScaleEmbedding& e) {
  FeatureList out;
  out.reserve(e.descriptors.size());
  for (const auto& d : e.descriptors) out.push_back(d.vec);
  return out;
}

void run(const PointCloud& p, const PointCloud& q, const PipelineConfig& cfg,
         RegistrationReport& report) {
  StageClock clock(report);
  report.points_p = p.size();
  report.points_q = q.size();
  if (p.empty() || q.empty())
    throw Error(ErrorCode::EmptyInput, "source or target cloud is empty");

  const std::uint64_t seed = cfg.rng_seed;
  const auto voxel =
      compute_voxel_size(select_larger(p, q), cfg.bootstrap, derive_seed(seed, 100));
  report.bootstrap.voxel_size = voxel.voxel_size;
  report.bootstrap.sphericity = voxel.sphericity;
  report.bootstrap.spread = voxel.spread;
  report.bootstrap.branch = voxel.branch;
  clock.lap("bootstrap");

  const PointCloud vp = voxel_downsample(p, voxel.voxel_size);
  const PointCloud vq = voxel_downsample(q, voxel.voxel_size);
  report.voxelized_p = vp.size();
  report.voxelized_q = vq.size();
  clock.lap("voxelize");

  report.bootstrap.radii =
      estimate_radii(select_larger(vp, vq), cfg.bootstrap, derive_seed(seed, 101));
  clock.lap("radii");

  std::unique_ptr<DescriptorBackend> backend;
  if (cfg.descriptor_file.empty())
    backend = std::make_unique<HandcraftedBackend>(cfg.shape);
  else
    backend = std::make_unique<ExternalBackend>(cfg.shape, cfg.descriptor_file);

  EmbedOptions opt_p, opt_q;
  opt_p.n_fps = opt_q.n_fps = cfg.n_fps;
  opt_p.n_patch = opt_q.n_patch = cfg.n_patch;
  opt_p.seed = derive_seed(seed, 102, 0);
  opt_q.seed = derive_seed(seed, 102, 1);
  if (!cfg.descriptor_file.empty()) {
    opt_p.cloud_id = cloud_id(p);
    opt_q.cloud_id = cloud_id(q);
  }
  const SpatialIndex index_p(vp.points());
  const SpatialIndex index_q(vq.points());
  clock.lap("index");

  CandidateSet pooled;
  double embed_ms = 0.0, match_ms = 0.0;
  std::size_t nonempty = 0;
  for (Scale scale : cfg.scales) {
    const auto s = static_cast<std::size_t>(scale);
    ScaleStats stats;
    stats.scale = scale;
    stats.radius = report.bootstrap.radii[s];
    const auto t0 = Clock::now();
    ScaleEmbedding ep, eq;
    try {
      ep = embed_scale(vp, index_p, scale, stats.radius, *backend, opt_p);
      eq = embed_scale(vq, index_q, scale, stats.radius, *backend, opt_q);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ScaleEmpty) throw;
      stats.empty = true;
    }
    stats.keypoints_p = ep.keypoints.size();
    stats.keypoints_q = eq.keypoints.size();
    stats.dropped_p = ep.dropped;
    stats.dropped_q = eq.dropped;
    const auto t1 = Clock::now();
    embed_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (!stats.empty) {
      ++nonempty;
      const ScaleMatches matches =
          mutual_match(features_of(ep), features_of(eq), scale);
      stats.matches = matches.size();
      std::vector<CandidateTransform> cands(matches.size());
      parallel_for(matches.size(), [&](std::size_t k) {
        const auto [i, j] = matches.pairs[k];
        cands[k] = pair_transform(ep.patches[i], ep.descriptors[i],
                                  eq.patches[j], eq.descriptors[j],
                                  cfg.temperature);
        cands[k].p_index = i;
        cands[k].q_index = j;
      });
      for (std::size_t k = 0; k < matches.size(); ++k) {
        const auto [i, j] = matches.pairs[k];
        pooled.candidates.push_back(cands[k]);
        pooled.pairs.push_back({ep.patches[i].center, eq.patches[j].center});
      }
      match_ms += std::chrono::duration<double, std::milli>(Clock::now() - t1).count();
    }
    report.scales.push_back(stats);
  }
  report.candidates = pooled.size();
  report.timing.push_back({"embed", embed_ms});
  report.timing.push_back({"match", match_ms});
  clock.restart();
  if (nonempty == 0)
    throw Error(ErrorCode::ScaleEmpty, "every selected scale came out empty");
  if (pooled.size() < 3)
    throw Error(ErrorCode::InsufficientData,
                "fewer than 3 mutual matches across all scales");

  report.epsilon = cfg.epsilon.value_or(default_epsilon(voxel.voxel_size));
  std::vector<Correspondence> inlier_pairs;
  try {
    const auto consensus = consensus_maximize(pooled, report.epsilon,
                                              cfg.max_candidates,
                                              derive_seed(seed, 103));
    report.consensus_inliers = consensus.inlier_count;
    for (std::size_t i : consensus.inliers) inlier_pairs.push_back(pooled.pairs[i]);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientConsensus) throw;
    report.degraded = true;
    report.message = e.what();
    inlier_pairs = pooled.pairs;
  }
  clock.lap("consensus");

  RansacOptions ro;
  ro.epsilon = report.epsilon;
  ro.max_iters = cfg.ransac_max_iters;
  ro.seed = derive_seed(seed, 104);
  const auto ransac_result = ransac(inlier_pairs, ro);
  report.pose = ransac_result.pose;
  report.has_pose = true;
  report.ransac_inliers = ransac_result.inliers.size();
  report.ransac_iterations = ransac_result.iterations;
  report.ransac_low_confidence = ransac_result.low_confidence;
  clock.lap("ransac");

  if (cfg.refine && ransac_result.inliers.size() >= 3) {
    std::vector<Correspondence> in;
    for (std::size_t i : ransac_result.inliers) in.push_back(inlier_pairs[i]);
    IrlsOptions io;
    io.iters = cfg.irls_iters;
    io.gnc = cfg.gnc;
    const auto refined = irls_refine(in, report.pose, cfg.refine_kernel, io);
    report.pose = refined.pose;
    report.refined = true;
    report.refine_stalled = refined.stalled;
    clock.lap("refine");
  }
  report.status =
      report.degraded ? ReportStatus::InsufficientConsensus : ReportStatus::Ok;
}

}  // namespace

BootstrapResult bootstrap_pair(const PointCloud& p, const PointCloud& q,
                               const PipelineConfig& cfg) {
  cfg.validate();
  if (p.empty() || q.empty())
    throw Error(ErrorCode::EmptyInput, "source or target cloud is empty");
  const std::uint64_t seed = cfg.rng_seed;
  const auto voxel =
      compute_voxel_size(select_larger(p, q), cfg.bootstrap, derive_seed(seed, 100));
  BootstrapResult out;
  out.voxel_size = voxel.voxel_size;
  out.sphericity = voxel.sphericity;
  out.spread = voxel.spread;
  out.branch = voxel.branch;
  const PointCloud vp = voxel_downsample(p, voxel.voxel_size);
  const PointCloud vq = voxel_downsample(q, voxel.voxel_size);
  out.radii = estimate_radii(select_larger(vp, vq), cfg.bootstrap, derive_seed(seed, 101));
  return out;
}

RegistrationReport register_clouds(const PointCloud& p, const PointCloud& q,
                                   const PipelineConfig& cfg) {
  cfg.validate();
  RegistrationReport report;
  const auto start = Clock::now();
  try {
    run(p, q, cfg, report);
  } catch (const Error& e) {
    if (!is_reportable(e.code())) throw;
    report.status = status_for(e.code());
    report.message = e.what();
  }
  report.total_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return report;
}

void attach_ground_truth(RegistrationReport& report, const Pose& gt,
                         const SuccessCriteria& criteria) {
  criteria.validate();
  GroundTruthEval eval;
  eval.criteria = criteria;
  if (report.has_pose) {
    const auto rec = evaluate_pair(report.pose, gt, criteria);
    eval.rte = rec.rte;
    eval.rre = rec.rre;
    eval.success = rec.success;
  } else {
    eval.rte = eval.rre = std::nan("");
  }
  report.ground_truth = eval;
}

}  // namespace zeroreg
