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
#include "zeroreg/zeroreg.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "zeroreg/bench.hpp"
#include "zeroreg/io.hpp"
#include "zeroreg/parallel.hpp"
#include "zeroreg/pipeline.hpp"
#include "zeroreg/solver.hpp"

struct zr_cloud {
  zeroreg::PointCloud cloud;
};

struct zr_config {
  zeroreg::PipelineConfig cfg;
};

struct zr_report {
  zeroreg::RegistrationReport report;
};

struct zr_poses {
  std::vector<zeroreg::Pose> poses;
  std::vector<std::string> warnings;
};

struct zr_bench {
  zeroreg::SuccessCriteria criteria;
  std::vector<zeroreg::PairRecord> records;
};

namespace {

thread_local std::string last_error;

zr_status to_status(zeroreg::ErrorCode code) {
  using zeroreg::ErrorCode;
  switch (code) {
    case ErrorCode::Parameter: return ZR_ERR_PARAMETER;
    case ErrorCode::EmptyInput: return ZR_ERR_EMPTY_INPUT;
    case ErrorCode::DegenerateGeometry: return ZR_ERR_DEGENERATE_GEOMETRY;
    case ErrorCode::OutOfRange: return ZR_ERR_OUT_OF_RANGE;
    case ErrorCode::SparsePatch: return ZR_ERR_SPARSE_PATCH;
    case ErrorCode::ScaleEmpty: return ZR_ERR_SCALE_EMPTY;
    case ErrorCode::InsufficientConsensus: return ZR_ERR_INSUFFICIENT_CONSENSUS;
    case ErrorCode::InsufficientData: return ZR_ERR_INSUFFICIENT_DATA;
    case ErrorCode::DegenerateModel: return ZR_ERR_DEGENERATE_MODEL;
    case ErrorCode::Parse: return ZR_ERR_PARSE;
    case ErrorCode::Io: return ZR_ERR_IO;
  }
  return ZR_ERR_INTERNAL;
}

zr_status fail(zr_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
zr_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ZR_OK;
  } catch (const zeroreg::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ZR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ZR_ERR_INTERNAL, e.what());
  }
}

zr_status null_argument(const char* name) {
  return fail(ZR_ERR_PARAMETER, std::string("null argument: ") + name);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

zeroreg::Pose pose_from(const double m[12]) {
  zeroreg::Pose p;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) p.rotation(r, c) = m[r * 4 + c];
    p.translation[r] = m[r * 4 + 3];
  }
  return p;
}

void pose_to(const zeroreg::Pose& p, double m[12]) {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[r * 4 + c] = p.rotation(r, c);
    m[r * 4 + 3] = p.translation[r];
  }
}

zr_status report_status_code(zeroreg::ReportStatus s) {
  using zeroreg::ReportStatus;
  switch (s) {
    case ReportStatus::Ok: return ZR_OK;
    case ReportStatus::InsufficientConsensus:
      return ZR_ERR_INSUFFICIENT_CONSENSUS;
    case ReportStatus::InsufficientData: return ZR_ERR_INSUFFICIENT_DATA;
    case ReportStatus::DegenerateGeometry: return ZR_ERR_DEGENERATE_GEOMETRY;
    case ReportStatus::ScaleEmpty: return ZR_ERR_SCALE_EMPTY;
    case ReportStatus::EmptyInput: return ZR_ERR_EMPTY_INPUT;
    case ReportStatus::DegenerateModel: return ZR_ERR_DEGENERATE_MODEL;
  }
  return ZR_ERR_INTERNAL;
}

std::optional<zeroreg::CloudFormat> cloud_format(const char* name) {
  if (!name) return std::nullopt;
  auto f = zeroreg::parse_cloud_format(name);
  if (!f) {
    throw zeroreg::Error(zeroreg::ErrorCode::Parameter,
                         std::string("unknown cloud format: ") + name);
  }
  return f;
}

}  // namespace

extern "C" {

const char* zr_version(void) { return "0.1.0"; }

const char* zr_status_string(zr_status status) {
  switch (status) {
    case ZR_OK: return "ok";
    case ZR_ERR_PARAMETER: return "parameter";
    case ZR_ERR_EMPTY_INPUT: return "empty_input";
    case ZR_ERR_DEGENERATE_GEOMETRY: return "degenerate_geometry";
    case ZR_ERR_OUT_OF_RANGE: return "out_of_range";
    case ZR_ERR_SPARSE_PATCH: return "sparse_patch";
    case ZR_ERR_SCALE_EMPTY: return "scale_empty";
    case ZR_ERR_INSUFFICIENT_CONSENSUS: return "insufficient_consensus";
    case ZR_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case ZR_ERR_DEGENERATE_MODEL: return "degenerate_model";
    case ZR_ERR_PARSE: return "parse";
    case ZR_ERR_IO: return "io";
    case ZR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* zr_last_error(void) { return last_error.c_str(); }

void zr_string_free(char* s) { std::free(s); }

void zr_set_num_threads(size_t n) { zeroreg::set_num_threads(n); }

zr_status zr_cloud_load(const char* path, const char* format, zr_cloud** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto cloud = zeroreg::load_cloud(path, cloud_format(format));
    *out = new zr_cloud{std::move(cloud)};
  });
}

zr_status zr_cloud_save(const zr_cloud* cloud, const char* path,
                        const char* format) {
  if (!cloud) return null_argument("cloud");
  if (!path) return null_argument("path");
  return guarded(
      [&] { zeroreg::save_cloud(path, cloud->cloud, cloud_format(format)); });
}

zr_status zr_cloud_create(const double* xyz, size_t n, zr_cloud** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  if (!xyz && n > 0) return null_argument("xyz");
  return guarded([&] {
    std::vector<zeroreg::Vec3> pts(n);
    for (size_t i = 0; i < n; ++i) {
      pts[i] = zeroreg::Vec3(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
    }
    *out = new zr_cloud{zeroreg::PointCloud(std::move(pts))};
  });
}

size_t zr_cloud_size(const zr_cloud* cloud) {
  return cloud ? cloud->cloud.size() : 0;
}

zr_status zr_cloud_points(const zr_cloud* cloud, double* xyz, size_t n) {
  if (!cloud) return null_argument("cloud");
  if (!xyz && n > 0) return null_argument("xyz");
  size_t m = std::min(n, cloud->cloud.size());
  for (size_t i = 0; i < m; ++i) {
    for (int k = 0; k < 3; ++k) xyz[3 * i + k] = cloud->cloud[i][k];
  }
  last_error.clear();
  return ZR_OK;
}

void zr_cloud_free(zr_cloud* cloud) { delete cloud; }

zr_status zr_config_default(zr_config** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new zr_config{}; });
}

zr_status zr_config_load(const char* path, zr_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new zr_config{zeroreg::load_config(path)}; });
}

zr_status zr_config_set(zr_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_argument("cfg");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] {
    zeroreg::PipelineConfig next = cfg->cfg;
    zeroreg::set_config_value(next, key, value);
    next.validate();
    cfg->cfg = std::move(next);
  });
}

zr_status zr_config_format(const zr_config* cfg, char** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = dup_string(zeroreg::format_config(cfg->cfg)); });
}

void zr_config_free(zr_config* cfg) { delete cfg; }

zr_status zr_register(const zr_cloud* source, const zr_cloud* target,
                      const zr_config* cfg, zr_report** out) {
  if (!source) return null_argument("source");
  if (!target) return null_argument("target");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    zeroreg::PipelineConfig defaults;
    const auto& c = cfg ? cfg->cfg : defaults;
    *out = new zr_report{
        zeroreg::register_clouds(source->cloud, target->cloud, c)};
  });
}

zr_status zr_report_status(const zr_report* report) {
  if (!report) return null_argument("report");
  return report_status_code(report->report.status);
}

int zr_report_has_pose(const zr_report* report) {
  return report && report->report.has_pose ? 1 : 0;
}

zr_status zr_report_pose(const zr_report* report, double pose[12]) {
  if (!report) return null_argument("report");
  if (!pose) return null_argument("pose");
  if (!report->report.has_pose) {
    return fail(ZR_ERR_PARAMETER, "report has no pose");
  }
  pose_to(report->report.pose, pose);
  last_error.clear();
  return ZR_OK;
}

zr_status zr_report_set_ground_truth(zr_report* report, const double gt[12],
                                     double tau_trans, double tau_rot) {
  if (!report) return null_argument("report");
  if (!gt) return null_argument("gt");
  return guarded([&] {
    zeroreg::SuccessCriteria criteria{tau_trans, tau_rot};
    criteria.validate();
    zeroreg::attach_ground_truth(report->report, pose_from(gt), criteria);
  });
}

zr_status zr_report_ground_truth(const zr_report* report, double* rte,
                                 double* rre, int* success) {
  if (!report) return null_argument("report");
  const auto& g = report->report.ground_truth;
  if (!g) return fail(ZR_ERR_PARAMETER, "no ground truth attached");
  if (rte) *rte = g->rte;
  if (rre) *rre = g->rre;
  if (success) *success = g->success ? 1 : 0;
  last_error.clear();
  return ZR_OK;
}

zr_status zr_report_json(const zr_report* report, int include_timing,
                         char** out) {
  if (!report) return null_argument("report");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(
        zeroreg::report_to_json(report->report, include_timing != 0));
  });
}

double zr_report_total_ms(const zr_report* report) {
  return report ? report->report.total_ms : 0.0;
}

void zr_report_free(zr_report* report) { delete report; }

zr_status zr_poses_load(const char* path, const char* format, zr_poses** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    std::optional<zeroreg::PoseFormat> f;
    if (format) {
      f = zeroreg::parse_pose_format(format);
      if (!f) {
        throw zeroreg::Error(zeroreg::ErrorCode::Parameter,
                             std::string("unknown pose format: ") + format);
      }
    }
    auto poses = std::make_unique<zr_poses>();
    poses->poses = zeroreg::load_poses(path, f, &poses->warnings);
    *out = poses.release();
  });
}

size_t zr_poses_size(const zr_poses* poses) {
  return poses ? poses->poses.size() : 0;
}

zr_status zr_poses_get(const zr_poses* poses, size_t i, double pose[12]) {
  if (!poses) return null_argument("poses");
  if (!pose) return null_argument("pose");
  if (i >= poses->poses.size()) {
    return fail(ZR_ERR_OUT_OF_RANGE, "pose index " + std::to_string(i) +
                                         " out of range (" +
                                         std::to_string(poses->poses.size()) +
                                         " poses)");
  }
  pose_to(poses->poses[i], pose);
  last_error.clear();
  return ZR_OK;
}

size_t zr_poses_warning_count(const zr_poses* poses) {
  return poses ? poses->warnings.size() : 0;
}

const char* zr_poses_warning(const zr_poses* poses, size_t i) {
  if (!poses || i >= poses->warnings.size()) return nullptr;
  return poses->warnings[i].c_str();
}

void zr_poses_free(zr_poses* poses) { delete poses; }

void zr_pose_relative(const double a[12], const double b[12], double out[12]) {
  pose_to(pose_from(a).inverse() * pose_from(b), out);
}

zr_status zr_criteria_parse(const char* text, double* tau_trans,
                            double* tau_rot) {
  if (!text) return null_argument("text");
  return guarded([&] {
    auto c = zeroreg::parse_criteria(text);
    if (tau_trans) *tau_trans = c.tau_trans;
    if (tau_rot) *tau_rot = c.tau_rot;
  });
}

zr_status zr_bench_create(double tau_trans, double tau_rot, zr_bench** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    zeroreg::SuccessCriteria c{tau_trans, tau_rot};
    c.validate();
    *out = new zr_bench{c, {}};
  });
}

zr_status zr_bench_add(zr_bench* bench, const zr_report* report,
                       const double gt[12]) {
  if (!bench) return null_argument("bench");
  if (!report) return null_argument("report");
  if (!gt) return null_argument("gt");
  return guarded([&] {
    const auto& r = report->report;
    zeroreg::PairRecord rec;
    if (r.has_pose) {
      rec = zeroreg::evaluate_pair(r.pose, pose_from(gt), bench->criteria);
    } else {
      rec.registered = false;
    }
    rec.index = bench->records.size();
    rec.time_ms = r.total_ms;
    bench->records.push_back(rec);
  });
}

zr_status zr_bench_summary_json(const zr_bench* bench, char** out) {
  if (!bench) return null_argument("bench");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(zeroreg::summary_to_json(zeroreg::summarize(bench->records)));
  });
}

zr_status zr_bench_csv(const zr_bench* bench, char** out) {
  if (!bench) return null_argument("bench");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(zeroreg::summary_to_csv(zeroreg::summarize(bench->records)));
  });
}

double zr_bench_success_rate(const zr_bench* bench) {
  return bench ? zeroreg::summarize(bench->records).success_rate : 0.0;
}

void zr_bench_free(zr_bench* bench) { delete bench; }

zr_synth_params zr_synth_params_default(void) {
  zeroreg::SynthParams p;
  return {p.overlap, p.noise_voxel_fraction, p.max_rotation_deg,
          p.max_translation, p.density_scale};
}

zr_status zr_synth(const char* kind, const zr_synth_params* params,
                   uint64_t seed, zr_cloud** source, zr_cloud** target,
                   double gt[12]) {
  if (!kind) return null_argument("kind");
  if (!source) return null_argument("source");
  if (!target) return null_argument("target");
  *source = nullptr;
  *target = nullptr;
  return guarded([&] {
    auto k = zeroreg::parse_scene_kind(kind);
    if (!k) {
      throw zeroreg::Error(zeroreg::ErrorCode::Parameter,
                           std::string("unknown scene kind: ") + kind);
    }
    zeroreg::SynthParams p;
    if (params) {
      p.overlap = params->overlap;
      p.noise_voxel_fraction = params->noise_voxel_fraction;
      p.max_rotation_deg = params->max_rotation_deg;
      p.max_translation = params->max_translation;
      p.density_scale = params->density_scale;
    }
    auto pair = zeroreg::synth_scene(*k, p, seed);
    auto src = std::make_unique<zr_cloud>(zr_cloud{std::move(pair.source)});
    auto tgt = std::make_unique<zr_cloud>(zr_cloud{std::move(pair.target)});
    if (gt) pose_to(pair.gt, gt);
    *source = src.release();
    *target = tgt.release();
  });
}

zr_status zr_lshape_demo(char** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    std::string text = "kernel\tmu\tc_bar\toverlap\tcost\tnon_overlapped\n";
    char buf[160];
    for (const auto& row : zeroreg::lshape_ambiguity_demo()) {
      std::snprintf(buf, sizeof(buf), "%s\t%g\t%g\t%s\t%.6f\t%zu\n",
                    zeroreg::to_string(row.kernel), row.mu, row.c_bar,
                    zeroreg::to_string(row.overlap), row.cost,
                    row.non_overlapped);
      text += buf;
    }
    *out = dup_string(text);
  });
}

}  // extern "C"
