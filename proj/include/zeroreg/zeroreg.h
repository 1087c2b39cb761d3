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
#ifndef ZEROREG_ZEROREG_H_
#define ZEROREG_ZEROREG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ZR_BUILDING_LIBRARY)
#define ZR_API __declspec(dllexport)
#else
#define ZR_API __declspec(dllimport)
#endif
#else
#define ZR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Every fallible call returns a zr_status. On failure the message is kept in
// a thread-local buffer readable through zr_last_error().
typedef enum zr_status {
  ZR_OK = 0,
  ZR_ERR_PARAMETER = 1,
  ZR_ERR_EMPTY_INPUT = 2,
  ZR_ERR_DEGENERATE_GEOMETRY = 3,
  ZR_ERR_OUT_OF_RANGE = 4,
  ZR_ERR_SPARSE_PATCH = 5,
  ZR_ERR_SCALE_EMPTY = 6,
  ZR_ERR_INSUFFICIENT_CONSENSUS = 7,
  ZR_ERR_INSUFFICIENT_DATA = 8,
  ZR_ERR_DEGENERATE_MODEL = 9,
  ZR_ERR_PARSE = 10,
  ZR_ERR_IO = 11,
  ZR_ERR_INTERNAL = 12,
} zr_status;

typedef struct zr_cloud zr_cloud;
typedef struct zr_config zr_config;
typedef struct zr_report zr_report;
typedef struct zr_poses zr_poses;
typedef struct zr_bench zr_bench;

// Poses cross the boundary as 12 doubles: row-major 3x4 [R | t].

ZR_API const char* zr_version(void);
ZR_API const char* zr_status_string(zr_status status);
ZR_API const char* zr_last_error(void);
ZR_API void zr_string_free(char* s);
// 0 restores the ZEROREG_NUM_THREADS / hardware default.
ZR_API void zr_set_num_threads(size_t n);

// Clouds. format is one of ply_ascii, ply_binary_le, kitti_bin, xyz_text;
// NULL picks it from the file extension.
ZR_API zr_status zr_cloud_load(const char* path, const char* format,
                               zr_cloud** out);
ZR_API zr_status zr_cloud_save(const zr_cloud* cloud, const char* path,
                               const char* format);
ZR_API zr_status zr_cloud_create(const double* xyz, size_t n, zr_cloud** out);
ZR_API size_t zr_cloud_size(const zr_cloud* cloud);
// Copies min(n, size) points into xyz (3 doubles each).
ZR_API zr_status zr_cloud_points(const zr_cloud* cloud, double* xyz, size_t n);
ZR_API void zr_cloud_free(zr_cloud* cloud);

// Configuration with default values; keys follow the config-file names.
ZR_API zr_status zr_config_default(zr_config** out);
ZR_API zr_status zr_config_load(const char* path, zr_config** out);
ZR_API zr_status zr_config_set(zr_config* cfg, const char* key,
                               const char* value);
ZR_API zr_status zr_config_format(const zr_config* cfg, char** out);
ZR_API void zr_config_free(zr_config* cfg);

// Runs the pipeline. A report is produced for every pipeline failure that has
// a report status; only invalid arguments leave *out NULL.
ZR_API zr_status zr_register(const zr_cloud* source, const zr_cloud* target,
                             const zr_config* cfg, zr_report** out);
// Pipeline outcome as a status code (ZR_OK when a pose was found normally).
ZR_API zr_status zr_report_status(const zr_report* report);
ZR_API int zr_report_has_pose(const zr_report* report);
ZR_API zr_status zr_report_pose(const zr_report* report, double pose[12]);
ZR_API zr_status zr_report_set_ground_truth(zr_report* report,
                                            const double gt[12],
                                            double tau_trans, double tau_rot);
ZR_API zr_status zr_report_ground_truth(const zr_report* report, double* rte,
                                        double* rre, int* success);
ZR_API zr_status zr_report_json(const zr_report* report, int include_timing,
                                char** out);
ZR_API double zr_report_total_ms(const zr_report* report);
ZR_API void zr_report_free(zr_report* report);

// Pose files. format is kitti_odometry or tum; NULL auto-detects.
ZR_API zr_status zr_poses_load(const char* path, const char* format,
                               zr_poses** out);
ZR_API size_t zr_poses_size(const zr_poses* poses);
ZR_API zr_status zr_poses_get(const zr_poses* poses, size_t i,
                              double pose[12]);
// Re-orthonormalization notices collected while loading.
ZR_API size_t zr_poses_warning_count(const zr_poses* poses);
ZR_API const char* zr_poses_warning(const zr_poses* poses, size_t i);
ZR_API void zr_poses_free(zr_poses* poses);
// out = a^-1 * b
ZR_API void zr_pose_relative(const double a[12], const double b[12],
                             double out[12]);

// Success thresholds: preset name or "tau_t,tau_r".
ZR_API zr_status zr_criteria_parse(const char* text, double* tau_trans,
                                   double* tau_rot);

// Benchmark accumulator over registered pairs.
ZR_API zr_status zr_bench_create(double tau_trans, double tau_rot,
                                 zr_bench** out);
// Adds the report's pair result against gt; reports without a pose count as
// failures.
ZR_API zr_status zr_bench_add(zr_bench* bench, const zr_report* report,
                              const double gt[12]);
ZR_API zr_status zr_bench_summary_json(const zr_bench* bench, char** out);
ZR_API zr_status zr_bench_csv(const zr_bench* bench, char** out);
ZR_API double zr_bench_success_rate(const zr_bench* bench);
ZR_API void zr_bench_free(zr_bench* bench);

typedef struct zr_synth_params {
  double overlap;
  double noise_voxel_fraction;
  double max_rotation_deg;
  double max_translation;
  double density_scale;
} zr_synth_params;

ZR_API zr_synth_params zr_synth_params_default(void);
// kind is indoor_room or lidar_sweep.
ZR_API zr_status zr_synth(const char* kind, const zr_synth_params* params,
                          uint64_t seed, zr_cloud** source, zr_cloud** target,
                          double gt[12]);

// Tab-separated kernel, mu, c_bar, overlap, cost, non_overlapped rows.
ZR_API zr_status zr_lshape_demo(char** out);

#ifdef __cplusplus
}
#endif

#endif  // ZEROREG_ZEROREG_H_
