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
/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "zeroreg/zeroreg.h"

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

static void test_errors(void) {
  zr_cloud* c = NULL;
  EXPECT(zr_cloud_load(NULL, NULL, &c) == ZR_ERR_PARAMETER);
  EXPECT(strlen(zr_last_error()) > 0);
  EXPECT(zr_cloud_load("/nonexistent/file.ply", NULL, &c) == ZR_ERR_IO);
  EXPECT(c == NULL);
  EXPECT(zr_cloud_load("x.ply", "pcd", &c) == ZR_ERR_PARAMETER);
  EXPECT(strcmp(zr_status_string(ZR_ERR_PARSE), "parse") == 0);
  EXPECT(zr_cloud_size(NULL) == 0);
  zr_cloud_free(NULL);
  zr_report_free(NULL);
  zr_config_free(NULL);
}

static void test_config(void) {
  zr_config* cfg = NULL;
  EXPECT(zr_config_default(&cfg) == ZR_OK);
  EXPECT(zr_config_set(cfg, "N_FPS", "800") == ZR_OK);
  EXPECT(zr_config_set(cfg, "bogus", "1") == ZR_ERR_PARAMETER);
  EXPECT(zr_config_set(cfg, "tau_l", "0.9") == ZR_ERR_PARAMETER);
  char* text = NULL;
  EXPECT(zr_config_format(cfg, &text) == ZR_OK);
  EXPECT(text && strstr(text, "N_FPS = 800") != NULL);
  EXPECT(text && strstr(text, "tau_l = 0.005") != NULL);
  zr_string_free(text);
  zr_config_free(cfg);
}

static void test_cloud_roundtrip(void) {
  double xyz[] = {1, 2, 3, 4, 5, 6, -1, 0.5, 2};
  zr_cloud* c = NULL;
  EXPECT(zr_cloud_create(xyz, 3, &c) == ZR_OK);
  EXPECT(zr_cloud_size(c) == 3);
  const char* path = "zeroreg_capi_test.ply";
  EXPECT(zr_cloud_save(c, path, "ply_binary_le") == ZR_OK);
  zr_cloud* back = NULL;
  EXPECT(zr_cloud_load(path, NULL, &back) == ZR_OK);
  double out[9] = {0};
  EXPECT(zr_cloud_points(back, out, 3) == ZR_OK);
  for (int i = 0; i < 9; ++i) EXPECT(out[i] == (double)(float)xyz[i]);
  remove(path);
  double bad[] = {0, 0, NAN};
  zr_cloud* nan_cloud = NULL;
  EXPECT(zr_cloud_create(bad, 1, &nan_cloud) == ZR_ERR_PARAMETER);
  zr_cloud_free(back);
  zr_cloud_free(c);
}

static void test_register_and_bench(void) {
  zr_synth_params params = zr_synth_params_default();
  EXPECT(params.overlap == 0.6);
  params.density_scale = 0.5;
  zr_cloud *src = NULL, *tgt = NULL;
  double gt[12];
  EXPECT(zr_synth("lidar_sweep", &params, 11, &src, &tgt, gt) == ZR_OK);
  EXPECT(zr_synth("forest", &params, 11, &src, &tgt, gt) == ZR_ERR_PARAMETER);
  EXPECT(zr_synth("lidar_sweep", &params, 11, &src, &tgt, gt) == ZR_OK);

  zr_report* rep = NULL;
  EXPECT(zr_register(src, tgt, NULL, &rep) == ZR_OK);
  EXPECT(zr_report_status(rep) == ZR_OK);
  EXPECT(zr_report_has_pose(rep));
  double pose[12];
  EXPECT(zr_report_pose(rep, pose) == ZR_OK);
  double tt, tr;
  EXPECT(zr_criteria_parse("kitti", &tt, &tr) == ZR_OK);
  EXPECT(tt == 2.0 && tr == 5.0);
  EXPECT(zr_report_set_ground_truth(rep, gt, tt, tr) == ZR_OK);
  double rte = -1, rre = -1;
  int ok = -1;
  EXPECT(zr_report_ground_truth(rep, &rte, &rre, &ok) == ZR_OK);
  EXPECT(rte >= 0 && rre >= 0 && (ok == 0 || ok == 1));
  char* json = NULL;
  EXPECT(zr_report_json(rep, 1, &json) == ZR_OK);
  EXPECT(json && strstr(json, "\"schema\": 1") != NULL);
  EXPECT(json && strstr(json, "\"ground_truth\"") != NULL);
  zr_string_free(json);

  zr_bench* bench = NULL;
  EXPECT(zr_bench_create(tt, tr, &bench) == ZR_OK);
  EXPECT(zr_bench_add(bench, rep, gt) == ZR_OK);
  EXPECT(zr_bench_success_rate(bench) == (ok ? 100.0 : 0.0));
  char* csv = NULL;
  EXPECT(zr_bench_csv(bench, &csv) == ZR_OK);
  EXPECT(csv && strncmp(csv, "index,registered", 16) == 0);
  zr_string_free(csv);
  char* summary = NULL;
  EXPECT(zr_bench_summary_json(bench, &summary) == ZR_OK);
  EXPECT(summary && strstr(summary, "success_rate") != NULL);
  zr_string_free(summary);
  zr_bench_free(bench);
  zr_report_free(rep);

  zr_cloud* empty = NULL;
  EXPECT(zr_cloud_create(NULL, 0, &empty) == ZR_OK);
  EXPECT(zr_register(empty, tgt, NULL, &rep) == ZR_OK);
  EXPECT(zr_report_status(rep) == ZR_ERR_EMPTY_INPUT);
  EXPECT(!zr_report_has_pose(rep));
  EXPECT(zr_report_pose(rep, pose) == ZR_ERR_PARAMETER);
  zr_report_free(rep);
  zr_cloud_free(empty);
  zr_cloud_free(src);
  zr_cloud_free(tgt);
}

static void test_poses(void) {
  const char* path = "zeroreg_capi_poses.txt";
  FILE* f = fopen(path, "w");
  fputs("1 0 0 0 0 1 0 0 0 0 1 0\n1 0 0 10 0 1 0 0 0 0 1 0\n", f);
  fclose(f);
  zr_poses* poses = NULL;
  EXPECT(zr_poses_load(path, NULL, &poses) == ZR_OK);
  EXPECT(zr_poses_size(poses) == 2);
  double a[12], b[12], rel[12];
  EXPECT(zr_poses_get(poses, 0, a) == ZR_OK);
  EXPECT(zr_poses_get(poses, 1, b) == ZR_OK);
  EXPECT(zr_poses_get(poses, 2, b) == ZR_ERR_OUT_OF_RANGE);
  zr_pose_relative(b, a, rel);
  EXPECT(fabs(rel[3] + 10.0) < 1e-12);
  zr_poses_free(poses);
  remove(path);
}

static void test_lshape(void) {
  char* table = NULL;
  EXPECT(zr_lshape_demo(&table) == ZR_OK);
  EXPECT(table && strstr(table, "kernel\tmu") == table);
  zr_string_free(table);
}

int main(void) {
  test_errors();
  test_config();
  test_cloud_roundtrip();
  test_poses();
  test_lshape();
  test_register_and_bench();
  if (failures) {
    fprintf(stderr, "%d C API check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed (%s)\n", zr_version());
  return 0;
}
