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
// Command-line front end. Talks to the library only through zeroreg.h.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeroreg/zeroreg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library failure carrying the C status.
struct ApiError : std::runtime_error {
  ApiError(zr_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
  zr_status status;
};

void check(zr_status s, const std::string& context) {
  if (s != ZR_OK) {
    throw ApiError(s, context + ": " + zr_status_string(s) + ": " +
                          zr_last_error());
  }
}

template <class T, void (*F)(T*)>
struct Deleter {
  void operator()(T* p) const { F(p); }
};
using CloudPtr = std::unique_ptr<zr_cloud, Deleter<zr_cloud, zr_cloud_free>>;
using ConfigPtr =
    std::unique_ptr<zr_config, Deleter<zr_config, zr_config_free>>;
using ReportPtr =
    std::unique_ptr<zr_report, Deleter<zr_report, zr_report_free>>;
using PosesPtr = std::unique_ptr<zr_poses, Deleter<zr_poses, zr_poses_free>>;
using BenchPtr = std::unique_ptr<zr_bench, Deleter<zr_bench, zr_bench_free>>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  zr_string_free(s);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ApiError(ZR_ERR_IO, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw ApiError(ZR_ERR_IO, "write failed: " + path);
}

CloudPtr load_cloud(const std::string& path, const std::string& format) {
  zr_cloud* c = nullptr;
  check(zr_cloud_load(path.c_str(), format.empty() ? nullptr : format.c_str(),
                      &c),
        path);
  return CloudPtr(c);
}

ConfigPtr load_config(const std::string& path) {
  zr_config* c = nullptr;
  if (path.empty()) {
    check(zr_config_default(&c), "config");
  } else {
    check(zr_config_load(path.c_str(), &c), path);
  }
  return ConfigPtr(c);
}

void apply_overrides(zr_config* cfg, const std::vector<std::string>& sets) {
  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--set expects key=value, got '" + kv + "'");
    }
    std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    check(zr_config_set(cfg, key.c_str(), value.c_str()), "--set " + key);
  }
}

PosesPtr load_poses(const std::string& path) {
  zr_poses* p = nullptr;
  check(zr_poses_load(path.c_str(), nullptr, &p), path);
  for (size_t i = 0; i < zr_poses_warning_count(p); ++i) {
    std::cerr << "warning: " << path << ": " << zr_poses_warning(p, i) << "\n";
  }
  return PosesPtr(p);
}

// Source-to-target pose from world poses T_i (source) and T_j (target).
void relative_gt(const zr_poses* poses, size_t i, size_t j, double gt[12]) {
  double ti[12], tj[12];
  check(zr_poses_get(poses, i, ti), "gt index");
  check(zr_poses_get(poses, j, tj), "gt index");
  zr_pose_relative(tj, ti, gt);
}

void print_pose(const double m[12]) {
  for (int r = 0; r < 3; ++r) {
    std::printf("  %12.6f %12.6f %12.6f %12.6f\n", m[r * 4], m[r * 4 + 1],
                m[r * 4 + 2], m[r * 4 + 3]);
  }
}

std::pair<size_t, size_t> parse_index_pair(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw UsageError("--gt-index expects i,j, got '" + text + "'");
  }
  try {
    size_t pos = 0;
    unsigned long i = std::stoul(text.substr(0, comma), &pos);
    if (pos != comma) throw std::invalid_argument("i");
    std::string rest = text.substr(comma + 1);
    unsigned long j = std::stoul(rest, &pos);
    if (pos != rest.size()) throw std::invalid_argument("j");
    return {i, j};
  } catch (const std::logic_error&) {
    throw UsageError("--gt-index expects i,j, got '" + text + "'");
  }
}

struct RegisterArgs {
  std::string source, target, format, gt, gt_index, config, json, criteria;
  std::vector<std::string> sets;
  bool no_timing = false;
};

int run_register(const RegisterArgs& a) {
  auto cfg = load_config(a.config);
  apply_overrides(cfg.get(), a.sets);
  auto src = load_cloud(a.source, a.format);
  auto tgt = load_cloud(a.target, a.format);

  zr_report* raw = nullptr;
  check(zr_register(src.get(), tgt.get(), cfg.get(), &raw), "register");
  ReportPtr report(raw);

  if (!a.gt.empty()) {
    auto poses = load_poses(a.gt);
    double gt[12];
    if (!a.gt_index.empty()) {
      auto [i, j] = parse_index_pair(a.gt_index);
      relative_gt(poses.get(), i, j, gt);
    } else if (zr_poses_size(poses.get()) == 1) {
      check(zr_poses_get(poses.get(), 0, gt), "gt");
    } else {
      throw UsageError("--gt with several poses needs --gt-index i,j");
    }
    double tt = 0, tr = 0;
    check(zr_criteria_parse(a.criteria.c_str(), &tt, &tr), "--criteria");
    if (zr_report_has_pose(report.get())) {
      check(zr_report_set_ground_truth(report.get(), gt, tt, tr), "gt");
    }
  }

  zr_status status = zr_report_status(report.get());
  std::printf("status: %s\n", zr_status_string(status));
  if (zr_report_has_pose(report.get())) {
    double pose[12];
    check(zr_report_pose(report.get(), pose), "pose");
    std::printf("pose:\n");
    print_pose(pose);
  }
  double rte, rre;
  int success;
  if (zr_report_ground_truth(report.get(), &rte, &rre, &success) == ZR_OK) {
    std::printf("rte: %.4f m  rre: %.4f deg  success: %s\n", rte, rre,
                success ? "yes" : "no");
  }
  std::printf("time: %.1f ms\n", zr_report_total_ms(report.get()));

  if (!a.json.empty()) {
    char* json = nullptr;
    check(zr_report_json(report.get(), a.no_timing ? 0 : 1, &json), "json");
    write_file(a.json, take_string(json));
  }
  return status == ZR_OK ? kExitOk : kExitFailure;
}

struct ManifestLine {
  std::string source, target, gt;
  size_t i = 0, j = 0;
};

std::vector<ManifestLine> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ApiError(ZR_ERR_IO, "cannot open " + path);
  std::vector<ManifestLine> lines;
  std::string line;
  for (size_t n = 1; std::getline(in, line); ++n) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    ManifestLine m;
    if (!(ss >> m.source)) continue;
    std::string extra;
    if (!(ss >> m.target >> m.gt >> m.i >> m.j) || (ss >> extra)) {
      throw ApiError(ZR_ERR_PARSE,
                     path + ":" + std::to_string(n) +
                         ": expected 'src tgt gt_pose_path src_idx tgt_idx'");
    }
    lines.push_back(m);
  }
  return lines;
}

// Relative paths in the manifest are taken from the manifest's directory.
std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || p[0] == '/') return p;
  auto slash = base.rfind('/');
  return slash == std::string::npos ? p : base.substr(0, slash + 1) + p;
}

struct BenchArgs {
  std::string manifest, criteria = "default", csv, json, config, format;
  std::vector<std::string> sets;
};

int run_bench(const BenchArgs& a) {
  auto cfg = load_config(a.config);
  apply_overrides(cfg.get(), a.sets);
  double tt = 0, tr = 0;
  check(zr_criteria_parse(a.criteria.c_str(), &tt, &tr), "--criteria");
  zr_bench* braw = nullptr;
  check(zr_bench_create(tt, tr, &braw), "bench");
  BenchPtr bench(braw);

  auto lines = read_manifest(a.manifest);
  std::string cached_gt_path;
  PosesPtr poses;
  for (size_t k = 0; k < lines.size(); ++k) {
    const auto& m = lines[k];
    std::string gt_path = resolve(a.manifest, m.gt);
    if (gt_path != cached_gt_path) {
      poses = load_poses(gt_path);
      cached_gt_path = gt_path;
    }
    double gt[12];
    relative_gt(poses.get(), m.i, m.j, gt);
    auto src = load_cloud(resolve(a.manifest, m.source), a.format);
    auto tgt = load_cloud(resolve(a.manifest, m.target), a.format);
    zr_report* raw = nullptr;
    check(zr_register(src.get(), tgt.get(), cfg.get(), &raw), "register");
    ReportPtr report(raw);
    check(zr_bench_add(bench.get(), report.get(), gt), "bench");
    if (zr_report_has_pose(report.get())) {
      zr_report_set_ground_truth(report.get(), gt, tt, tr);
    }
    double rte = 0, rre = 0;
    int ok = 0;
    zr_report_ground_truth(report.get(), &rte, &rre, &ok);
    std::printf("pair %zu: %s rte=%.4f rre=%.4f %s\n", k,
                zr_status_string(zr_report_status(report.get())), rte, rre,
                ok ? "success" : "fail");
  }

  char* summary = nullptr;
  check(zr_bench_summary_json(bench.get(), &summary), "summary");
  std::string json = take_string(summary);
  std::printf("%s", json.c_str());
  if (!a.json.empty()) write_file(a.json, json);
  if (!a.csv.empty()) {
    char* csv = nullptr;
    check(zr_bench_csv(bench.get(), &csv), "csv");
    write_file(a.csv, take_string(csv));
  }
  return kExitOk;
}

struct SynthArgs {
  std::string kind, criteria, config, csv;
  std::vector<std::string> sets;
  size_t trials = 10;
  uint64_t seed = 1000;
  bool single_scale = false;
  double overlap = 0.6;
  bool verbose = false;
};

int run_synth(const SynthArgs& a) {
  auto cfg = load_config(a.config);
  apply_overrides(cfg.get(), a.sets);
  if (a.single_scale) check(zr_config_set(cfg.get(), "scales", "middle"), "scales");
  std::string criteria = a.criteria;
  if (criteria.empty()) {
    criteria = a.kind == "indoor_room" ? "0.3,15" : "2,5";
  }
  double tt = 0, tr = 0;
  check(zr_criteria_parse(criteria.c_str(), &tt, &tr), "--criteria");
  zr_bench* braw = nullptr;
  check(zr_bench_create(tt, tr, &braw), "bench");
  BenchPtr bench(braw);

  zr_synth_params params = zr_synth_params_default();
  params.overlap = a.overlap;
  for (size_t t = 0; t < a.trials; ++t) {
    zr_cloud *sraw = nullptr, *traw = nullptr;
    double gt[12];
    check(zr_synth(a.kind.c_str(), &params, a.seed + t, &sraw, &traw, gt),
          "synth");
    CloudPtr src(sraw), tgt(traw);
    zr_report* raw = nullptr;
    check(zr_register(src.get(), tgt.get(), cfg.get(), &raw), "register");
    ReportPtr report(raw);
    check(zr_bench_add(bench.get(), report.get(), gt), "bench");
    if (a.verbose) {
      double rte = 0, rre = 0;
      int ok = 0;
      if (zr_report_has_pose(report.get())) {
        zr_report_set_ground_truth(report.get(), gt, tt, tr);
        zr_report_ground_truth(report.get(), &rte, &rre, &ok);
      }
      std::printf("trial %zu: rte=%.4f rre=%.4f %s %.0f ms\n", t, rte, rre,
                  ok ? "success" : "fail", zr_report_total_ms(report.get()));
    }
  }
  char* summary = nullptr;
  check(zr_bench_summary_json(bench.get(), &summary), "summary");
  std::printf("%s", take_string(summary).c_str());
  if (!a.csv.empty()) {
    char* csv = nullptr;
    check(zr_bench_csv(bench.get(), &csv), "csv");
    write_file(a.csv, take_string(csv));
  }
  return kExitOk;
}

int run_demo_lshape() {
  char* out = nullptr;
  check(zr_lshape_demo(&out), "demo-lshape");
  std::printf("%s", take_string(out).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeroreg: zero-shot point cloud registration"};
  app.require_subcommand(1);

  RegisterArgs reg;
  auto* reg_cmd = app.add_subcommand("register", "Register two point clouds");
  reg_cmd->add_option("source", reg.source, "Source cloud")->required();
  reg_cmd->add_option("target", reg.target, "Target cloud")->required();
  reg_cmd->add_option("--format", reg.format,
                      "ply_ascii|ply_binary_le|kitti_bin|xyz_text");
  reg_cmd->add_option("--gt", reg.gt, "Ground-truth pose file");
  reg_cmd->add_option("--gt-index", reg.gt_index,
                      "Source,target indices into the pose file");
  reg_cmd->add_option("--criteria", reg.criteria, "Preset or tau_t,tau_r")
      ->default_val("default");
  reg_cmd->add_option("--config", reg.config, "Config file");
  reg_cmd->add_option("--set", reg.sets, "Override a config key (key=value)")->allow_extra_args(false);
  reg_cmd->add_option("--json", reg.json, "Write the JSON report here");
  reg_cmd->add_flag("--no-timing", reg.no_timing,
                    "Omit timing fields from the JSON report");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Evaluate a pairs manifest");
  bench_cmd->add_option("manifest", bench.manifest,
                        "Lines of: src tgt gt_pose_path src_idx tgt_idx")
      ->required();
  bench_cmd->add_option("--criteria", bench.criteria, "Preset or tau_t,tau_r");
  bench_cmd->add_option("--format", bench.format, "Cloud format override");
  bench_cmd->add_option("--config", bench.config, "Config file");
  bench_cmd->add_option("--set", bench.sets, "Override a config key")->allow_extra_args(false);
  bench_cmd->add_option("--csv", bench.csv, "Write per-pair CSV here");
  bench_cmd->add_option("--json", bench.json, "Write the summary JSON here");

  SynthArgs synth;
  auto* synth_cmd =
      app.add_subcommand("synth", "Register seeded synthetic scene pairs");
  synth_cmd->add_option("kind", synth.kind, "indoor_room|lidar_sweep")
      ->required()
      ->check(CLI::IsMember({"indoor_room", "lidar_sweep"}));
  synth_cmd->add_option("--trials", synth.trials, "Number of pairs")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "Scene seed of the first pair");
  synth_cmd->add_option("--overlap", synth.overlap, "Crop overlap in (0, 1]")
      ->check(CLI::Range(1e-6, 1.0));
  synth_cmd->add_option("--criteria", synth.criteria,
                        "Preset or tau_t,tau_r (default per scene kind)");
  synth_cmd->add_flag("--single-scale", synth.single_scale,
                      "Use only the middle scale");
  synth_cmd->add_option("--config", synth.config, "Config file");
  synth_cmd->add_option("--set", synth.sets, "Override a config key")->allow_extra_args(false);
  synth_cmd->add_option("--csv", synth.csv, "Write per-pair CSV here");
  synth_cmd->add_flag("-v,--verbose", synth.verbose, "Print every trial");

  app.add_subcommand("demo-lshape", "Print the L-shape ambiguity table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*reg_cmd) return run_register(reg);
    if (*bench_cmd) return run_bench(bench);
    if (*synth_cmd) return run_synth(synth);
    return run_demo_lshape();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool usage = e.status == ZR_ERR_PARAMETER || e.status == ZR_ERR_PARSE ||
                 e.status == ZR_ERR_IO;
    return usage ? kExitUsage : kExitFailure;
  }
}
