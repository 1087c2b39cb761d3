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
#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "zeroreg/io.hpp"
#include "zeroreg/pipeline.hpp"

using namespace zeroreg;

namespace {

std::string le_floats(std::initializer_list<float> values) {
  std::string out;
  for (float f : values) {
    char b[4];
    std::memcpy(b, &f, 4);
    out.append(b, 4);
  }
  return out;
}

std::string parse_message(const std::string& text, CloudFormat fmt) {
  std::istringstream in(text);
  try {
    read_cloud(in, fmt);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("kitti_bin record layout") {
  std::istringstream in(le_floats({1.0f, 2.0f, 3.0f, 0.5f}));
  auto c = read_cloud(in, CloudFormat::KittiBin);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == Vec3(1, 2, 3));
  REQUIRE(c.has_intensity());
  CHECK(c.intensity()[0] == 0.5f);
  auto msg = parse_message(le_floats({1.0f, 2.0f, 3.0f, 0.5f, 7.0f}), CloudFormat::KittiBin);
  CHECK(msg.find("byte offset 16") != std::string::npos);
  msg = parse_message(le_floats({1.0f, 2.0f, 3.0f, 0.5f, 1.0f, NAN, 3.0f, 0.5f}), CloudFormat::KittiBin);
  CHECK(msg.find("byte offset 16") != std::string::npos);
}

TEST_CASE("ply ascii with zero vertices is an empty cloud") {
  std::istringstream in(
      "ply\nformat ascii 1.0\nelement vertex 0\nproperty float x\n"
      "property float y\nproperty float z\nend_header\n");
  auto c = read_cloud(in, CloudFormat::PlyAscii);
  CHECK(c.empty());
  auto rep = register_clouds(c, PointCloud({Vec3(0, 0, 0)}), PipelineConfig{});
  CHECK(rep.status == ReportStatus::EmptyInput);
  CHECK_FALSE(rep.has_pose);
}

TEST_CASE("ply parsing: extra properties, intensity and errors") {
  std::istringstream in(
      "ply\nformat ascii 1.0\ncomment test\nelement vertex 2\nproperty float x\n"
      "property float nx\nproperty float y\nproperty float z\nproperty float intensity\n"
      "element face 0\nproperty list uchar int vertex_indices\nend_header\n"
      "1 9 2 3 0.5\n4 9 5 6 0.25\n");
  auto c = read_cloud(in, CloudFormat::PlyAscii);
  REQUIRE(c.size() == 2);
  CHECK(c[1] == Vec3(4, 5, 6));
  CHECK(c.intensity()[1] == 0.25f);

  const std::string header =
      "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\n"
      "property float y\nproperty float z\nend_header\n";
  auto msg = parse_message(header + "1 2 3\n4 5\n", CloudFormat::PlyAscii);
  CHECK(msg.find("line 9") != std::string::npos);
  msg = parse_message(header + "1 2 3\n4 nan 6\n", CloudFormat::PlyAscii);
  CHECK(msg.find("line 9") != std::string::npos);
  parse_message("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nend_header\n1\n",
                CloudFormat::PlyAscii);
  parse_message("not a ply\n", CloudFormat::PlyAscii);

  const std::string bin_header =
      "ply\nformat binary_little_endian 1.0\nelement vertex 2\nproperty float x\n"
      "property float y\nproperty float z\nend_header\n";
  msg = parse_message(bin_header + le_floats({1, 2, 3, 4, 5}), CloudFormat::PlyBinaryLe);
  CHECK(msg.find("byte offset " + std::to_string(bin_header.size() + 12)) != std::string::npos);
}

TEST_CASE("xyz text parsing") {
  std::istringstream in("# header\n1 2 3 0.25\n\n4 5 6 0.5\n");
  auto c = read_cloud(in, CloudFormat::XyzText);
  REQUIRE(c.size() == 2);
  CHECK(c[1] == Vec3(4, 5, 6));
  auto msg = parse_message("1 2 3\n1 2\n", CloudFormat::XyzText);
  CHECK(msg.find("line 2") != std::string::npos);
  parse_message("1 2 inf\n", CloudFormat::XyzText);
}

TEST_CASE("cloud round trip in every format") {
  std::mt19937_64 rng(1);
  auto pts = oracle::random_points(500, rng, -50, 50);
  std::vector<float> inten(pts.size());
  for (std::size_t i = 0; i < inten.size(); ++i) inten[i] = 0.001f * i;
  PointCloud c(pts, inten);
  for (auto fmt : {CloudFormat::PlyAscii, CloudFormat::PlyBinaryLe, CloudFormat::KittiBin,
                   CloudFormat::XyzText}) {
    std::stringstream buf;
    write_cloud(buf, c, fmt);
    auto back = read_cloud(buf, fmt);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      for (int k = 0; k < 3; ++k)
        CHECK(static_cast<float>(back[i][k]) == static_cast<float>(c[i][k]));
  }
  CHECK(format_from_path("a/b/cloud.bin") == CloudFormat::KittiBin);
  CHECK(format_from_path("x.xyz") == CloudFormat::XyzText);
  CHECK(parse_cloud_format("ply_binary_le") == CloudFormat::PlyBinaryLe);
  CHECK_FALSE(parse_cloud_format("pcd"));
}

TEST_CASE("pose files: identity lines") {
  std::istringstream k("1 0 0 0 0 1 0 0 0 0 1 0\n");
  auto a = read_poses(k, PoseFormat::KittiOdometry);
  REQUIRE(a.size() == 1);
  CHECK(a[0].rotation == Mat3::Identity());
  CHECK(a[0].translation == Vec3::Zero());
  std::istringstream t("0.0 1 2 3 0 0 0 1\n");
  auto b = read_poses(t, PoseFormat::Tum);
  REQUIRE(b.size() == 1);
  CHECK((b[0].rotation - Mat3::Identity()).norm() < 1e-15);
  CHECK(b[0].translation == Vec3(1, 2, 3));
  // Unnormalized quaternions are normalized on load.
  std::istringstream t2("0 0 0 0 0 0 0 2\n");
  CHECK((read_poses(t2, PoseFormat::Tum)[0].rotation - Mat3::Identity()).norm() < 1e-15);
}

TEST_CASE("pose files: random round trip in both formats") {
  std::mt19937_64 rng(2);
  std::vector<Pose> poses;
  for (int i = 0; i < 50; ++i)
    poses.push_back({oracle::random_rotation(rng), oracle::random_points(1, rng, -100, 100)[0]});
  for (auto fmt : {PoseFormat::KittiOdometry, PoseFormat::Tum}) {
    std::stringstream buf;
    write_poses(buf, poses, fmt);
    auto back = read_poses(buf, fmt);
    REQUIRE(back.size() == poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) {
      CHECK((back[i].rotation - poses[i].rotation).cwiseAbs().maxCoeff() < 1e-6);
      CHECK((back[i].translation - poses[i].translation).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("pose files: validation") {
  std::istringstream few("1 0 0 0 0 1 0 0 0 0 1\n");
  CHECK_THROWS_AS(read_poses(few, PoseFormat::KittiOdometry), Error);
  std::istringstream bad_tum("0 1 2 3 0 0 0\n");
  CHECK_THROWS_AS(read_poses(bad_tum, PoseFormat::Tum), Error);
  std::istringstream nan_line("1 0 0 0 0 1 0 0 0 0 1 nan\n");
  CHECK_THROWS_AS(read_poses(nan_line, PoseFormat::KittiOdometry), Error);

  // Slightly skewed rotation: repaired with a warning.
  std::istringstream skew("1 0.002 0 0 0 1 0 0 0 0 1 0\n");
  std::vector<std::string> warnings;
  auto p = read_poses(skew, PoseFormat::KittiOdometry, &warnings);
  CHECK(warnings.size() == 1);
  CHECK(is_rotation(p[0].rotation, 1e-12));
  // Tiny deviations are repaired silently.
  std::istringstream tiny("1 0.0000001 0 0 0 1 0 0 0 0 1 0\n");
  warnings.clear();
  read_poses(tiny, PoseFormat::KittiOdometry, &warnings);
  CHECK(warnings.empty());
  // A reflection is not a rotation.
  std::istringstream refl("-1 0 0 0 0 1 0 0 0 0 1 0\n");
  CHECK_THROWS_AS(read_poses(refl, PoseFormat::KittiOdometry), Error);
}

TEST_CASE("golden config: defaults reproduce the reference parameter table") {
  const std::string golden =
      "kappa_spheric = 0.1\n"
      "kappa_disc = 0.15\n"
      "tau_v = 0.05\n"
      "tau_l = 0.005\n"
      "tau_m = 0.02\n"
      "tau_g = 0.05\n"
      "delta_v = 0.1\n"
      "N_r = 2000\n"
      "r_max = 5\n"
      "radius_clamp = truncate\n"
      "N_FPS = 1500\n"
      "N_patch = 512\n"
      "H = 7\n"
      "W = 20\n"
      "D = 32\n"
      "temperature = 0.1\n"
      "epsilon = auto\n"
      "max_candidates = 5000\n"
      "ransac_max_iters = 50000\n"
      "rng_seed = 0\n"
      "scales = local,middle,global\n"
      "refine_kernel = none\n"
      "delta = 1\n"
      "c_bar = 1\n"
      "mu = 1\n"
      "irls_iters = 20\n"
      "gnc = false\n";
  CHECK(format_config(PipelineConfig{}) == golden);
  std::istringstream in(golden);
  CHECK(format_config(parse_config(in)) == golden);
}

TEST_CASE("config parsing: overrides, comments and errors") {
  std::istringstream in(
      "# comment\n"
      "N_FPS = 700   # trailing\n"
      "tau_m=0.03\n"
      "epsilon = 0.4\n"
      "scales = middle\n"
      "refine_kernel = tls\n"
      "radius_clamp = max\n");
  auto c = parse_config(in);
  CHECK(c.n_fps == 700);
  CHECK(c.bootstrap.tau_scales[1] == 0.03);
  REQUIRE(c.epsilon);
  CHECK(*c.epsilon == 0.4);
  CHECK(c.scales == std::vector<Scale>{Scale::Middle});
  CHECK(c.refine);
  CHECK(c.refine_kernel.kind == KernelKind::TruncatedLeastSquares);
  CHECK(c.bootstrap.clamp == RadiusClamp::LiteralMax);

  PipelineConfig cfg;
  CHECK_THROWS_AS(set_config_value(cfg, "no_such_key", "1"), Error);
  CHECK_THROWS_AS(set_config_value(cfg, "N_FPS", "many"), Error);
  CHECK_THROWS_AS(set_config_value(cfg, "tau_v", "0.1x"), Error);
  std::istringstream bad("N_FPS 10\n");
  CHECK_THROWS_AS(parse_config(bad), Error);
  std::istringstream order("tau_l = 0.5\n");
  CHECK_THROWS_AS(parse_config(order), Error);
}
