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

#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "zeroreg/geometry.hpp"
#include "zeroreg/parallel.hpp"
#include "zeroreg/patch.hpp"

using namespace zeroreg;

namespace {

// Random points in the unit ball kept at least `margin` radians away from
// every sector boundary.
std::vector<Vec3> interior_ball_points(std::size_t n, std::size_t sectors,
                                       double margin, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double width = 2.0 * std::numbers::pi / sectors;
  std::vector<Vec3> pts;
  while (pts.size() < n) {
    Vec3 p(u(rng), u(rng), u(rng));
    if (p.norm() > 1.0 || std::hypot(p.x(), p.y()) < 1e-3) continue;
    const double phi = std::atan2(p.y(), p.x()) + std::numbers::pi;
    const double frac = std::fmod(phi, width);
    if (frac < margin || width - frac < margin) continue;
    pts.push_back(p);
  }
  return pts;
}

std::vector<float> shift_sectors(const PatchDescriptor& d, std::size_t k) {
  const auto& s = d.shape;
  std::vector<float> out(d.cyl.size());
  for (std::size_t h = 0; h < s.height; ++h)
    for (std::size_t w = 0; w < s.sectors; ++w)
      for (std::size_t c = 0; c < s.channels; ++c)
        out[(h * s.sectors + (w + k) % s.sectors) * s.channels + c] = d.at(h, w, c);
  return out;
}

double max_abs_diff(const std::vector<float>& a, const std::vector<float>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(double(a[i]) - b[i]));
  return m;
}

}  // namespace

TEST_CASE("align_to_z worked examples") {
  CHECK(align_to_z(Vec3(0, 0, 1)).isApprox(Mat3::Identity(), 1e-15));
  Mat3 r = align_to_z(Vec3(1, 0, 0));
  CHECK((r * Vec3(1, 0, 0) - Vec3(0, 0, 1)).norm() < 1e-12);
  CHECK(is_rotation(r));
  Mat3 f = align_to_z(Vec3(0, 0, -1));
  CHECK((f * Vec3(0, 0, -1) - Vec3(0, 0, 1)).norm() < 1e-6);
  CHECK(is_rotation(f));
  CHECK_THROWS_AS(align_to_z(Vec3(0, 0, 2)), Error);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    Vec3 a = oracle::random_rotation(rng).col(0);
    Mat3 ra = align_to_z(a);
    CHECK((ra * a - Vec3::UnitZ()).norm() < 1e-9);
    CHECK(is_rotation(ra, 1e-9));
  }
}

TEST_CASE("single point descriptor") {
  HandcraftedBackend be;
  Patch p;
  p.points = {Vec3(0.5, 0, 0)};
  auto d = be.describe(p, {});
  std::set<std::size_t> nonzero_cells;
  const auto& s = d.shape;
  for (std::size_t cell = 0; cell < s.cells(); ++cell)
    for (std::size_t c = 0; c < s.channels; ++c)
      if (d.cyl[cell * s.channels + c] != 0.0f) nonzero_cells.insert(cell);
  REQUIRE(nonzero_cells.size() == 1);
  const std::size_t cell = *nonzero_cells.begin();
  const float* ch = &d.cyl[cell * s.channels];
  CHECK(ch[s.channels - 4] == 1.0f);
  const auto peak = std::max_element(ch, ch + s.channels - 4) - ch;
  CHECK(peak == 14);
  CHECK(cell / s.sectors == 3);  // z = 0 falls in the middle height bin
  CHECK(cell % s.sectors == 10);  // azimuth 0 starts sector W/2
  CHECK_THROWS_AS(be.describe(Patch{}, {}), Error);
}

TEST_CASE("descriptor is SO(2)-equivariant on interior points") {
  HandcraftedBackend be;
  const std::size_t W = be.shape().sectors;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> uk(1, W - 1);
  for (int trial = 0; trial < 50; ++trial) {
    Patch p;
    p.points = interior_ball_points(300, W, 1e-3, rng);
    const std::size_t k = uk(rng);
    Patch r = p;
    const Mat3 yaw = yaw_rotation(static_cast<double>(k), W);
    for (auto& q : r.points) q = yaw * q;
    auto a = be.describe(p, {}), b = be.describe(r, {});
    CHECK(max_abs_diff(shift_sectors(a, k), b.cyl) <= 1e-6);
    CHECK(max_abs_diff(a.vec, b.vec) <= 1e-6);
  }
}

TEST_CASE("histogram and occupancy means are invariant to any z rotation") {
  HandcraftedBackend be;
  const CylShape s = be.shape();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0, 2 * std::numbers::pi);
  auto channel_means = [&](const PatchDescriptor& d) {
    std::vector<float> m(s.channels - 3, 0.0f);
    for (std::size_t h = 0; h < s.height; ++h)
      for (std::size_t w = 0; w < s.sectors; ++w)
        for (std::size_t c = 0; c + 3 < s.channels; ++c) m[c] += d.at(h, w, c) / s.cells();
    return m;
  };
  for (int trial = 0; trial < 20; ++trial) {
    Patch p;
    p.points = interior_ball_points(200, 1, 0.0, rng);
    Patch r = p;
    const Mat3 rot = Eigen::AngleAxisd(ua(rng), Vec3::UnitZ()).toRotationMatrix();
    for (auto& q : r.points) q = rot * q;
    CHECK(max_abs_diff(channel_means(be.describe(p, {})), channel_means(be.describe(r, {}))) <= 1e-6);
  }
}

TEST_CASE("extract_patch: boundary normalization and planar frame") {
  std::vector<Vec3> ring;
  for (int i = 0; i < 12; ++i) {
    const double a = 2 * std::numbers::pi * i / 12;
    ring.emplace_back(std::cos(a), std::sin(a), 0.0);
  }
  SpatialIndex ri(ring);
  auto pr = extract_patch(ri, Vec3::Zero(), 1.0, 512, 1);
  for (const auto& q : pr.points) CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(4);
  auto plane = oracle::random_points(10000, rng, -1.0, 1.0);
  const Mat3 tilt = oracle::random_rotation(rng);
  for (auto& q : plane) q = tilt * Vec3(q.x(), q.y(), 0.0);
  SpatialIndex pi(plane);
  auto pp = extract_patch(pi, plane[0], 0.5, 512, 2);
  const double angle = std::acos(std::min(1.0, std::abs(pp.frame.v3().dot(tilt.col(2)))));
  CHECK(angle * 180.0 / std::numbers::pi < 1.0);
  for (const auto& q : pp.points) CHECK(q.norm() <= 1.0);
  CHECK(pp.points.size() == 512);

  CHECK_THROWS_AS(extract_patch(ri, Vec3(10, 10, 10), 0.5, 512, 1), Error);
  CHECK_THROWS_AS(extract_patch(ri, Vec3::Zero(), 0.0, 512, 1), Error);
}

TEST_CASE("extract_patch: rigid motion leaves the canonical point set unchanged") {
  std::mt19937_64 rng(5);
  auto pts = oracle::random_points(3000, rng);
  for (auto& p : pts) p.z() = 0.3 * p.z() + 0.2 * std::sin(4 * p.x());
  const Mat3 R = oracle::random_rotation(rng);
  const Vec3 t(1.5, -2.0, 0.7);
  std::vector<Vec3> moved;
  for (auto& p : pts) moved.push_back(R * p + t);
  SpatialIndex a(pts), b(moved);
  for (std::size_t k : {0u, 17u, 123u, 999u}) {
    auto pa = extract_patch(a, pts[k], 0.25, 100000, 9);
    auto pb = extract_patch(b, moved[k], 0.25, 100000, 9);
    REQUIRE(pa.points.size() == pb.points.size());
    double worst = 0;
    for (std::size_t i = 0; i < pa.points.size(); ++i) {
      // Back to world offsets, then into the full PCA frame.
      Vec3 ca = pa.frame.axes.transpose() * (pa.alignment.transpose() * pa.points[i]);
      Vec3 cb = pb.frame.axes.transpose() * (pb.alignment.transpose() * pb.points[i]);
      worst = std::max(worst, (ca - cb).norm());
    }
    CHECK(worst < 1e-6);
    // The two z-aligned frames differ only by a yaw.
    Mat3 rel = pb.alignment * R * pa.alignment.transpose();
    CHECK((rel * Vec3::UnitZ() - Vec3::UnitZ()).norm() < 1e-6);
  }
}

TEST_CASE("embed_scale: small clouds keep every point and counts add up") {
  std::mt19937_64 rng(6);
  PointCloud small(oracle::random_points(200, rng));
  SpatialIndex si(small.points());
  HandcraftedBackend be;
  EmbedOptions opt;
  opt.seed = 11;
  for (Scale s : kAllScales) {
    auto e = embed_scale(small, si, s, 0.3, be, opt);
    CHECK(e.sampled == small.size());
    CHECK(e.keypoints.size() + e.dropped == e.sampled);
  }

  // Sparse spots: a dense cube plus isolated far points.
  auto pts = oracle::random_points(3000, rng);
  for (int i = 0; i < 40; ++i) pts.emplace_back(10.0 + 3.0 * i, 0, 0);
  PointCloud mixed(pts);
  SpatialIndex mi(pts);
  opt.n_fps = 500;
  auto e = embed_scale(mixed, mi, Scale::Middle, 0.15, be, opt);
  std::size_t recount = 0;
  for (std::size_t k : e.keypoints) {
    if (oracle::radius_neighbors(pts, pts[k], 0.15).size() >= 5) ++recount;
  }
  CHECK(e.sampled == opt.n_fps);
  CHECK(recount == e.keypoints.size());
  CHECK(e.dropped >= 40);
  CHECK(e.keypoints.size() == opt.n_fps - e.dropped);
  CHECK(e.descriptors.size() == e.keypoints.size());
  CHECK(e.patches.size() == e.keypoints.size());
}

TEST_CASE("embed_cloud: equal radii still sample each scale independently") {
  std::mt19937_64 rng(7);
  PointCloud c(oracle::random_points(4000, rng));
  HandcraftedBackend be;
  EmbedOptions opt;
  opt.n_fps = 100;
  opt.seed = 5;
  auto e = embed_cloud(c, {0.2, 0.2, 0.2}, be, opt);
  for (auto& s : e) CHECK(s.radius == 0.2);
  CHECK(e[0].keypoints != e[1].keypoints);
  CHECK(e[1].keypoints != e[2].keypoints);
  auto again = embed_cloud(c, {0.2, 0.2, 0.2}, be, opt);
  CHECK(again[1].keypoints == e[1].keypoints);
  CHECK(again[1].descriptors[3].cyl == e[1].descriptors[3].cyl);
}

TEST_CASE("external descriptors round-trip through the record format") {
  CylShape shape{2, 4, 3};
  PatchDescriptor d;
  d.shape = shape;
  for (std::size_t i = 0; i < shape.size(); ++i) d.cyl.push_back(0.25f * i);
  d.vec = {0.6f, 0.8f, 0.0f};
  std::stringstream buf;
  write_descriptor_record(buf, {42, Scale::Global, 7}, d);
  CHECK(buf.str().size() == 8 + 1 + 4 + 4 * (shape.size() + 3));
  ExternalBackend be(shape, buf);
  CHECK(be.size() == 1);
  auto got = be.describe(Patch{}, {42, Scale::Global, 7});
  CHECK(got.cyl == d.cyl);
  CHECK(got.vec == d.vec);
  CHECK_THROWS_AS(be.describe(Patch{}, {42, Scale::Local, 7}), Error);

  std::stringstream truncated(buf.str().substr(0, 20));
  CHECK_THROWS_AS(ExternalBackend(shape, truncated), Error);
}

TEST_CASE("cloud_id depends on every coordinate") {
  PointCloud a({Vec3(1, 2, 3)}), b({Vec3(1, 2, 3.0000001)});
  CHECK(cloud_id(a) == cloud_id(PointCloud({Vec3(1, 2, 3)})));
  CHECK(cloud_id(a) != cloud_id(b));
}
