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

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "zeroreg/bench.hpp"
#include "zeroreg/spatial_index.hpp"

using namespace zeroreg;

namespace {

Mat3 rot_z_deg(double deg) {
  return Eigen::AngleAxisd(deg * std::numbers::pi / 180.0, Vec3::UnitZ()).toRotationMatrix();
}

Pose with_errors(const Pose& gt, double rte, double rre_deg) {
  Pose p = gt;
  p.rotation = gt.rotation * rot_z_deg(rre_deg);
  p.translation = gt.translation + Vec3(rte, 0, 0);
  return p;
}

}  // namespace

TEST_CASE("rotation error: closed-form constructions") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    Mat3 r = oracle::random_rotation(rng);
    CHECK(rotation_error(r, r) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::abs(rotation_error(r * rot_z_deg(30.0), r) - 30.0) < 1e-9);
    Mat3 s = oracle::random_rotation(rng);
    CHECK(rotation_error(r, s) == doctest::Approx(rotation_error(s, r)).epsilon(1e-12));
  }
  CHECK(rotation_error(Mat3::Identity(), rot_z_deg(180.0)) == doctest::Approx(180.0));
}

TEST_CASE("translation error") {
  CHECK(translation_error(Vec3(1, 2, 3), Vec3(1, 2, 3)) == 0.0);
  CHECK(translation_error(Vec3(0.03, 0.04, 0), Vec3::Zero()) * 100.0 == doctest::Approx(5.0).epsilon(1e-12));
  Vec3 shift(7, -3, 2);
  CHECK(translation_error(Vec3(0.03, 0.04, 0) + shift, shift) ==
        doctest::Approx(translation_error(Vec3(0.03, 0.04, 0), Vec3::Zero())));
}

TEST_CASE("criteria presets and parsing") {
  auto kitti = find_criteria_preset("kitti");
  REQUIRE(kitti);
  CHECK(kitti->tau_trans == 2.0);
  CHECK(kitti->tau_rot == 5.0);
  auto eth = find_criteria_preset("ETH");
  REQUIRE(eth);
  CHECK(eth->tau_trans == 0.3);
  CHECK(eth->tau_rot == 2.0);
  auto indoor = find_criteria_preset("scannet++i");
  REQUIRE(indoor);
  CHECK(indoor->tau_trans == 0.3);
  CHECK(indoor->tau_rot == 15.0);
  CHECK_FALSE(find_criteria_preset("nonexistent"));
  auto fallback = parse_criteria("nonexistent");
  CHECK(fallback.tau_trans == 2.0);
  CHECK(fallback.tau_rot == 5.0);
  auto custom = parse_criteria("0.25,7.5");
  CHECK(custom.tau_trans == 0.25);
  CHECK(custom.tau_rot == 7.5);
  CHECK_THROWS_AS(parse_criteria("1,-2"), Error);
}

TEST_CASE("evaluate_pair worked examples") {
  Pose gt{rot_z_deg(10), Vec3(1, 2, 3)};
  auto kitti = *find_criteria_preset("kitti");
  auto eth = *find_criteria_preset("eth");
  Pose est = with_errors(gt, 1.0, 3.0);
  auto a = evaluate_pair(est, gt, kitti);
  CHECK(a.rte == doctest::Approx(1.0));
  CHECK(a.rre == doctest::Approx(3.0));
  CHECK(a.success);
  CHECK_FALSE(evaluate_pair(est, gt, eth).success);
  // Exactly at the threshold counts as success.
  Pose edge{gt.rotation, gt.translation + Vec3(2.0, 0, 0)};
  CHECK(evaluate_pair(edge, gt, kitti).success);
  Pose over{gt.rotation, gt.translation + Vec3(2.0 + 1e-9, 0, 0)};
  CHECK_FALSE(evaluate_pair(over, gt, kitti).success);
}

TEST_CASE("summarize averages over successes only") {
  std::vector<PairRecord> recs(4);
  recs[0] = {0, true, 0.10, 1.0, true, 5};
  recs[1] = {1, true, 0.30, 3.0, true, 7};
  recs[2] = {2, true, 9.00, 90., false, 9};
  recs[3] = {3, false, 0.0, 0.0, false, 11};
  auto s = summarize(recs);
  CHECK(s.n_pairs == 4);
  CHECK(s.n_success == 2);
  CHECK(s.success_rate == doctest::Approx(50.0));
  CHECK(s.mean_rte_cm == doctest::Approx(20.0));
  CHECK(s.mean_rre_deg == doctest::Approx(2.0));
  CHECK(s.mean_time_ms == doctest::Approx(8.0));
  auto sq = summarize(recs, true);
  CHECK(sq.mean_rte_cm == doctest::Approx((100.0 + 900.0) / 2));
  auto none = summarize({});
  CHECK(none.success_rate == 0.0);
}

TEST_CASE("make_pairs_by_distance") {
  std::vector<Pose> line(35);
  for (std::size_t i = 0; i < line.size(); ++i) line[i].translation = Vec3(double(i), 0, 0);
  auto p = make_pairs_by_distance(line, 10.0);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == std::pair<std::size_t, std::size_t>{0, 10});
  CHECK(p[1] == std::pair<std::size_t, std::size_t>{10, 20});
  CHECK(p[2] == std::pair<std::size_t, std::size_t>{20, 30});
  std::vector<Pose> still(20);
  CHECK(make_pairs_by_distance(still, 10.0).empty());

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.5);
  std::vector<Pose> walk(500);
  for (std::size_t i = 1; i < walk.size(); ++i)
    walk[i].translation = walk[i - 1].translation + Vec3(g(rng), g(rng), 0.1 * g(rng));
  auto w = make_pairs_by_distance(walk, 10.0);
  CHECK_FALSE(w.empty());
  for (std::size_t k = 0; k < w.size(); ++k) {
    auto [i, j] = w[k];
    CHECK((walk[j].translation - walk[i].translation).norm() >= 10.0);
    for (std::size_t m = i + 1; m < j; ++m)
      CHECK((walk[m].translation - walk[i].translation).norm() < 10.0);
    if (k > 0) CHECK(i == w[k - 1].second);
  }
}

TEST_CASE("synthetic scenes take the expected bootstrap branch") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto room = synth_scene(SceneKind::IndoorRoom, {}, seed);
    auto lidar = synth_scene(SceneKind::LidarSweep, {}, seed);
    auto ev_room = oracle::covariance_eigenvalues(room.source.points());
    auto ev_lidar = oracle::covariance_eigenvalues(lidar.source.points());
    CHECK(ev_room[2] / ev_room[0] >= 0.05);
    CHECK(ev_lidar[2] / ev_lidar[0] < 0.05);
    CHECK(room.noise_sigma == doctest::Approx(0.5 * room.clean_voxel_size));
    CHECK(is_rotation(room.gt.rotation, 1e-9));
  }
}

TEST_CASE("synthetic ground truth maps shared surface points onto each other") {
  SynthParams p;
  p.noise_sigma = 0.0;
  p.shared_sampling = true;
  for (auto kind : {SceneKind::IndoorRoom, SceneKind::LidarSweep}) {
    auto pair = synth_scene(kind, p, 4);
    SpatialIndex tgt(pair.target.points());
    std::size_t exact = 0;
    for (const auto& x : pair.source.points()) {
      auto nn = tgt.knn(pair.gt.apply(x), 1);
      if ((tgt.points()[nn[0]] - pair.gt.apply(x)).norm() < 1e-9) ++exact;
    }
    // Every point in the overlap region appears in both crops.
    CHECK(double(exact) / pair.source.size() > 0.4);
  }
}

TEST_CASE("degenerate generator settings yield identical clouds") {
  SynthParams p;
  p.overlap = 1.0;
  p.noise_sigma = 0.0;
  p.identity_transform = true;
  p.shared_sampling = true;
  for (auto kind : {SceneKind::IndoorRoom, SceneKind::LidarSweep}) {
    auto pair = synth_scene(kind, p, 5);
    REQUIRE(pair.source.size() == pair.target.size());
    for (std::size_t i = 0; i < pair.source.size(); ++i)
      CHECK((pair.source[i] - pair.target[i]).norm() == 0.0);
  }
}

TEST_CASE("synth parameter validation and determinism") {
  SynthParams bad;
  bad.overlap = 0.0;
  CHECK_THROWS_AS(synth_scene(SceneKind::IndoorRoom, bad, 1), Error);
  bad = {};
  bad.density_scale = -1;
  CHECK_THROWS_AS(synth_scene(SceneKind::LidarSweep, bad, 1), Error);
  auto a = synth_scene(SceneKind::LidarSweep, {}, 9), b = synth_scene(SceneKind::LidarSweep, {}, 9);
  CHECK(a.source.points() == b.source.points());
  CHECK(a.gt.translation == b.gt.translation);
  CHECK(parse_scene_kind("indoor_room") == SceneKind::IndoorRoom);
  CHECK_FALSE(parse_scene_kind("forest"));
}
