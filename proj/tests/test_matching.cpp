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
#include "zeroreg/geometry.hpp"
#include "zeroreg/matching.hpp"

using namespace zeroreg;

namespace {

FeatureList random_unit_features(std::size_t n, std::size_t dim,
                                 std::mt19937_64& rng) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  FeatureList out(n, std::vector<float>(dim));
  for (auto& f : out) {
    float s = 0;
    for (auto& x : f) {
      x = g(rng);
      s += x * x;
    }
    for (auto& x : f) x /= std::sqrt(s);
  }
  return out;
}

// Independent softmax-weighted position, positions 1..W.
double softmax_position(const std::vector<double>& beta, double temperature) {
  std::vector<double> e;
  for (double b : beta) e.push_back(std::exp(b / temperature));
  double num = 0, den = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    num += e[i] * (i + 1);
    den += e[i];
  }
  return num / den;
}

}  // namespace

TEST_CASE("mutual_match: identity and mutuality examples") {
  std::mt19937_64 rng(1);
  auto f = random_unit_features(30, 8, rng);
  auto m = mutual_match(f, f);
  REQUIRE(m.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) CHECK(m.pairs[i] == MatchPair{i, i});

  FeatureList fp{{0.0f, 0.0f}, {1.0f, 0.0f}};
  FeatureList fq{{0.9f, 0.0f}, {5.0f, 5.0f}};
  // p0's nearest is q0, but q0's nearest is p1.
  auto r = mutual_match(fp, fq);
  REQUIRE(r.size() == 1);
  CHECK(r.pairs[0] == MatchPair{1, 0});
  CHECK(mutual_match({}, fq).size() == 0);
  CHECK_THROWS_AS(mutual_match(fp, FeatureList{{1.0f, 2.0f, 3.0f}}), Error);
}

TEST_CASE("mutual_match equals the exhaustive oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto fp = random_unit_features(200, 32, rng);
    auto fq = random_unit_features(200, 32, rng);
    CHECK(mutual_match(fp, fq).pairs == oracle::mutual_match(fp, fq));
  }
}

TEST_CASE("yaw_score: shift peak, zero input and brute force") {
  CylShape s;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> cp(s.size());
  for (auto& x : cp) x = u(rng);
  for (std::size_t k : {0u, 3u, 19u}) {
    std::vector<float> cq(s.size());
    for (std::size_t h = 0; h < s.height; ++h)
      for (std::size_t w = 0; w < s.sectors; ++w)
        for (std::size_t d = 0; d < s.channels; ++d)
          cq[(h * s.sectors + (w + k) % s.sectors) * s.channels + d] =
              cp[(h * s.sectors + w) * s.channels + d];
    auto beta = yaw_score(cp, cq, s);
    CHECK(std::size_t(std::max_element(beta.begin(), beta.end()) - beta.begin()) == k);
  }
  std::vector<float> zero(s.size(), 0.0f);
  for (double b : yaw_score(zero, cp, s)) CHECK(b == 0.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<float> a(s.size()), b(s.size());
    for (auto& x : a) x = u(rng) - 0.5f;
    for (auto& x : b) x = u(rng) - 0.5f;
    auto got = yaw_score(a, b, s);
    auto want = oracle::yaw_score(a, b, s);
    for (std::size_t w = 0; w < s.sectors; ++w)
      CHECK(std::abs(got[w] - want[w]) <= 1e-6 * std::max(1.0, std::abs(want[w])));
  }
  CHECK_THROWS_AS(yaw_score(std::vector<float>(3), cp, s), Error);
}

TEST_CASE("soft_offset worked examples") {
  std::vector<double> uniform(20, 0.7);
  CHECK(soft_offset(uniform, 0.1) == doctest::Approx(10.5).epsilon(1e-12));
  std::vector<double> spike(20, 0.0);
  spike[6] = 1.0;  // position 7
  CHECK(soft_offset(spike, 1e-3) == doctest::Approx(7.0).epsilon(1e-9));
  std::vector<double> small{3, 1, 1, 1};
  const double want = softmax_position(small, 1.0);
  CHECK(soft_offset(small, 1.0) == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(1.5775).epsilon(1e-4));
  CHECK_THROWS_AS(soft_offset(small, 0.0), Error);
}

namespace {

// Softmax mean over the window of offsets -(W/2 - 1)..W/2 around `peak`.
double window_mean(const std::vector<double>& scores, std::size_t peak, double t) {
  const long W = static_cast<long>(scores.size());
  double mass = 0, weighted = 0;
  for (long o = -(W / 2 - 1); o <= W / 2; ++o) {
    const double e = std::exp((scores[((static_cast<long>(peak) + o) % W + W) % W] - 1.0) / t);
    mass += e;
    weighted += e * (static_cast<double>(peak) + o);
  }
  return weighted / mass;
}

}  // namespace

TEST_CASE("circular_soft_offset recenters around the peak") {
  std::vector<double> scores(20, 0.0);
  scores[0] = 1.0;  // shift 0 reads as position W
  CHECK(circular_soft_offset(scores, 1e-3) == doctest::Approx(20.0).epsilon(1e-9));
  scores.assign(20, 0.0);
  scores[5] = 1.0;
  scores[4] = scores[6] = 0.5;
  CHECK(circular_soft_offset(scores, 0.1) == doctest::Approx(window_mean(scores, 5, 0.1)).epsilon(1e-12));
  CHECK(circular_soft_offset(scores, 0.1) == doctest::Approx(5.0).epsilon(1e-3));
  // Peak at shift 0 with symmetric neighbors on both sides of the wrap.
  scores.assign(20, 0.0);
  scores[0] = 1.0;
  scores[1] = scores[19] = 0.5;
  CHECK(circular_soft_offset(scores, 0.1) == doctest::Approx(window_mean(scores, 20, 0.1)).epsilon(1e-12));
  CHECK(circular_soft_offset(scores, 0.1) == doctest::Approx(20.0).epsilon(1e-3));
}

TEST_CASE("yaw_rotation examples") {
  CHECK((yaw_rotation(20, 20) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  Mat3 q = yaw_rotation(5, 20);
  CHECK((q * Vec3(1, 0, 0) - Vec3(0, 1, 0)).norm() < 1e-12);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 50; ++i) {
    Mat3 r = yaw_rotation(u(rng), 20);
    CHECK(is_rotation(r, 1e-12));
    CHECK((r * Vec3::UnitZ() - Vec3::UnitZ()).norm() < 1e-12);
  }
}

TEST_CASE("pair_transform: self match is the identity") {
  std::mt19937_64 rng(5);
  auto pts = oracle::random_points(4000, rng);
  for (auto& p : pts) p.z() = 0.3 * p.z() + 0.2 * std::sin(5 * p.x()) * std::cos(3 * p.y());
  SpatialIndex idx(pts);
  HandcraftedBackend be;
  auto patch = extract_patch(idx, pts[10], 0.3, 512, 1);
  auto d = be.describe(patch, {});
  auto c = pair_transform(patch, d, patch, d, 0.1);
  CHECK(c.yaw_offset == doctest::Approx(20.0).epsilon(1e-3));
  // The soft offset carries the small tail bias of the finite window.
  CHECK(rotation_error(c.rotation, Mat3::Identity()) < 0.5);
  CHECK(c.translation.norm() < 5e-3);
}

TEST_CASE("pair_transform recovers a pure yaw about the patch axis") {
  // The soft offset is biased by the asymmetry of the correlation profile
  // around its peak. The bias belongs to the patch, not to the applied yaw, so
  // the error is below one sector and the same for every whole-sector yaw.
  std::mt19937_64 rng(6);
  auto pts = oracle::random_points(6000, rng);
  for (auto& p : pts) p.z() = 0.3 * p.z() + 0.2 * std::sin(5 * p.x()) * std::cos(3 * p.y());
  SpatialIndex ip(pts);
  HandcraftedBackend be;
  const double sector_deg = 360.0 / be.shape().sectors;
  for (std::size_t k : {5u, 100u, 777u, 2500u}) {
    auto pp = extract_patch(ip, pts[k], 0.3, 100000, 1);
    const Mat3 A = pp.alignment;
    std::vector<double> errs;
    for (int m : {1, 4, 13}) {
      const Mat3 rstar = A.transpose() * yaw_rotation(m, 20) * A;
      const Vec3 tstar(0.4, -1.0, 2.0);
      std::vector<Vec3> moved;
      for (auto& p : pts) moved.push_back(rstar * p + tstar);
      SpatialIndex iq(moved);
      auto pq = extract_patch(iq, moved[k], 0.3, 100000, 1);
      auto c = pair_transform(pp, be.describe(pp, {}), pq, be.describe(pq, {}), 0.1);
      CHECK(is_rotation(c.rotation, 1e-6));
      errs.push_back(rotation_error(c.rotation, rstar));
      // The translation follows from the rotation through the patch centers.
      CHECK((c.translation - (pq.center - c.rotation * pp.center)).norm() < 1e-9);
    }
    for (double e : errs) {
      CHECK(e < sector_deg);
      CHECK(e == doctest::Approx(errs[0]).epsilon(0.05));
    }
  }
}

TEST_CASE("pair_transform output is always a rotation") {
  std::mt19937_64 rng(7);
  auto pts = oracle::random_points(3000, rng);
  SpatialIndex idx(pts);
  HandcraftedBackend be;
  for (int i = 0; i < 20; ++i) {
    auto a = extract_patch(idx, pts[i], 0.25, 512, i);
    auto b = extract_patch(idx, pts[100 + i], 0.25, 512, i);
    auto c = pair_transform(a, be.describe(a, {}), b, be.describe(b, {}), 0.1);
    CHECK(is_rotation(c.rotation, 1e-6));
  }
}
