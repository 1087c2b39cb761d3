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
#include "zeroreg/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace zeroreg {

void SuccessCriteria::validate() const {
  if (!(tau_trans > 0.0) || !(tau_rot > 0.0))
    throw Error(ErrorCode::Parameter, "success thresholds must be > 0");
}

std::optional<SuccessCriteria> find_criteria_preset(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (key == "scannet++i" || key == "scannet++f") return SuccessCriteria{0.3, 15.0};
  if (key == "eth") return SuccessCriteria{0.3, 2.0};
  if (key == "tiers" || key == "wod" || key == "kitti" || key == "kaist" ||
      key == "mit" || key == "oxford" || key == "default")
    return SuccessCriteria{2.0, 5.0};
  return std::nullopt;
}

namespace {

double parse_double(std::string_view s, std::string_view what) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::Parse, "invalid number for " + std::string(what) +
                                      ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

SuccessCriteria parse_criteria(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos)
    return find_criteria_preset(text).value_or(SuccessCriteria{});
  SuccessCriteria c{parse_double(text.substr(0, comma), "tau_trans"),
                    parse_double(text.substr(comma + 1), "tau_rot")};
  c.validate();
  return c;
}

double rotation_error(const Mat3& r_hat, const Mat3& r_gt) {
  // arccos((tr - 1) / 2) evaluated through atan2 so that small angles keep
  // full precision.
  const Mat3 d = r_hat.transpose() * r_gt;
  const double c = (d.trace() - 1.0) / 2.0;
  const Vec3 axis(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  return std::atan2(axis.norm() / 2.0, c) * 180.0 / std::numbers::pi;
}

double translation_error(const Vec3& t_hat, const Vec3& t_gt) {
  return (t_gt - t_hat).norm();
}

PairRecord evaluate_pair(const Pose& estimate, const Pose& gt,
                         const SuccessCriteria& criteria) {
  PairRecord r;
  r.rte = translation_error(estimate.translation, gt.translation);
  r.rre = rotation_error(estimate.rotation, gt.rotation);
  r.success = r.rte <= criteria.tau_trans && r.rre <= criteria.tau_rot;
  return r;
}

BenchmarkSummary summarize(std::vector<PairRecord> records, bool squared_rte) {
  BenchmarkSummary s;
  s.n_pairs = records.size();
  s.squared_rte = squared_rte;
  double rte = 0.0, rre = 0.0, time = 0.0;
  for (const auto& r : records) {
    time += r.time_ms;
    if (!r.success) continue;
    ++s.n_success;
    const double cm = 100.0 * r.rte;
    rte += squared_rte ? cm * cm : cm;
    rre += r.rre;
  }
  if (s.n_pairs > 0) {
    s.success_rate = 100.0 * static_cast<double>(s.n_success) /
                     static_cast<double>(s.n_pairs);
    s.mean_time_ms = time / static_cast<double>(s.n_pairs);
  }
  if (s.n_success > 0) {
    s.mean_rte_cm = rte / static_cast<double>(s.n_success);
    s.mean_rre_deg = rre / static_cast<double>(s.n_success);
  }
  s.records = std::move(records);
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> make_pairs_by_distance(
    std::span<const Pose> poses, double tau_dist) {
  if (poses.size() < 2)
    throw Error(ErrorCode::InsufficientData, "need at least 2 poses");
  if (!(tau_dist > 0.0))
    throw Error(ErrorCode::Parameter, "tau_dist must be > 0");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0;
  for (std::size_t j = 1; j < poses.size(); ++j) {
    if ((poses[j].translation - poses[i].translation).norm() >= tau_dist) {
      out.emplace_back(i, j);
      i = j;
    }
  }
  return out;
}

}  // namespace zeroreg
