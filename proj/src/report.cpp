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
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "zeroreg/pipeline.hpp"

namespace zeroreg {
namespace {

using Json = nlohmann::ordered_json;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json pose_rows(const Pose& p) {
  Json rows = Json::array();
  for (int r = 0; r < 3; ++r)
    rows.push_back({p.rotation(r, 0), p.rotation(r, 1), p.rotation(r, 2),
                    p.translation[r]});
  return rows;
}

}  // namespace

std::string report_to_json(const RegistrationReport& r, bool include_timing) {
  Json j;
  j["schema"] = 1;
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["pose"] = r.has_pose ? pose_rows(r.pose) : Json(nullptr);

  const auto& b = r.bootstrap;
  j["bootstrap"] = {{"voxel_size", b.voxel_size},
                    {"sphericity", b.sphericity},
                    {"spread", b.spread},
                    {"branch", to_string(b.branch)},
                    {"radii", {b.radii[0], b.radii[1], b.radii[2]}}};
  j["points"] = {{"source", r.points_p},
                 {"target", r.points_q},
                 {"source_voxelized", r.voxelized_p},
                 {"target_voxelized", r.voxelized_q}};
  Json scales = Json::array();
  for (const auto& s : r.scales)
    scales.push_back({{"scale", to_string(s.scale)},
                      {"radius", s.radius},
                      {"keypoints_source", s.keypoints_p},
                      {"keypoints_target", s.keypoints_q},
                      {"dropped_source", s.dropped_p},
                      {"dropped_target", s.dropped_q},
                      {"matches", s.matches},
                      {"empty", s.empty}});
  j["scales"] = scales;
  j["epsilon"] = r.epsilon;
  j["inliers"] = {{"candidates", r.candidates},
                  {"consensus", r.consensus_inliers},
                  {"ransac", r.ransac_inliers}};
  j["ransac"] = {{"iterations", r.ransac_iterations},
                 {"low_confidence", r.ransac_low_confidence}};
  j["degraded"] = {{"consensus_fallback", r.degraded},
                   {"refine_stalled", r.refine_stalled}};
  j["refined"] = r.refined;
  if (r.ground_truth) {
    const auto& g = *r.ground_truth;
    j["ground_truth"] = {{"rte_m", number_or_null(g.rte)},
                         {"rre_deg", number_or_null(g.rre)},
                         {"success", g.success},
                         {"tau_trans_m", g.criteria.tau_trans},
                         {"tau_rot_deg", g.criteria.tau_rot}};
  }
  if (include_timing) {
    Json t;
    for (const auto& s : r.timing) t[s.stage] = s.ms;
    t["total"] = r.total_ms;
    j["timing_ms"] = t;
  }
  return j.dump(2) + "\n";
}

std::string summary_to_json(const BenchmarkSummary& s) {
  Json j;
  j["schema"] = 1;
  j["n_pairs"] = s.n_pairs;
  j["n_success"] = s.n_success;
  j["success_rate"] = s.success_rate;
  j[s.squared_rte ? "mean_rte_sq_cm2" : "mean_rte_cm"] = s.mean_rte_cm;
  j["mean_rre_deg"] = s.mean_rre_deg;
  j["mean_time_ms"] = s.mean_time_ms;
  return j.dump(2) + "\n";
}

std::string summary_to_csv(const BenchmarkSummary& s) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "index,registered,rte_m,rre_deg,success,time_ms\n";
  for (const auto& r : s.records)
    out << r.index << ',' << (r.registered ? 1 : 0) << ',' << r.rte << ','
        << r.rre << ',' << (r.success ? 1 : 0) << ',' << r.time_ms << '\n';
  return out.str();
}

}  // namespace zeroreg
