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
#pragma once

#include <span>
#include <vector>

#include "zeroreg/geometry.hpp"
#include "zeroreg/patch.hpp"

namespace zeroreg {

struct MatchPair {
  std::size_t p = 0;
  std::size_t q = 0;
  bool operator==(const MatchPair&) const = default;
};

// Mutual nearest neighbors between two feature sets; each index appears at
// most once on either side.
struct ScaleMatches {
  Scale scale = Scale::Middle;
  std::vector<MatchPair> pairs;
  std::size_t size() const { return pairs.size(); }
};

// One rigid transform hypothesis, q = R p + t, produced by a single matched
// keypoint pair.
struct CandidateTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  Scale scale = Scale::Middle;
  std::size_t p_index = 0;  // into the scale's keypoint list
  std::size_t q_index = 0;
  double yaw_offset = 0.0;
};

using FeatureList = std::vector<std::vector<float>>;

// (i, j) is kept iff j is the nearest q feature to p[i] and i is the nearest
// p feature to q[j] (Euclidean, ties to the lower index). Pairs are ordered
// by p index.
ScaleMatches mutual_match(const FeatureList& f_p, const FeatureList& f_q,
                          Scale scale = Scale::Middle);

// beta[w] = sum_{h, w', d} c_p[h, w', d] * c_q[h, (w' + w) mod W, d] for
// w = 0..W-1, i.e. the correlation when q is p rotated by w sectors.
std::vector<double> yaw_score(std::span<const float> c_p,
                              std::span<const float> c_q, const CylShape& shape);

// d = sum_{w=1..W} softmax(beta / temperature)_w * w, where beta[w-1] is the
// score of list position w.
double soft_offset(std::span<const double> beta, double temperature);

// Sub-sector yaw offset from shift-indexed scores (scores[k] for a shift of
// k sectors). Position w of the soft-offset list holds the score of shift
// w mod W, so a peak at shift 0 reads as d = W. The list is rotated so its
// peak sits at position ceil(W/2) before the soft offset is taken and the
// rotation is undone afterwards, which keeps the weighted mean away from the
// wrap point. The result lies in [0.5, W + 0.5).
double circular_soft_offset(std::span<const double> scores, double temperature);

// Full relative transform from one matched patch pair:
//   R = (R_q)^T * R_yaw(d) * R_p,  t = q_center - R * p_center
// where R_p, R_q are the patches' z-alignments and d comes from the
// normalized circular cross-correlation of their cylindrical maps.
CandidateTransform pair_transform(const Patch& patch_p,
                                  const PatchDescriptor& desc_p,
                                  const Patch& patch_q,
                                  const PatchDescriptor& desc_q,
                                  double temperature);

}  // namespace zeroreg
