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
#include "zeroreg/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zeroreg/parallel.hpp"

namespace zeroreg {

namespace {

double squared_distance(const std::vector<float>& a, const std::vector<float>& b) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    d2 += d * d;
  }
  return d2;
}

}  // namespace

ScaleMatches mutual_match(const FeatureList& f_p, const FeatureList& f_q,
                          Scale scale) {
  ScaleMatches out;
  out.scale = scale;
  if (f_p.empty() || f_q.empty()) return out;
  const std::size_t dim = f_p.front().size();
  for (const auto* list : {&f_p, &f_q}) {
    for (const auto& f : *list) {
      if (f.size() != dim) {
        throw Error(ErrorCode::Parameter, "feature dimensions differ");
      }
    }
  }
  const std::size_t np = f_p.size();
  const std::size_t nq = f_q.size();
  std::vector<double> dist(np * nq);
  parallel_for(np, [&](std::size_t i) {
    for (std::size_t j = 0; j < nq; ++j) {
      dist[i * nq + j] = squared_distance(f_p[i], f_q[j]);
    }
  });
  std::vector<std::size_t> best_q(np, 0);
  std::vector<std::size_t> best_p(nq, 0);
  for (std::size_t i = 0; i < np; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nq; ++j) {
      if (dist[i * nq + j] < best) {
        best = dist[i * nq + j];
        best_q[i] = j;
      }
    }
  }
  for (std::size_t j = 0; j < nq; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < np; ++i) {
      if (dist[i * nq + j] < best) {
        best = dist[i * nq + j];
        best_p[j] = i;
      }
    }
  }
  for (std::size_t i = 0; i < np; ++i) {
    if (best_p[best_q[i]] == i) out.pairs.push_back({i, best_q[i]});
  }
  return out;
}

std::vector<double> yaw_score(std::span<const float> c_p,
                              std::span<const float> c_q, const CylShape& shape) {
  if (c_p.size() != shape.size() || c_q.size() != shape.size()) {
    throw Error(ErrorCode::Parameter, "cylindrical maps do not match shape");
  }
  const std::size_t H = shape.height;
  const std::size_t W = shape.sectors;
  const std::size_t D = shape.channels;
  std::vector<double> beta(W, 0.0);
  for (std::size_t w = 0; w < W; ++w) {
    double acc = 0.0;
    for (std::size_t h = 0; h < H; ++h) {
      for (std::size_t wp = 0; wp < W; ++wp) {
        const float* a = &c_p[(h * W + wp) * D];
        const float* b = &c_q[(h * W + (wp + w) % W) * D];
        for (std::size_t d = 0; d < D; ++d) {
          acc += static_cast<double>(a[d]) * static_cast<double>(b[d]);
        }
      }
    }
    beta[w] = acc;
  }
  return beta;
}

double soft_offset(std::span<const double> beta, double temperature) {
  if (beta.size() < 2) throw Error(ErrorCode::Parameter, "soft offset needs W >= 2");
  if (!(temperature > 0.0)) {
    throw Error(ErrorCode::Parameter, "temperature must be positive");
  }
  const double peak = *std::max_element(beta.begin(), beta.end());
  double mass = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const double e = std::exp((beta[i] - peak) / temperature);
    mass += e;
    weighted += e * static_cast<double>(i + 1);
  }
  return weighted / mass;
}

double circular_soft_offset(std::span<const double> scores, double temperature) {
  const std::size_t W = scores.size();
  if (W < 2) throw Error(ErrorCode::Parameter, "soft offset needs W >= 2");
  // list[w - 1] = score of shift w mod W, for w = 1..W.
  std::vector<double> list(W);
  for (std::size_t w = 1; w <= W; ++w) list[w - 1] = scores[w % W];
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(list.begin(), list.end()) -
                               list.begin()) + 1;
  const std::size_t center = (W + 1) / 2;
  // shifted[j - 1] = list at position j - center + peak (1-based, circular).
  std::vector<double> shifted(W);
  for (std::size_t j = 1; j <= W; ++j) {
    const std::size_t src = (j + peak + W - center - 1) % W;  // 0-based
    shifted[j - 1] = list[src];
  }
  double d = soft_offset(shifted, temperature) + static_cast<double>(peak) -
             static_cast<double>(center);
  const double period = static_cast<double>(W);
  while (d < 0.5) d += period;
  while (d >= period + 0.5) d -= period;
  return d;
}

CandidateTransform pair_transform(const Patch& patch_p,
                                  const PatchDescriptor& desc_p,
                                  const Patch& patch_q,
                                  const PatchDescriptor& desc_q,
                                  double temperature) {
  if (!(desc_p.shape == desc_q.shape)) {
    throw Error(ErrorCode::Parameter, "descriptor shapes differ");
  }
  std::vector<double> beta = yaw_score(desc_p.cyl, desc_q.cyl, desc_p.shape);
  double np = 0.0;
  double nq = 0.0;
  for (float v : desc_p.cyl) np += static_cast<double>(v) * v;
  for (float v : desc_q.cyl) nq += static_cast<double>(v) * v;
  const double norm = std::sqrt(np * nq);
  if (norm > 0.0) {
    for (double& b : beta) b /= norm;
  }
  CandidateTransform out;
  out.scale = patch_p.scale;
  out.yaw_offset = circular_soft_offset(beta, temperature);
  const Mat3 r_p = align_to_z(patch_p.frame.v3());
  const Mat3 r_q = align_to_z(patch_q.frame.v3());
  out.rotation =
      r_q.transpose() * yaw_rotation(out.yaw_offset, desc_p.shape.sectors) * r_p;
  out.translation = patch_q.center - out.rotation * patch_p.center;
  return out;
}

}  // namespace zeroreg
