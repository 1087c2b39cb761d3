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
#include "zeroreg/consensus.hpp"

#include <numeric>
#include <sstream>

#include "zeroreg/parallel.hpp"

namespace zeroreg {

double default_epsilon(double voxel_size) {
  if (!(voxel_size > 0.0)) {
    throw Error(ErrorCode::Parameter, "voxel size must be positive");
  }
  return 2.0 * voxel_size;
}

ConsensusResult consensus_maximize(const CandidateSet& set, double epsilon,
                                   std::size_t max_candidates,
                                   std::uint64_t seed) {
  if (set.candidates.empty()) {
    throw Error(ErrorCode::EmptyInput, "no candidate transforms");
  }
  if (set.candidates.size() != set.pairs.size()) {
    throw Error(ErrorCode::Parameter, "candidate and pair counts differ");
  }
  if (!(epsilon > 0.0)) throw Error(ErrorCode::Parameter, "epsilon must be > 0");
  if (max_candidates == 0) {
    throw Error(ErrorCode::Parameter, "max_candidates must be >= 1");
  }

  std::vector<std::size_t> evaluated;
  if (set.size() > max_candidates) {
    Rng rng(seed);
    evaluated = sample_without_replacement(set.size(), max_candidates, rng);
  } else {
    evaluated.resize(set.size());
    std::iota(evaluated.begin(), evaluated.end(), std::size_t{0});
  }

  struct Score {
    std::size_t count = 0;
    double residual_sum = 0.0;
  };
  std::vector<Score> scores(evaluated.size());
  parallel_for(evaluated.size(), [&](std::size_t k) {
    const auto& c = set.candidates[evaluated[k]];
    Score s;
    for (const auto& pair : set.pairs) {
      const double r =
          (c.rotation * pair.source + c.translation - pair.target).norm();
      if (r < epsilon) {
        ++s.count;
        s.residual_sum += r;
      }
    }
    scores[k] = s;
  });

  // Fixed-order reduction: strictly better replaces, so equal scores keep the
  // lower candidate index.
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    const Score& a = scores[k];
    const Score& b = scores[best];
    if (a.count > b.count) {
      best = k;
    } else if (a.count == b.count && a.count > 0) {
      // mean_a < mean_b without dividing: sum_a * n < sum_b * n.
      if (a.residual_sum < b.residual_sum) best = k;
    }
  }

  ConsensusResult out;
  out.evaluated = evaluated.size();
  out.best_index = evaluated[best];
  out.best_transform = set.candidates[out.best_index];
  const auto& c = out.best_transform;
  double sum = 0.0;
  for (std::size_t n = 0; n < set.pairs.size(); ++n) {
    const double r =
        (c.rotation * set.pairs[n].source + c.translation - set.pairs[n].target)
            .norm();
    if (r < epsilon) {
      out.inliers.push_back(n);
      sum += r;
    }
  }
  out.inlier_count = out.inliers.size();
  out.mean_residual = out.inlier_count ? sum / out.inlier_count : 0.0;
  if (out.inlier_count < 3) {
    std::ostringstream msg;
    msg << "best candidate explains only " << out.inlier_count
        << " pairs (< 3)";
    throw Error(ErrorCode::InsufficientConsensus, msg.str());
  }
  return out;
}

}  // namespace zeroreg
