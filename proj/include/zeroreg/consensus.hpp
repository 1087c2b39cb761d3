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

#include <cstdint>
#include <vector>

#include "zeroreg/matching.hpp"

namespace zeroreg {

// Pooled hypotheses from every scale. candidates[n] was produced by pairs[n].
struct CandidateSet {
  std::vector<CandidateTransform> candidates;
  std::vector<Correspondence> pairs;

  std::size_t size() const { return candidates.size(); }
};

struct ConsensusResult {
  CandidateTransform best_transform;
  std::size_t best_index = 0;  // into CandidateSet::candidates
  std::vector<std::size_t> inliers;  // ascending pair indices
  std::size_t inlier_count = 0;
  double mean_residual = 0.0;
  std::size_t evaluated = 0;  // candidates scored
};

// Inlier threshold used when the configuration does not override it.
double default_epsilon(double voxel_size);

// Maximizes |{n : ||R p_n + t - q_n|| < epsilon}| over the candidates.
// Ties go to the lower mean inlier residual, then the lower candidate index.
// Above max_candidates a seeded uniform subset of candidates is scored (all
// pairs are always used). Throws EmptyInput for an empty set and
// InsufficientConsensus when the winner has fewer than 3 inliers.
ConsensusResult consensus_maximize(const CandidateSet& set, double epsilon,
                                   std::size_t max_candidates,
                                   std::uint64_t seed);

}  // namespace zeroreg
