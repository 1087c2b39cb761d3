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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "zeroreg/geometry.hpp"

namespace zeroreg {

// Weighted least-squares rigid fit minimizing sum w_i ||R p_i + t - q_i||^2
// (SVD of the cross-covariance with reflection correction). Empty weights
// mean uniform. Throws DegenerateModel for fewer than 3 weighted pairs or
// collinear/coincident points.
Pose kabsch(std::span<const Correspondence> pairs,
            std::span<const double> weights = {});

struct RansacOptions {
  double epsilon = 0.1;
  std::size_t max_iters = 50000;
  std::uint64_t seed = 0;
  // Stop once (1 - w^3)^k drops below this, w being the best inlier ratio.
  double failure_probability = 0.01;
};

struct RansacResult {
  Pose pose;
  std::vector<std::size_t> inliers;  // ||R p + t - q|| < epsilon, ascending
  std::size_t iterations = 0;
  bool converged = false;       // the confidence bound was met
  bool low_confidence = false;  // not converged, or only a minimal sample agrees
};

// 3-point hypothesize-and-verify. Minimal samples whose source or target
// triangle has area < 1e-9 m^2 are skipped. Every iteration draws from its
// own seeded stream, so results do not depend on the thread count.
RansacResult ransac(std::span<const Correspondence> pairs,
                    const RansacOptions& options);

enum class KernelKind { Squared, Huber, GemanMcClure, TruncatedLeastSquares };

const char* to_string(KernelKind kind);

struct RobustKernel {
  KernelKind kind = KernelKind::Squared;
  double c_bar = 1.0;  // GM / TLS shape threshold
  double mu = 1.0;     // GM / TLS control parameter
  double delta = 1.0;  // Huber threshold

  void validate() const;
};

// Cost of a residual r under the kernel:
//   squared  r^2
//   huber    r^2 / 2 if |r| <= delta, else delta (|r| - delta / 2)
//   gm       mu c^2 r^2 / (mu c^2 + r^2)
//   tls      r^2                                   r^2 <= mu/(mu+1) c^2
//            2 c |r| sqrt(mu (mu+1)) - mu (c^2 + r^2)  in between
//            c^2                                   r^2 >= (mu+1)/mu c^2
double kernel_eval(const RobustKernel& kernel, double r);

// IRLS weight f'(r^2) where cost = f(r^2) (Huber scaled by 2). Each f is
// concave in r^2, so reweighted least squares never increases the cost:
//   squared  1
//   huber    1, or delta / |r| beyond delta
//   gm       (mu c^2 / (mu c^2 + r^2))^2
//   tls      1, c sqrt(mu (mu+1)) / |r| - mu, or 0 (by the same branches)
double kernel_weight(const RobustKernel& kernel, double r);

struct IrlsOptions {
  std::size_t iters = 20;  // per mu value
  // Graduated non-convexity: GM starts at a large mu and halves it down to
  // kernel.mu; TLS starts near 0 and grows mu by 1.4x up to kernel.mu.
  bool gnc = false;
  double gm_factor = 2.0;
  double tls_factor = 1.4;
};

struct IrlsStep {
  double mu = 0.0;
  double cost = 0.0;
  bool initial = false;  // first evaluation at this mu
};

struct IrlsResult {
  Pose pose;
  bool stalled = false;  // every weight fell below 1e-12
  std::size_t iterations = 0;
  std::vector<IrlsStep> history;
};

IrlsResult irls_refine(std::span<const Correspondence> pairs,
                       const Pose& initial, const RobustKernel& kernel,
                       const IrlsOptions& options = {});

double total_cost(std::span<const Correspondence> pairs, const Pose& pose,
                  const RobustKernel& kernel);

// Two identical L-shaped point sets (long arm 2 m along x, short arm 1 m
// along y, 1/16 m spacing) placed three ways against each other.
enum class LShapeCase { LongOverlap, ShortOverlap, FullOverlap };

const char* to_string(LShapeCase c);

struct LShapeRow {
  KernelKind kernel = KernelKind::GemanMcClure;
  double mu = 0.0;
  double c_bar = 0.0;
  LShapeCase overlap = LShapeCase::FullOverlap;
  double cost = 0.0;
  std::size_t non_overlapped = 0;  // points with a nonzero residual
};

// Residual of every source point (nearest target point distance) for one
// placement.
std::vector<double> lshape_residuals(LShapeCase overlap);

// Total GM and TLS cost of each placement over the mu x c_bar sweep.
std::vector<LShapeRow> lshape_ambiguity_demo(
    std::span<const double> mus = std::array{0.1, 1.0, 10.0, 100.0},
    std::span<const double> c_bars = std::array{0.1, 1.0});

}  // namespace zeroreg
