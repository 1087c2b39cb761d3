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
#include "zeroreg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

#include "zeroreg/parallel.hpp"

namespace zeroreg {
namespace {

constexpr double kMinTriangleArea = 1e-9;
constexpr std::size_t kRansacBlock = 256;

// Largest and second-largest eigenvalue of the weighted scatter; a collinear
// set has the second one at zero.
bool spread_is_planar(const Mat3& scatter) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(scatter, Eigen::EigenvaluesOnly);
  const Vec3 ev = es.eigenvalues();  // ascending
  if (!(ev[2] > 1e-24)) return false;
  return ev[1] > 1e-12 * ev[2];
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

Pose kabsch(std::span<const Correspondence> pairs,
            std::span<const double> weights) {
  if (!weights.empty() && weights.size() != pairs.size())
    throw Error(ErrorCode::Parameter, "kabsch: weight count mismatch");
  std::size_t active = 0;
  double total = 0.0;
  Vec3 p_mean = Vec3::Zero(), q_mean = Vec3::Zero();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::Parameter, "kabsch: weights must be >= 0");
    if (w == 0.0) continue;
    ++active;
    total += w;
    p_mean += w * pairs[i].source;
    q_mean += w * pairs[i].target;
  }
  if (active < 3)
    throw Error(ErrorCode::DegenerateModel,
                "kabsch: need at least 3 weighted pairs");
  p_mean /= total;
  q_mean /= total;

  Mat3 cross = Mat3::Zero(), sp = Mat3::Zero(), sq = Mat3::Zero();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (w == 0.0) continue;
    const Vec3 a = pairs[i].source - p_mean;
    const Vec3 b = pairs[i].target - q_mean;
    cross += w * a * b.transpose();
    sp += w * a * a.transpose();
    sq += w * b * b.transpose();
  }
  if (!spread_is_planar(sp) || !spread_is_planar(sq))
    throw Error(ErrorCode::DegenerateModel,
                "kabsch: points are collinear or coincident");

  Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  Pose pose;
  pose.rotation = v * d * u.transpose();
  pose.translation = q_mean - pose.rotation * p_mean;
  return pose;
}

namespace {

struct Hypothesis {
  bool valid = false;
  std::size_t count = 0;
  double residual_sum = 0.0;
  Pose pose;
};

Hypothesis score(std::span<const Correspondence> pairs, const Pose& pose,
                 double epsilon) {
  Hypothesis h;
  h.valid = true;
  h.pose = pose;
  for (const auto& c : pairs) {
    const double r = (pose.apply(c.source) - c.target).norm();
    if (r < epsilon) {
      ++h.count;
      h.residual_sum += r;
    }
  }
  return h;
}

std::vector<std::size_t> inliers_of(std::span<const Correspondence> pairs,
                                    const Pose& pose, double epsilon) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if ((pose.apply(pairs[i].source) - pairs[i].target).norm() < epsilon)
      out.push_back(i);
  return out;
}

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.count != b.count) return a.count > b.count;
  return a.residual_sum < b.residual_sum;
}

}  // namespace

RansacResult ransac(std::span<const Correspondence> pairs,
                    const RansacOptions& options) {
  if (pairs.size() < 3)
    throw Error(ErrorCode::InsufficientData, "ransac: need at least 3 pairs");
  if (!(options.epsilon > 0.0))
    throw Error(ErrorCode::Parameter, "ransac: epsilon must be > 0");
  if (options.max_iters == 0)
    throw Error(ErrorCode::Parameter, "ransac: max_iters must be > 0");

  const std::size_t n = pairs.size();
  Hypothesis best;
  RansacResult result;
  std::vector<Hypothesis> block(kRansacBlock);
  bool done = false;
  for (std::size_t start = 0; start < options.max_iters && !done;
       start += kRansacBlock) {
    const std::size_t count = std::min(kRansacBlock, options.max_iters - start);
    parallel_for(count, [&](std::size_t b) {
      Rng rng(derive_seed(options.seed, start + b));
      const auto idx = sample_without_replacement(n, 3, rng);
      const auto& a = pairs[idx[0]];
      const auto& c1 = pairs[idx[1]];
      const auto& c2 = pairs[idx[2]];
      Hypothesis h;
      if (triangle_area(a.source, c1.source, c2.source) >= kMinTriangleArea &&
          triangle_area(a.target, c1.target, c2.target) >= kMinTriangleArea) {
        const Correspondence sample[3] = {a, c1, c2};
        try {
          h = score(pairs, kabsch(sample), options.epsilon);
        } catch (const Error&) {
          h.valid = false;
        }
      }
      block[b] = std::move(h);
    });
    for (std::size_t b = 0; b < count; ++b) {
      if (better(block[b], best)) best = block[b];
      result.iterations = start + b + 1;
      if (best.valid && best.count > 0) {
        const double w = static_cast<double>(best.count) / n;
        const double fail =
            std::pow(1.0 - w * w * w, static_cast<double>(result.iterations));
        if (fail < options.failure_probability) {
          result.converged = true;
          done = true;
          break;
        }
      }
    }
  }
  if (!best.valid)
    throw Error(ErrorCode::DegenerateModel,
                "ransac: every minimal sample was degenerate");

  result.pose = best.pose;
  result.inliers = inliers_of(pairs, best.pose, options.epsilon);
  if (result.inliers.size() >= 3) {
    std::vector<Correspondence> in;
    in.reserve(result.inliers.size());
    for (std::size_t i : result.inliers) in.push_back(pairs[i]);
    try {
      const Pose refit = kabsch(in);
      auto refit_inliers = inliers_of(pairs, refit, options.epsilon);
      if (refit_inliers.size() >= result.inliers.size()) {
        result.pose = refit;
        result.inliers = std::move(refit_inliers);
      }
    } catch (const Error&) {
      // keep the minimal-sample model
    }
  }
  result.low_confidence = !result.converged || result.inliers.size() <= 3;
  return result;
}

double total_cost(std::span<const Correspondence> pairs, const Pose& pose,
                  const RobustKernel& kernel) {
  double sum = 0.0;
  for (const auto& c : pairs)
    sum += kernel_eval(kernel, (pose.apply(c.source) - c.target).norm());
  return sum;
}

namespace {

std::vector<double> residuals(std::span<const Correspondence> pairs,
                              const Pose& pose) {
  std::vector<double> r(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    r[i] = (pose.apply(pairs[i].source) - pairs[i].target).norm();
  return r;
}

// Runs IRLS at a fixed kernel. Returns false when the weights collapsed.
bool irls_at(std::span<const Correspondence> pairs, const RobustKernel& kernel,
             std::size_t iters, Pose& pose, IrlsResult& out) {
  double cost = total_cost(pairs, pose, kernel);
  out.history.push_back({kernel.mu, cost, true});
  std::vector<double> w(pairs.size());
  for (std::size_t it = 0; it < iters; ++it) {
    const auto r = residuals(pairs, pose);
    bool any = false;
    for (std::size_t i = 0; i < r.size(); ++i) {
      w[i] = kernel_weight(kernel, r[i]);
      if (w[i] < 1e-12) w[i] = 0.0;
      any = any || w[i] > 0.0;
    }
    if (!any) return false;
    Pose next;
    try {
      next = kabsch(pairs, w);
    } catch (const Error&) {
      return false;
    }
    const double next_cost = total_cost(pairs, next, kernel);
    ++out.iterations;
    out.history.push_back({kernel.mu, next_cost, false});
    const bool moved = (next.rotation - pose.rotation).norm() > 1e-14 ||
                       (next.translation - pose.translation).norm() > 1e-14;
    pose = next;
    if (!moved || std::abs(cost - next_cost) <= 1e-15 * (1.0 + cost)) break;
    cost = next_cost;
  }
  return true;
}

}  // namespace

IrlsResult irls_refine(std::span<const Correspondence> pairs,
                       const Pose& initial, const RobustKernel& kernel,
                       const IrlsOptions& options) {
  kernel.validate();
  if (pairs.size() < 3)
    throw Error(ErrorCode::InsufficientData, "irls: need at least 3 pairs");
  if (!is_rotation(initial.rotation, 1e-6))
    throw Error(ErrorCode::Parameter, "irls: initial rotation is not in SO(3)");

  IrlsResult out;
  Pose pose = initial;
  const bool gnc = options.gnc && (kernel.kind == KernelKind::GemanMcClure ||
                                   kernel.kind == KernelKind::TruncatedLeastSquares);
  if (!gnc) {
    out.stalled = !irls_at(pairs, kernel, options.iters, pose, out);
    out.pose = pose;
    return out;
  }

  double r_max_sq = 0.0;
  for (double r : residuals(pairs, initial)) r_max_sq = std::max(r_max_sq, r * r);
  const double c2 = kernel.c_bar * kernel.c_bar;
  RobustKernel k = kernel;
  if (kernel.kind == KernelKind::GemanMcClure) {
    // Large mu makes GM nearly quadratic over the initial residual range.
    double mu = std::max(kernel.mu, 2.0 * r_max_sq / c2);
    while (true) {
      k.mu = mu;
      if (!irls_at(pairs, k, options.iters, pose, out)) {
        out.stalled = true;
        break;
      }
      if (mu <= kernel.mu) break;
      mu = std::max(kernel.mu, mu / options.gm_factor);
    }
  } else {
    // Small mu makes every initial residual fall in the convex middle branch.
    double mu = 2.0 * r_max_sq > c2 ? c2 / (2.0 * r_max_sq - c2) : kernel.mu;
    mu = std::min(mu, kernel.mu);
    while (true) {
      k.mu = mu;
      if (!irls_at(pairs, k, options.iters, pose, out)) {
        out.stalled = true;
        break;
      }
      if (mu >= kernel.mu) break;
      mu = std::min(kernel.mu, mu * options.tls_factor);
    }
  }
  out.pose = pose;
  return out;
}

}  // namespace zeroreg
