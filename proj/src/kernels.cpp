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
#include <algorithm>
#include <cmath>
#include <limits>

#include "zeroreg/solver.hpp"

namespace zeroreg {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Squared: return "squared";
    case KernelKind::Huber: return "huber";
    case KernelKind::GemanMcClure: return "gm";
    case KernelKind::TruncatedLeastSquares: return "tls";
  }
  return "unknown";
}

void RobustKernel::validate() const {
  if (!(c_bar > 0.0) || !(mu > 0.0) || !(delta > 0.0) || !std::isfinite(c_bar) ||
      !std::isfinite(mu) || !std::isfinite(delta))
    throw Error(ErrorCode::Parameter,
                "kernel: c_bar, mu and delta must be finite and > 0");
}

double kernel_eval(const RobustKernel& k, double r) {
  const double r2 = r * r;
  switch (k.kind) {
    case KernelKind::Squared:
      return r2;
    case KernelKind::Huber: {
      const double a = std::abs(r);
      return a <= k.delta ? 0.5 * r2 : k.delta * (a - 0.5 * k.delta);
    }
    case KernelKind::GemanMcClure: {
      const double m = k.mu * k.c_bar * k.c_bar;
      return m * r2 / (m + r2);
    }
    case KernelKind::TruncatedLeastSquares: {
      const double c2 = k.c_bar * k.c_bar;
      if (r2 <= k.mu / (k.mu + 1.0) * c2) return r2;
      if (r2 >= (k.mu + 1.0) / k.mu * c2) return c2;
      return 2.0 * k.c_bar * std::abs(r) * std::sqrt(k.mu * (k.mu + 1.0)) -
             k.mu * (c2 + r2);
    }
  }
  return r2;
}

double kernel_weight(const RobustKernel& k, double r) {
  const double r2 = r * r;
  switch (k.kind) {
    case KernelKind::Squared:
      return 1.0;
    case KernelKind::Huber: {
      const double a = std::abs(r);
      return a <= k.delta ? 1.0 : k.delta / a;
    }
    case KernelKind::GemanMcClure: {
      const double m = k.mu * k.c_bar * k.c_bar;
      const double w = m / (m + r2);
      return w * w;
    }
    case KernelKind::TruncatedLeastSquares: {
      const double c2 = k.c_bar * k.c_bar;
      if (r2 <= k.mu / (k.mu + 1.0) * c2) return 1.0;
      if (r2 >= (k.mu + 1.0) / k.mu * c2) return 0.0;
      return k.c_bar * std::sqrt(k.mu * (k.mu + 1.0)) / std::abs(r) - k.mu;
    }
  }
  return 1.0;
}

const char* to_string(LShapeCase c) {
  switch (c) {
    case LShapeCase::LongOverlap: return "long";
    case LShapeCase::ShortOverlap: return "short";
    case LShapeCase::FullOverlap: return "full";
  }
  return "unknown";
}

namespace {

// Spacing 1/16 keeps every coordinate and every placement exact in binary.
constexpr double kStep = 0.0625;
constexpr int kLongSteps = 32;   // 2 m
constexpr int kShortSteps = 16;  // 1 m

std::vector<Vec3> lshape() {
  std::vector<Vec3> pts;
  for (int k = 0; k <= kLongSteps; ++k) pts.emplace_back(k * kStep, 0.0, 0.0);
  for (int k = 1; k <= kShortSteps; ++k) pts.emplace_back(0.0, k * kStep, 0.0);
  return pts;
}

Pose placement(LShapeCase c) {
  Pose p;
  switch (c) {
    case LShapeCase::FullOverlap:
      break;
    case LShapeCase::LongOverlap:
      // half turn about z, long arm slid back onto itself
      p.rotation = Vec3(-1.0, -1.0, 1.0).asDiagonal();
      p.translation = Vec3(kLongSteps * kStep, 0.0, 0.0);
      break;
    case LShapeCase::ShortOverlap:
      // half turn about y keeps the short arm, flips the long one
      p.rotation = Vec3(-1.0, 1.0, -1.0).asDiagonal();
      break;
  }
  return p;
}

}  // namespace

std::vector<double> lshape_residuals(LShapeCase overlap) {
  const auto target = lshape();
  const Pose pose = placement(overlap);
  std::vector<double> out;
  for (const Vec3& s : target) {
    const Vec3 x = pose.apply(s);
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& t : target) best = std::min(best, (x - t).norm());
    out.push_back(best);
  }
  return out;
}

std::vector<LShapeRow> lshape_ambiguity_demo(std::span<const double> mus,
                                             std::span<const double> c_bars) {
  std::vector<LShapeRow> rows;
  const LShapeCase cases[] = {LShapeCase::LongOverlap, LShapeCase::ShortOverlap,
                              LShapeCase::FullOverlap};
  const KernelKind kinds[] = {KernelKind::GemanMcClure,
                              KernelKind::TruncatedLeastSquares};
  for (LShapeCase c : cases) {
    const auto r = lshape_residuals(c);
    const auto non_overlapped = static_cast<std::size_t>(
        std::count_if(r.begin(), r.end(), [](double x) { return x > 0.0; }));
    for (KernelKind kind : kinds)
      for (double c_bar : c_bars)
        for (double mu : mus) {
          RobustKernel k;
          k.kind = kind;
          k.c_bar = c_bar;
          k.mu = mu;
          k.validate();
          double cost = 0.0;
          for (double x : r) cost += kernel_eval(k, x);
          rows.push_back({kind, mu, c_bar, c, cost, non_overlapped});
        }
  }
  return rows;
}

}  // namespace zeroreg
