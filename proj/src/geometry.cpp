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
#include "zeroreg/geometry.hpp"

#include <cmath>
#include <numbers>

namespace zeroreg {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

Mat3 align_to_z(const Vec3& axis) {
  const double norm = axis.norm();
  if (!(std::abs(norm - 1.0) <= 1e-6)) {
    throw Error(ErrorCode::Parameter, "align_to_z expects a unit vector");
  }
  const Vec3 v = axis / norm;
  const Vec3 n = v.cross(Vec3::UnitZ());
  const double c = v.z();
  const double s2 = n.squaredNorm();
  if (s2 == 0.0) {
    if (c > 0.0) return Mat3::Identity();
    return Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  }
  // 1 / (1 + c) loses precision near the antipode; (1 - c) / s^2 does not.
  const double k = c >= 0.0 ? 1.0 / (1.0 + c) : (1.0 - c) / s2;
  const Mat3 nx = skew(n);
  return Mat3::Identity() + nx + k * nx * nx;
}

Mat3 yaw_rotation(double offset, std::size_t sectors) {
  if (sectors < 2) throw Error(ErrorCode::Parameter, "yaw needs W >= 2");
  const double angle =
      2.0 * std::numbers::pi * offset / static_cast<double>(sectors);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

bool is_rotation(const Mat3& r, double tol) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho < tol && std::abs(r.determinant() - 1.0) < tol;
}

}  // namespace zeroreg
