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

#include "zeroreg/common.hpp"

namespace zeroreg {

Mat3 skew(const Vec3& v);

// Rodrigues rotation taking the unit vector `axis` onto +z:
//   R = I + [n]x + [n]x^2 / (1 + cos(theta)),  n = axis x z,
// which equals I + sin(theta)[n^]x + (1 - cos(theta))[n^]x^2 with the unit
// axis n^. An exactly antipodal input uses a half turn about x.
// Throws Parameter if |axis| deviates from 1 by more than 1e-6.
Mat3 align_to_z(const Vec3& axis);

// Rotation about +z by 2*pi*offset/sectors.
Mat3 yaw_rotation(double offset, std::size_t sectors);

// Rigid transform x -> rotation * x + translation.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Pose inverse() const {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }
  // (a * b).apply(x) == a.apply(b.apply(x))
  Pose operator*(const Pose& b) const {
    return {rotation * b.rotation, rotation * b.translation + translation};
  }
};

// True if R is orthonormal with det +1 to within tol (max-abs entry error).
bool is_rotation(const Mat3& r, double tol = 1e-6);

}  // namespace zeroreg
