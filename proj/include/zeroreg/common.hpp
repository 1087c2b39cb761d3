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
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace zeroreg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Failure categories shared by every module. The C API maps these one-to-one
// onto zr_status codes.
enum class ErrorCode {
  Parameter,
  EmptyInput,
  DegenerateGeometry,
  OutOfRange,
  SparsePatch,
  ScaleEmpty,
  InsufficientConsensus,
  InsufficientData,
  DegenerateModel,
  Parse,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Scale levels of the multi-scale embedder, in pipeline order.
enum class Scale : std::uint8_t { Local = 0, Middle = 1, Global = 2 };

inline constexpr Scale kAllScales[] = {Scale::Local, Scale::Middle,
                                       Scale::Global};

const char* to_string(Scale scale);

struct Correspondence {
  Vec3 source;
  Vec3 target;
};

}  // namespace zeroreg
