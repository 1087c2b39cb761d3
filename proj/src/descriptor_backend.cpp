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
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "zeroreg/patch.hpp"

namespace zeroreg {

namespace {

static_assert(std::endian::native == std::endian::little,
              "descriptor records are read and written on little-endian hosts");

template <typename T>
void put(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <typename T>
T get(const char* data) {
  T value;
  std::memcpy(&value, data, sizeof(T));
  return value;
}

constexpr std::size_t kHeaderBytes = 8 + 1 + 4;

}  // namespace

std::size_t ExternalBackend::KeyHash::operator()(const PatchKey& k) const {
  return static_cast<std::size_t>(k.cloud_id ^
                                  (std::uint64_t{k.keypoint_index} << 2) ^
                                  static_cast<std::uint64_t>(k.scale));
}

ExternalBackend::ExternalBackend(CylShape shape, const std::string& path)
    : shape_(shape) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open descriptor file " + path);
  read(in);
}

ExternalBackend::ExternalBackend(CylShape shape, std::istream& in)
    : shape_(shape) {
  read(in);
}

void ExternalBackend::read(std::istream& in) {
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const std::size_t floats = shape_.size() + shape_.channels;
  const std::size_t record = kHeaderBytes + 4 * floats;
  if (data.size() % record != 0) {
    std::ostringstream msg;
    msg << "descriptor file truncated: record at byte offset "
        << (data.size() / record) * record << " is incomplete";
    throw Error(ErrorCode::Parse, msg.str());
  }
  for (std::size_t off = 0; off < data.size(); off += record) {
    const char* p = data.data() + off;
    PatchKey key;
    key.cloud_id = get<std::uint64_t>(p);
    const auto scale = get<std::uint8_t>(p + 8);
    if (scale > 2) {
      std::ostringstream msg;
      msg << "invalid scale byte " << int{scale} << " at byte offset "
          << off + 8;
      throw Error(ErrorCode::Parse, msg.str());
    }
    key.scale = static_cast<Scale>(scale);
    key.keypoint_index = get<std::uint32_t>(p + 9);
    PatchDescriptor desc;
    desc.shape = shape_;
    desc.keypoint_index = key.keypoint_index;
    desc.cyl.resize(shape_.size());
    desc.vec.resize(shape_.channels);
    const char* f = p + kHeaderBytes;
    std::memcpy(desc.cyl.data(), f, 4 * desc.cyl.size());
    std::memcpy(desc.vec.data(), f + 4 * desc.cyl.size(), 4 * desc.vec.size());
    for (std::size_t i = 0; i < desc.cyl.size(); ++i) {
      if (!std::isfinite(desc.cyl[i])) {
        std::ostringstream msg;
        msg << "non-finite descriptor value at byte offset "
            << off + kHeaderBytes + 4 * i;
        throw Error(ErrorCode::Parse, msg.str());
      }
    }
    records_[key] = std::move(desc);
  }
}

PatchDescriptor ExternalBackend::describe(const Patch&,
                                          const PatchKey& key) const {
  const auto it = records_.find(key);
  if (it == records_.end()) {
    std::ostringstream msg;
    msg << "no stored descriptor for cloud " << key.cloud_id << ", "
        << to_string(key.scale) << " keypoint " << key.keypoint_index;
    throw Error(ErrorCode::SparsePatch, msg.str());
  }
  return it->second;
}

void write_descriptor_record(std::ostream& out, const PatchKey& key,
                             const PatchDescriptor& desc) {
  if (desc.cyl.size() != desc.shape.size() ||
      desc.vec.size() != desc.shape.channels) {
    throw Error(ErrorCode::Parameter, "descriptor does not match its shape");
  }
  put<std::uint64_t>(out, key.cloud_id);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(key.scale));
  put<std::uint32_t>(out, key.keypoint_index);
  for (float v : desc.cyl) put<float>(out, v);
  for (float v : desc.vec) put<float>(out, v);
}

std::uint64_t cloud_id(const PointCloud& cloud) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : cloud.points()) {
    for (int a = 0; a < 3; ++a) {
      unsigned char bytes[8];
      const double v = p[a];
      std::memcpy(bytes, &v, 8);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

}  // namespace zeroreg
