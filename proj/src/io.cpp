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
#include "zeroreg/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/SVD>

namespace zeroreg {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

const char* to_string(CloudFormat format) {
  switch (format) {
    case CloudFormat::PlyAscii: return "ply_ascii";
    case CloudFormat::PlyBinaryLe: return "ply_binary_le";
    case CloudFormat::KittiBin: return "kitti_bin";
    case CloudFormat::XyzText: return "xyz_text";
  }
  return "unknown";
}

std::optional<CloudFormat> parse_cloud_format(std::string_view name) {
  if (name == "ply_ascii") return CloudFormat::PlyAscii;
  if (name == "ply_binary_le" || name == "ply") return CloudFormat::PlyBinaryLe;
  if (name == "kitti_bin") return CloudFormat::KittiBin;
  if (name == "xyz_text" || name == "xyz") return CloudFormat::XyzText;
  return std::nullopt;
}

std::optional<CloudFormat> format_from_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  std::string ext(path.substr(dot + 1));
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == "ply") return CloudFormat::PlyBinaryLe;
  if (ext == "bin") return CloudFormat::KittiBin;
  if (ext == "xyz" || ext == "txt") return CloudFormat::XyzText;
  return std::nullopt;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  return s;
}

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::Parse, where + ": " + what);
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }
std::string at_byte(std::size_t offset) {
  return "byte offset " + std::to_string(offset);
}

double parse_number(std::string_view tok, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    parse_error(where, "invalid number '" + std::string(tok) + "'");
  if (!std::isfinite(v)) parse_error(where, "non-finite value");
  return v;
}

struct PlyProperty {
  std::string name;
  std::string type;
  std::size_t size = 0;
};

std::size_t ply_type_size(std::string_view t) {
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  if (t == "int" || t == "uint" || t == "int32" || t == "uint32" ||
      t == "float" || t == "float32")
    return 4;
  if (t == "double" || t == "float64") return 8;
  return 0;
}

template <class T>
double load_as(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return static_cast<double>(v);
}

double decode(const PlyProperty& prop, const char* p) {
  const auto& t = prop.type;
  if (t == "char" || t == "int8") return load_as<std::int8_t>(p);
  if (t == "uchar" || t == "uint8") return load_as<std::uint8_t>(p);
  if (t == "short" || t == "int16") return load_as<std::int16_t>(p);
  if (t == "ushort" || t == "uint16") return load_as<std::uint16_t>(p);
  if (t == "int" || t == "int32") return load_as<std::int32_t>(p);
  if (t == "uint" || t == "uint32") return load_as<std::uint32_t>(p);
  if (t == "float" || t == "float32") return load_as<float>(p);
  return load_as<double>(p);
}

PointCloud read_ply(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  const auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next_line() || strip(line) != "ply")
    parse_error(at_line(1), "missing 'ply' magic");

  bool ascii = false, have_format = false, in_vertex = false, seen_element = false;
  std::size_t vertex_count = 0;
  bool have_vertex = false;
  std::vector<PlyProperty> props;
  while (true) {
    if (!next_line()) parse_error(at_line(line_no + 1), "header ends before end_header");
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string where = at_line(line_no);
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() != 3) parse_error(where, "malformed format line");
      if (tok[1] == "ascii") ascii = true;
      else if (tok[1] == "binary_little_endian") ascii = false;
      else parse_error(where, "unsupported encoding '" + std::string(tok[1]) + "'");
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) parse_error(where, "malformed element line");
      in_vertex = tok[1] == "vertex";
      if (in_vertex) {
        if (seen_element) parse_error(where, "vertex must be the first element");
        std::size_t n = 0;
        const auto [ptr, ec] =
            std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), n);
        if (ec != std::errc() || ptr != tok[2].data() + tok[2].size())
          parse_error(where, "invalid vertex count");
        vertex_count = n;
        have_vertex = true;
      }
      seen_element = true;
    } else if (tok[0] == "property") {
      if (!seen_element) parse_error(where, "property before any element");
      if (!in_vertex) continue;
      if (tok.size() >= 2 && tok[1] == "list")
        parse_error(where, "list properties are not supported on vertices");
      if (tok.size() != 3) parse_error(where, "malformed property line");
      const std::size_t size = ply_type_size(tok[1]);
      if (size == 0) parse_error(where, "unknown type '" + std::string(tok[1]) + "'");
      props.push_back({std::string(tok[2]), std::string(tok[1]), size});
    } else {
      parse_error(where, "unexpected header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_format) parse_error(at_line(line_no), "missing format line");
  if (!have_vertex) parse_error(at_line(line_no), "missing vertex element");

  int ix = -1, iy = -1, iz = -1, ii = -1;
  for (std::size_t k = 0; k < props.size(); ++k) {
    const auto& n = props[k].name;
    const int kk = static_cast<int>(k);
    if (n == "x") ix = kk;
    else if (n == "y") iy = kk;
    else if (n == "z") iz = kk;
    else if (n == "intensity") ii = kk;
  }
  if (ix < 0 || iy < 0 || iz < 0)
    parse_error(at_line(line_no), "vertex element lacks x/y/z properties");

  std::vector<Vec3> pts;
  std::vector<float> intensity;
  pts.reserve(vertex_count);
  std::vector<double> vals(props.size());
  const auto emit = [&](const std::string& where) {
    const Vec3 p(vals[ix], vals[iy], vals[iz]);
    if (!p.allFinite()) parse_error(where, "non-finite coordinate");
    pts.push_back(p);
    if (ii >= 0) {
      if (!std::isfinite(vals[ii])) parse_error(where, "non-finite intensity");
      intensity.push_back(static_cast<float>(vals[ii]));
    }
  };
  if (ascii) {
    for (std::size_t v = 0; v < vertex_count; ++v) {
      if (!next_line())
        parse_error(at_line(line_no + 1), "file ends after " + std::to_string(v) +
                                              " of " + std::to_string(vertex_count) +
                                              " vertices");
      const auto tok = split_ws(line);
      const std::string where = at_line(line_no);
      if (tok.size() < props.size())
        parse_error(where, "expected " + std::to_string(props.size()) + " values");
      for (std::size_t k = 0; k < props.size(); ++k)
        vals[k] = parse_number(tok[k], where);
      emit(where);
    }
  } else {
    std::size_t stride = 0;
    for (const auto& p : props) stride += p.size;
    std::vector<char> rec(stride);
    for (std::size_t v = 0; v < vertex_count; ++v) {
      in.read(rec.data(), static_cast<std::streamsize>(stride));
      if (in.gcount() != static_cast<std::streamsize>(stride))
        parse_error(at_byte(offset), "truncated vertex record " + std::to_string(v));
      std::size_t at = 0;
      for (std::size_t k = 0; k < props.size(); ++k) {
        vals[k] = decode(props[k], rec.data() + at);
        at += props[k].size;
      }
      emit(at_byte(offset));
      offset += stride;
    }
  }
  return PointCloud(std::move(pts), std::move(intensity));
}

PointCloud read_kitti(std::istream& in) {
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (buf.size() % 16 != 0)
    parse_error(at_byte(buf.size() - buf.size() % 16),
                "truncated record (file size is not a multiple of 16)");
  const std::size_t n = buf.size() / 16;
  std::vector<Vec3> pts(n);
  std::vector<float> intensity(n);
  for (std::size_t i = 0; i < n; ++i) {
    float f[4];
    std::memcpy(f, buf.data() + 16 * i, 16);
    for (float x : f)
      if (!std::isfinite(x)) parse_error(at_byte(16 * i), "non-finite value");
    pts[i] = Vec3(f[0], f[1], f[2]);
    intensity[i] = f[3];
  }
  return PointCloud(std::move(pts), std::move(intensity));
}

PointCloud read_xyz(std::istream& in) {
  std::vector<Vec3> pts;
  std::vector<float> intensity;
  std::string line;
  std::size_t line_no = 0;
  bool with_intensity = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = strip(std::string_view(line));
    if (body.empty() || body.front() == '#') continue;
    const auto tok = split_ws(body);
    const std::string where = at_line(line_no);
    if (tok.size() != 3 && tok.size() != 4)
      parse_error(where, "expected 3 or 4 values, found " + std::to_string(tok.size()));
    if (pts.empty()) with_intensity = tok.size() == 4;
    else if ((tok.size() == 4) != with_intensity)
      parse_error(where, "inconsistent column count");
    pts.emplace_back(parse_number(tok[0], where), parse_number(tok[1], where),
                     parse_number(tok[2], where));
    if (with_intensity)
      intensity.push_back(static_cast<float>(parse_number(tok[3], where)));
  }
  return PointCloud(std::move(pts), std::move(intensity));
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

PointCloud read_cloud(std::istream& in, CloudFormat format) {
  switch (format) {
    case CloudFormat::PlyAscii:
    case CloudFormat::PlyBinaryLe:
      return read_ply(in);  // the header decides the encoding
    case CloudFormat::KittiBin:
      return read_kitti(in);
    case CloudFormat::XyzText:
      return read_xyz(in);
  }
  throw Error(ErrorCode::Parameter, "unknown cloud format");
}

PointCloud load_cloud(const std::string& path, std::optional<CloudFormat> format) {
  if (!format) format = format_from_path(path);
  if (!format)
    throw Error(ErrorCode::Parameter,
                "cannot infer the point cloud format of '" + path + "'");
  auto in = open_in(path);
  try {
    return read_cloud(in, *format);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse)
      throw Error(ErrorCode::Parse, path + ": " + e.what());
    throw;
  }
}

void write_cloud(std::ostream& out, const PointCloud& cloud, CloudFormat format) {
  const bool with_i = cloud.has_intensity();
  const auto f = [](double x) { return static_cast<float>(x); };
  switch (format) {
    case CloudFormat::PlyAscii:
    case CloudFormat::PlyBinaryLe: {
      const bool ascii = format == CloudFormat::PlyAscii;
      out << "ply\nformat " << (ascii ? "ascii" : "binary_little_endian")
          << " 1.0\nelement vertex " << cloud.size()
          << "\nproperty float x\nproperty float y\nproperty float z\n";
      if (with_i) out << "property float intensity\n";
      out << "end_header\n";
      if (ascii) out << std::setprecision(9);
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        float rec[4] = {f(cloud[i].x()), f(cloud[i].y()), f(cloud[i].z()),
                        with_i ? cloud.intensity()[i] : 0.0f};
        if (ascii) {
          out << rec[0] << ' ' << rec[1] << ' ' << rec[2];
          if (with_i) out << ' ' << rec[3];
          out << '\n';
        } else {
          out.write(reinterpret_cast<const char*>(rec), with_i ? 16 : 12);
        }
      }
      break;
    }
    case CloudFormat::KittiBin:
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        const float rec[4] = {f(cloud[i].x()), f(cloud[i].y()), f(cloud[i].z()),
                              with_i ? cloud.intensity()[i] : 0.0f};
        out.write(reinterpret_cast<const char*>(rec), 16);
      }
      break;
    case CloudFormat::XyzText:
      out << std::setprecision(9);
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        out << f(cloud[i].x()) << ' ' << f(cloud[i].y()) << ' ' << f(cloud[i].z());
        if (with_i) out << ' ' << cloud.intensity()[i];
        out << '\n';
      }
      break;
  }
  if (!out) throw Error(ErrorCode::Io, "write failed");
}

void save_cloud(const std::string& path, const PointCloud& cloud,
                std::optional<CloudFormat> format) {
  if (!format) format = format_from_path(path);
  if (!format)
    throw Error(ErrorCode::Parameter,
                "cannot infer the point cloud format of '" + path + "'");
  auto out = open_out(path);
  write_cloud(out, cloud, *format);
}

const char* to_string(PoseFormat format) {
  return format == PoseFormat::KittiOdometry ? "kitti_odometry" : "tum";
}

std::optional<PoseFormat> parse_pose_format(std::string_view name) {
  if (name == "kitti_odometry" || name == "kitti") return PoseFormat::KittiOdometry;
  if (name == "tum") return PoseFormat::Tum;
  return std::nullopt;
}

Mat3 orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    d(2, 2) = -1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

namespace {

Mat3 checked_rotation(const Mat3& r, const std::string& where,
                      std::vector<std::string>* warnings) {
  if (!(r.determinant() > 0.0)) parse_error(where, "rotation has det <= 0");
  const double dev = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (dev > 1e-3 && warnings)
    warnings->push_back(where + ": rotation off SO(3) by " + std::to_string(dev) +
                        ", re-orthonormalized");
  return orthonormalize(r);
}

}  // namespace

std::vector<Pose> read_poses(std::istream& in, PoseFormat format,
                             std::vector<std::string>* warnings) {
  std::vector<Pose> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = strip(std::string_view(line));
    if (body.empty() || body.front() == '#') continue;
    const auto tok = split_ws(body);
    const std::string where = at_line(line_no);
    Pose p;
    if (format == PoseFormat::KittiOdometry) {
      if (tok.size() != 12)
        parse_error(where, "expected 12 values, found " + std::to_string(tok.size()));
      Mat3 r;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) r(i, j) = parse_number(tok[4 * i + j], where);
        p.translation[i] = parse_number(tok[4 * i + 3], where);
      }
      p.rotation = checked_rotation(r, where, warnings);
    } else {
      if (tok.size() != 8)
        parse_error(where, "expected 8 values, found " + std::to_string(tok.size()));
      double v[8];
      for (int k = 0; k < 8; ++k) v[k] = parse_number(tok[k], where);
      p.translation = Vec3(v[1], v[2], v[3]);
      Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
      if (!(q.norm() > 1e-12)) parse_error(where, "zero quaternion");
      p.rotation = q.normalized().toRotationMatrix();
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Pose> load_poses(const std::string& path,
                             std::optional<PoseFormat> format,
                             std::vector<std::string>* warnings) {
  auto in = open_in(path);
  if (!format) {
    // Infer from the first data line: 12 values -> KITTI, 8 -> TUM.
    std::string line;
    while (std::getline(in, line)) {
      const auto body = strip(std::string_view(line));
      if (body.empty() || body.front() == '#') continue;
      const auto n = split_ws(body).size();
      format = n == 8 ? PoseFormat::Tum : PoseFormat::KittiOdometry;
      break;
    }
    if (!format) return {};
    in.clear();
    in.seekg(0);
  }
  try {
    return read_poses(in, *format, warnings);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse)
      throw Error(ErrorCode::Parse, path + ": " + e.what());
    throw;
  }
}

void write_poses(std::ostream& out, const std::vector<Pose>& poses,
                 PoseFormat format) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto& p = poses[i];
    if (format == PoseFormat::KittiOdometry) {
      for (int r = 0; r < 3; ++r)
        out << p.rotation(r, 0) << ' ' << p.rotation(r, 1) << ' '
            << p.rotation(r, 2) << ' ' << p.translation[r]
            << (r == 2 ? '\n' : ' ');
    } else {
      const Eigen::Quaterniond q(p.rotation);
      out << static_cast<double>(i) << ' ' << p.translation.x() << ' '
          << p.translation.y() << ' ' << p.translation.z() << ' ' << q.x() << ' '
          << q.y() << ' ' << q.z() << ' ' << q.w() << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::Io, "write failed");
}

void save_poses(const std::string& path, const std::vector<Pose>& poses,
                PoseFormat format) {
  auto out = open_out(path);
  write_poses(out, poses, format);
}

}  // namespace zeroreg
