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
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "zeroreg/bench.hpp"
#include "zeroreg/bootstrap.hpp"
#include "zeroreg/parallel.hpp"

namespace zeroreg {

const char* to_string(SceneKind kind) {
  return kind == SceneKind::IndoorRoom ? "indoor_room" : "lidar_sweep";
}

std::optional<SceneKind> parse_scene_kind(std::string_view name) {
  if (name == "indoor_room") return SceneKind::IndoorRoom;
  if (name == "lidar_sweep") return SceneKind::LidarSweep;
  return std::nullopt;
}

void SynthParams::validate() const {
  if (!(overlap > 0.0 && overlap <= 1.0))
    throw Error(ErrorCode::Parameter, "synth: overlap must lie in (0, 1]");
  if (!(noise_voxel_fraction >= 0.0) || (noise_sigma && !(*noise_sigma >= 0.0)))
    throw Error(ErrorCode::Parameter, "synth: noise must be >= 0");
  if (!(max_rotation_deg >= 0.0 && max_rotation_deg <= 180.0))
    throw Error(ErrorCode::Parameter,
                "synth: max_rotation_deg must lie in [0, 180]");
  if (!(max_translation >= 0.0))
    throw Error(ErrorCode::Parameter, "synth: max_translation must be >= 0");
  if (!(density_scale > 0.0 && density_scale <= 100.0))
    throw Error(ErrorCode::Parameter, "synth: density_scale must lie in (0, 100]");
}

namespace {

constexpr double kPi = std::numbers::pi;

// Parallelogram o + s a + t b, s, t in [0, 1].
struct Rect {
  Vec3 o, a, b;
  double density;  // points per square meter
};

// Vertical cylinder side.
struct Cylinder {
  Vec3 base;
  double radius, height, density;
};

// Horizontal ring of points at z = 0 with a fixed angular step.
struct Ring {
  double radius;
  std::size_t count;
};

struct Scene {
  std::vector<Rect> rects;
  std::vector<Cylinder> cylinders;
  std::vector<Ring> rings;
};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t count_for(double area, double density) {
  return static_cast<std::size_t>(std::llround(area * density));
}

// Four vertical sides and the top of a yawed box standing on z = z0.
void add_box(Scene& s, const Vec3& center, double sx, double sy, double sz,
             double yaw, double density, bool top = true) {
  const Vec3 ex(std::cos(yaw) * sx, std::sin(yaw) * sx, 0.0);
  const Vec3 ey(-std::sin(yaw) * sy, std::cos(yaw) * sy, 0.0);
  const Vec3 ez(0.0, 0.0, sz);
  const Vec3 c0 = center - 0.5 * ex - 0.5 * ey;
  s.rects.push_back({c0, ex, ez, density});
  s.rects.push_back({c0 + ey, ex, ez, density});
  s.rects.push_back({c0, ey, ez, density});
  s.rects.push_back({c0 + ex, ey, ez, density});
  if (top) s.rects.push_back({c0 + ez, ex, ey, density});
}

constexpr double kRoomX = 6.0, kRoomY = 5.0, kRoomZ = 3.0;
constexpr double kLidarRadius = 45.0;
constexpr double kLidarCrop = 25.0;

// Vertical wall from a to b (z = 0) with rectangular openings given as
// (start along the wall, width, sill height, opening height).
void add_wall(Scene& s, const Vec3& a, const Vec3& b, double height,
              std::vector<std::array<double, 4>> openings, double density) {
  const double len = (b - a).norm();
  const Vec3 dir = (b - a) / len;
  const Vec3 up(0, 0, height);
  std::sort(openings.begin(), openings.end());
  double at = 0.0;
  for (const auto& [start, width, sill, top] : openings) {
    if (start > at) s.rects.push_back({a + at * dir, (start - at) * dir, up, density});
    // below and above the opening
    if (sill > 0.0)
      s.rects.push_back({a + start * dir, width * dir, Vec3(0, 0, sill), density});
    if (top < height)
      s.rects.push_back({a + start * dir + Vec3(0, 0, top), width * dir,
                         Vec3(0, 0, height - top), density});
    at = start + width;
  }
  if (at < len) s.rects.push_back({a + at * dir, (len - at) * dir, up, density});
}

// An L-shaped room: a kRoomX x kRoomY box with one corner notched out, a door
// and windows cut into the walls, ceiling beams and lamps, wall shelves and
// floor clutter.
Scene indoor_room(Rng& rng, double scale) {
  Scene s;
  const double d = 300.0 * scale;
  const double nx = uniform(rng, 1.4, 2.4), ny = uniform(rng, 1.2, 2.0);
  const bool notch_high_y = uniform(rng, 0.0, 1.0) < 0.5;
  // Footprint outline, counter-clockwise; the notch sits at x = kRoomX.
  std::vector<Vec3> outline;
  if (notch_high_y) {
    outline = {{0, 0, 0},
               {kRoomX, 0, 0},
               {kRoomX, kRoomY - ny, 0},
               {kRoomX - nx, kRoomY - ny, 0},
               {kRoomX - nx, kRoomY, 0},
               {0, kRoomY, 0}};
    s.rects.push_back({Vec3::Zero(), Vec3(kRoomX, 0, 0), Vec3(0, kRoomY - ny, 0), d});
    s.rects.push_back({Vec3(0, kRoomY - ny, 0), Vec3(kRoomX - nx, 0, 0), Vec3(0, ny, 0), d});
  } else {
    outline = {{0, 0, 0},
               {kRoomX - nx, 0, 0},
               {kRoomX - nx, ny, 0},
               {kRoomX, ny, 0},
               {kRoomX, kRoomY, 0},
               {0, kRoomY, 0}};
    s.rects.push_back({Vec3(0, ny, 0), Vec3(kRoomX, 0, 0), Vec3(0, kRoomY - ny, 0), d});
    s.rects.push_back({Vec3::Zero(), Vec3(kRoomX - nx, 0, 0), Vec3(0, ny, 0), d});
  }
  // Ceiling mirrors the floor pieces.
  const std::size_t floor_pieces = s.rects.size();
  for (std::size_t i = 0; i < floor_pieces; ++i) {
    Rect c = s.rects[i];
    c.o.z() = kRoomZ;
    s.rects.push_back(c);
  }
  const std::size_t door_wall =
      std::uniform_int_distribution<std::size_t>(0, outline.size() - 1)(rng);
  for (std::size_t i = 0; i < outline.size(); ++i) {
    const Vec3& a = outline[i];
    const Vec3& b = outline[(i + 1) % outline.size()];
    const double len = (b - a).norm();
    std::vector<std::array<double, 4>> openings;
    if (i == door_wall && len > 1.5) {
      openings.push_back({uniform(rng, 0.2, len - 1.1), 0.9, 0.0, 2.1});
    } else if (len > 3.0 && uniform(rng, 0.0, 1.0) < 0.6) {
      const double w = uniform(rng, 0.8, 1.6);
      openings.push_back({uniform(rng, 0.3, len - w - 0.3), w, 0.9, 2.2});
    }
    add_wall(s, a, b, kRoomZ, openings, d);
  }
  const auto inside = [&](double x, double y) {
    if (x < 0.3 || y < 0.3 || x > kRoomX - 0.3 || y > kRoomY - 0.3) return false;
    const bool in_notch_x = x > kRoomX - nx - 0.3;
    return notch_high_y ? !(in_notch_x && y > kRoomY - ny - 0.3)
                        : !(in_notch_x && y < ny + 0.3);
  };
  const auto random_spot = [&]() {
    while (true) {
      const double x = uniform(rng, 0.3, kRoomX - 0.3);
      const double y = uniform(rng, 0.3, kRoomY - 0.3);
      if (inside(x, y)) return Vec3(x, y, 0.0);
    }
  };
  // ceiling beam and lamps
  {
    const double y = uniform(rng, 1.0, kRoomY - 2.5);
    add_box(s, Vec3(0.5 * (kRoomX - nx), y, kRoomZ - 0.3), kRoomX - nx, 0.3,
            0.3, 0.0, d, false);
    for (int i = 0; i < 3; ++i) {
      const Vec3 c = random_spot();
      s.cylinders.push_back({Vec3(c.x(), c.y(), kRoomZ - 0.6),
                             uniform(rng, 0.12, 0.25), 0.25, d});
    }
  }
  // shelves and cabinets against the first walls of the outline
  for (int i = 0; i < 4; ++i) {
    const std::size_t wi =
        std::uniform_int_distribution<std::size_t>(0, outline.size() - 1)(rng);
    const Vec3& a = outline[wi];
    const Vec3& b = outline[(wi + 1) % outline.size()];
    const double len = (b - a).norm();
    if (len < 1.5) continue;
    const Vec3 dir = (b - a) / len;
    const Vec3 inward(-dir.y(), dir.x(), 0.0);  // outline is counter-clockwise
    const double w = uniform(rng, 0.6, std::min(1.8, len - 0.4));
    const double depth = uniform(rng, 0.25, 0.5);
    const double along = uniform(rng, 0.2, len - w - 0.2);
    const double z0 = uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : uniform(rng, 1.0, 1.6);
    const double h = z0 == 0.0 ? uniform(rng, 0.8, 2.0) : uniform(rng, 0.3, 0.8);
    const Vec3 c = a + (along + 0.5 * w) * dir + 0.5 * depth * inward +
                   Vec3(0, 0, z0);
    add_box(s, c, w, depth, h, std::atan2(dir.y(), dir.x()), d);
  }
  const int objects = 22;
  for (int i = 0; i < objects; ++i) {
    const Vec3 c = random_spot();
    const double kind = uniform(rng, 0.0, 1.0);
    if (kind < 0.25) {
      s.cylinders.push_back(
          {c, uniform(rng, 0.08, 0.3), uniform(rng, 0.4, 2.0), d});
    } else if (kind < 0.45) {
      // table: top slab on four legs
      const double sx = uniform(rng, 0.8, 1.6), sy = uniform(rng, 0.6, 1.0);
      const double h = uniform(rng, 0.65, 0.8), yaw = uniform(rng, 0.0, kPi);
      add_box(s, c + Vec3(0, 0, h - 0.04), sx, sy, 0.04, yaw, d);
      const Vec3 ex(std::cos(yaw), std::sin(yaw), 0.0);
      const Vec3 ey(-std::sin(yaw), std::cos(yaw), 0.0);
      for (double fx : {-0.45, 0.45})
        for (double fy : {-0.45, 0.45})
          add_box(s, c + fx * sx * ex + fy * sy * ey, 0.05, 0.05, h - 0.04, yaw,
                  d, false);
    } else {
      add_box(s, c, uniform(rng, 0.3, 1.2), uniform(rng, 0.3, 1.0),
              uniform(rng, 0.3, 1.9), uniform(rng, 0.0, kPi), d);
    }
  }
  return s;
}

Scene lidar_sweep(Rng& rng, double scale) {
  Scene s;
  // Sensor-like ground rings: fixed angular resolution, spacing growing with
  // range.
  const auto per_ring = static_cast<std::size_t>(std::llround(900.0 * scale));
  for (int k = 0;; ++k) {
    const double r = 3.0 + 0.45 * k + 0.012 * k * k;
    if (r > kLidarRadius) break;
    s.rings.push_back({r, std::max<std::size_t>(per_ring, 8)});
  }
  const double wall = 12.0 * scale;
  for (int i = 0; i < 16; ++i) {
    const double ang = uniform(rng, 0.0, 2.0 * kPi);
    const double dist = uniform(rng, 8.0, kLidarRadius - 5.0);
    const Vec3 c(dist * std::cos(ang), dist * std::sin(ang), 0.0);
    add_box(s, c, uniform(rng, 4.0, 12.0), uniform(rng, 4.0, 10.0),
            uniform(rng, 3.0, 6.0), uniform(rng, 0.0, kPi), wall, false);
  }
  for (int i = 0; i < 14; ++i) {
    // parked cars
    const double ang = uniform(rng, 0.0, 2.0 * kPi);
    const double dist = uniform(rng, 4.0, kLidarRadius - 3.0);
    const Vec3 c(dist * std::cos(ang), dist * std::sin(ang), 0.0);
    add_box(s, c, 4.2, 1.8, 1.5, uniform(rng, 0.0, kPi), 2.0 * wall);
  }
  for (int i = 0; i < 30; ++i) {
    // poles and trunks
    const double ang = uniform(rng, 0.0, 2.0 * kPi);
    const double dist = uniform(rng, 4.0, kLidarRadius - 2.0);
    s.cylinders.push_back({Vec3(dist * std::cos(ang), dist * std::sin(ang), 0.0),
                           uniform(rng, 0.1, 0.35), uniform(rng, 2.5, 6.0),
                           6.0 * wall});
  }
  return s;
}

std::vector<Vec3> sample(const Scene& s, Rng& rng) {
  std::vector<Vec3> out;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& r : s.rects) {
    const std::size_t n = count_for(r.a.cross(r.b).norm(), r.density);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = u(rng), b = u(rng);
      out.push_back(r.o + a * r.a + b * r.b);
    }
  }
  for (const auto& c : s.cylinders) {
    const std::size_t n = count_for(2.0 * kPi * c.radius * c.height, c.density);
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = 2.0 * kPi * u(rng), h = c.height * u(rng);
      out.push_back(c.base +
                    Vec3(c.radius * std::cos(phi), c.radius * std::sin(phi), h));
    }
  }
  for (const auto& ring : s.rings) {
    const double phase = u(rng);
    for (std::size_t i = 0; i < ring.count; ++i) {
      const double phi = 2.0 * kPi * (static_cast<double>(i) + phase) /
                         static_cast<double>(ring.count);
      out.emplace_back(ring.radius * std::cos(phi), ring.radius * std::sin(phi),
                       0.0);
    }
  }
  return out;
}

// Center distance of two equal discs whose lens covers `overlap` of each.
double disc_offset(double radius, double overlap) {
  const auto lens = [radius](double d) {
    const double r2 = radius * radius;
    return (2.0 * r2 * std::acos(d / (2.0 * radius)) -
            0.5 * d * std::sqrt(4.0 * r2 - d * d)) /
           (kPi * r2);
  };
  if (overlap >= 1.0) return 0.0;
  double lo = 0.0, hi = 2.0 * radius;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lens(mid) > overlap ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Vec3> crop(SceneKind kind, const std::vector<Vec3>& pts,
                       double overlap, int which) {
  std::vector<Vec3> out;
  if (kind == SceneKind::IndoorRoom) {
    // x-slabs from opposite walls sharing `overlap` of their width
    const double w = kRoomX / (2.0 - overlap);
    const double lo = which == 0 ? 0.0 : kRoomX - w;
    const double hi = which == 0 ? w : kRoomX;
    for (const auto& p : pts)
      if (p.x() >= lo && p.x() <= hi) out.push_back(p);
  } else {
    const double d = disc_offset(kLidarCrop, overlap);
    const Vec3 c(which == 0 ? -0.5 * d : 0.5 * d, 0.0, 0.0);
    for (const auto& p : pts)
      if ((p - c).head<2>().norm() <= kLidarCrop) out.push_back(p);
  }
  return out;
}

// Where the scanner of crop `which` sits; each cloud is expressed relative
// to it, like a scan in its sensor frame.
Vec3 sensor_origin(SceneKind kind, double overlap, int which) {
  if (kind == SceneKind::IndoorRoom) {
    const double w = kRoomX / (2.0 - overlap);
    const double cx = which == 0 ? 0.5 * w : kRoomX - 0.5 * w;
    return Vec3(cx, 0.5 * kRoomY, 0.5 * kRoomZ);
  }
  const double d = disc_offset(kLidarCrop, overlap);
  return Vec3(which == 0 ? -0.5 * d : 0.5 * d, 0.0, 1.8);
}

Pose random_pose(Rng& rng, double max_rot_deg, double max_trans) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 axis(g(rng), g(rng), g(rng));
  while (axis.norm() < 1e-9) axis = Vec3(g(rng), g(rng), g(rng));
  axis.normalize();
  const double angle = uniform(rng, 0.0, max_rot_deg * kPi / 180.0);
  Vec3 dir(g(rng), g(rng), g(rng));
  while (dir.norm() < 1e-9) dir = Vec3(g(rng), g(rng), g(rng));
  dir.normalize();
  const double len = max_trans * std::cbrt(uniform(rng, 0.0, 1.0));
  Pose p;
  p.rotation = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  p.translation = len * dir;
  return p;
}

}  // namespace

SynthPair synth_scene(SceneKind kind, const SynthParams& params,
                      std::uint64_t seed) {
  params.validate();
  Rng layout_rng(derive_seed(seed, 1));
  const Scene scene = kind == SceneKind::IndoorRoom
                          ? indoor_room(layout_rng, params.density_scale)
                          : lidar_sweep(layout_rng, params.density_scale);

  std::vector<Vec3> clean[2];
  for (int c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, 2, params.shared_sampling ? 0 : c));
    clean[c] = crop(kind, sample(scene, rng), params.overlap, c);
  }

  SynthPair out;
  out.clean_voxel_size =
      compute_voxel_size(PointCloud(clean[0]), BootstrapConfig{},
                         derive_seed(seed, 3))
          .voxel_size;
  out.noise_sigma = params.noise_sigma.value_or(params.noise_voxel_fraction *
                                                out.clean_voxel_size);

  Rng pose_rng(derive_seed(seed, 4));
  Pose motion;
  if (!params.identity_transform)
    motion = random_pose(pose_rng, params.max_rotation_deg,
                         params.max_translation);
  // source p = x - s0, target q = M (x - s1), so q = M (p + s0 - s1)
  const Vec3 s0 = sensor_origin(kind, params.overlap, 0);
  const Vec3 s1 = sensor_origin(kind, params.overlap, 1);
  out.gt.rotation = motion.rotation;
  out.gt.translation = motion.apply(s0 - s1);

  for (int c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, 5, c));
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& p : clean[c]) {
      if (out.noise_sigma > 0.0)
        p += out.noise_sigma * Vec3(g(rng), g(rng), g(rng));
      p = c == 0 ? Vec3(p - s0) : motion.apply(p - s1);
    }
  }
  out.source = PointCloud(std::move(clean[0]));
  out.target = PointCloud(std::move(clean[1]));
  return out;
}

}  // namespace zeroreg
