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
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>

#include "zeroreg/pipeline.hpp"

namespace zeroreg {

void PipelineConfig::validate() const {
  bootstrap.validate();
  if (n_fps == 0) throw Error(ErrorCode::Parameter, "N_FPS must be >= 1");
  if (n_patch < 5) throw Error(ErrorCode::Parameter, "N_patch must be >= 5");
  if (shape.height == 0 || shape.sectors < 2 || shape.channels < 5)
    throw Error(ErrorCode::Parameter, "descriptor needs H >= 1, W >= 2, D >= 5");
  if (!(temperature > 0.0))
    throw Error(ErrorCode::Parameter, "temperature must be > 0");
  if (epsilon && !(*epsilon > 0.0))
    throw Error(ErrorCode::Parameter, "epsilon must be > 0");
  if (max_candidates == 0)
    throw Error(ErrorCode::Parameter, "max_candidates must be >= 1");
  if (ransac_max_iters == 0)
    throw Error(ErrorCode::Parameter, "ransac_max_iters must be >= 1");
  if (scales.empty()) throw Error(ErrorCode::Parameter, "no scales selected");
  for (std::size_t i = 0; i < scales.size(); ++i)
    for (std::size_t j = i + 1; j < scales.size(); ++j)
      if (scales[i] == scales[j])
        throw Error(ErrorCode::Parameter, "duplicate scale in scales");
  refine_kernel.validate();
  if (irls_iters == 0) throw Error(ErrorCode::Parameter, "irls_iters must be >= 1");
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::Parse, "invalid value '" + std::string(value) +
                                    "' for " + std::string(key));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    bad_value(key, v);
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  bad_value(key, v);
}

std::vector<Scale> to_scales(std::string_view key, std::string_view v) {
  std::vector<Scale> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto tok = strip(v.substr(0, comma));
    if (tok == "local") out.push_back(Scale::Local);
    else if (tok == "middle") out.push_back(Scale::Middle);
    else if (tok == "global") out.push_back(Scale::Global);
    else bad_value(key, tok);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) bad_value(key, v);
  return out;
}

}  // namespace

void set_config_value(PipelineConfig& c, std::string_view key,
                      std::string_view value) {
  const auto v = strip(value);
  auto& b = c.bootstrap;
  if (key == "kappa_spheric") b.kappa_spheric = to_double(key, v);
  else if (key == "kappa_disc") b.kappa_disc = to_double(key, v);
  else if (key == "tau_v") b.tau_v = to_double(key, v);
  else if (key == "tau_l") b.tau_scales[0] = to_double(key, v);
  else if (key == "tau_m") b.tau_scales[1] = to_double(key, v);
  else if (key == "tau_g") b.tau_scales[2] = to_double(key, v);
  else if (key == "delta_v") b.delta_v = to_double(key, v);
  else if (key == "N_r") b.n_r = to_uint(key, v);
  else if (key == "r_max") b.r_max = to_double(key, v);
  else if (key == "radius_clamp") {
    if (v == "truncate") b.clamp = RadiusClamp::Truncate;
    else if (v == "max") b.clamp = RadiusClamp::LiteralMax;
    else bad_value(key, v);
  } else if (key == "N_FPS") c.n_fps = to_uint(key, v);
  else if (key == "N_patch") c.n_patch = to_uint(key, v);
  else if (key == "H") c.shape.height = to_uint(key, v);
  else if (key == "W") c.shape.sectors = to_uint(key, v);
  else if (key == "D") c.shape.channels = to_uint(key, v);
  else if (key == "temperature") c.temperature = to_double(key, v);
  else if (key == "epsilon") {
    if (v == "auto") c.epsilon.reset();
    else c.epsilon = to_double(key, v);
  } else if (key == "max_candidates") c.max_candidates = to_uint(key, v);
  else if (key == "ransac_max_iters") c.ransac_max_iters = to_uint(key, v);
  else if (key == "rng_seed") c.rng_seed = to_uint(key, v);
  else if (key == "scales") c.scales = to_scales(key, v);
  else if (key == "refine_kernel") {
    c.refine = v != "none";
    if (v == "none") {
    } else if (v == "squared") c.refine_kernel.kind = KernelKind::Squared;
    else if (v == "huber") c.refine_kernel.kind = KernelKind::Huber;
    else if (v == "gm") c.refine_kernel.kind = KernelKind::GemanMcClure;
    else if (v == "tls") c.refine_kernel.kind = KernelKind::TruncatedLeastSquares;
    else bad_value(key, v);
  } else if (key == "delta") c.refine_kernel.delta = to_double(key, v);
  else if (key == "c_bar") c.refine_kernel.c_bar = to_double(key, v);
  else if (key == "mu") c.refine_kernel.mu = to_double(key, v);
  else if (key == "irls_iters") c.irls_iters = to_uint(key, v);
  else if (key == "gnc") c.gnc = to_bool(key, v);
  else if (key == "descriptor_file") c.descriptor_file = std::string(v);
  else throw Error(ErrorCode::Parameter, "unknown config key '" + std::string(key) + "'");
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos)
      body = body.substr(0, hash);
    body = strip(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::Parse,
                  "line " + std::to_string(line_no) + ": expected key = value");
    try {
      set_config_value(cfg, strip(body.substr(0, eq)), body.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code() == ErrorCode::Parameter ? ErrorCode::Parse : e.code(),
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
  try {
    return parse_config(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_config(const PipelineConfig& c) {
  std::ostringstream out;
  const auto& b = c.bootstrap;
  out << "kappa_spheric = " << num(b.kappa_spheric) << "\n"
      << "kappa_disc = " << num(b.kappa_disc) << "\n"
      << "tau_v = " << num(b.tau_v) << "\n"
      << "tau_l = " << num(b.tau_scales[0]) << "\n"
      << "tau_m = " << num(b.tau_scales[1]) << "\n"
      << "tau_g = " << num(b.tau_scales[2]) << "\n"
      << "delta_v = " << num(b.delta_v) << "\n"
      << "N_r = " << b.n_r << "\n"
      << "r_max = " << num(b.r_max) << "\n"
      << "radius_clamp = "
      << (b.clamp == RadiusClamp::Truncate ? "truncate" : "max") << "\n"
      << "N_FPS = " << c.n_fps << "\n"
      << "N_patch = " << c.n_patch << "\n"
      << "H = " << c.shape.height << "\n"
      << "W = " << c.shape.sectors << "\n"
      << "D = " << c.shape.channels << "\n"
      << "temperature = " << num(c.temperature) << "\n";
  out << "epsilon = ";
  if (c.epsilon) out << num(*c.epsilon); else out << "auto";
  out << "\nmax_candidates = " << c.max_candidates << "\n"
      << "ransac_max_iters = " << c.ransac_max_iters << "\n"
      << "rng_seed = " << c.rng_seed << "\n"
      << "scales = ";
  for (std::size_t i = 0; i < c.scales.size(); ++i)
    out << (i ? "," : "") << to_string(c.scales[i]);
  out << "\nrefine_kernel = "
      << (c.refine ? to_string(c.refine_kernel.kind) : "none") << "\n"
      << "delta = " << num(c.refine_kernel.delta) << "\n"
      << "c_bar = " << num(c.refine_kernel.c_bar) << "\n"
      << "mu = " << num(c.refine_kernel.mu) << "\n"
      << "irls_iters = " << c.irls_iters << "\n"
      << "gnc = " << (c.gnc ? "true" : "false") << "\n";
  if (!c.descriptor_file.empty())
    out << "descriptor_file = " << c.descriptor_file << "\n";
  return out.str();
}

}  // namespace zeroreg
