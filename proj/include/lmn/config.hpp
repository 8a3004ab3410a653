#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmn/model.hpp"

namespace lmn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// flat key = value file; '#' starts a comment
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
  };
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

struct RunConfig {
  Domain domain = Domain::rectangle(pi, pi);
  int nx = 64, ny = 64;
  ModelParams params;
  double T = 0.5;
  double dt = 2e-3;
  int output_stride = 10;
  int modes_N = 32;
  std::string init_profile = "bubble";
  double init_amplitude = 0.1;
  double init_speed = 0.3;  // peak speed scale of the initial velocity
  double init_tilt = 0.4;   // director tilt amplitude
  std::uint64_t seed = 1;
  std::string out_dir;
  double filter_sigma = 0.02;
  double theta_acoustic = 0.5;  // Crank-Nicolson weight of the implicit acoustic solve

  Grid make_grid() const {
    return domain.is1d() ? Grid(domain, nx) : Grid(domain, nx, ny);
  }

  void validate() const {
    try {
      params.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (T <= 0 || dt <= 0) throw ConfigError("config: time.T and time.dt must be positive");
    if (output_stride < 1) throw ConfigError("config: time.output_stride >= 1");
    if (modes_N < 1) throw ConfigError("config: modes.N >= 1");
    if (theta_acoustic < 0.5 || theta_acoustic > 1.0)
      throw ConfigError("config: solver.theta_acoustic in [0.5, 1]");
  }
};

inline RunConfig run_config_from_map(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto getd = [&](const std::string& k, double dflt) {
    auto* v = get(k);
    if (!v) return dflt;
    try {
      return std::stod(*v);
    } catch (...) {
      throw ConfigError("config: bad number for " + k);
    }
  };
  auto geti = [&](const std::string& k, int dflt) {
    auto* v = get(k);
    if (!v) return dflt;
    try {
      return std::stoi(*v);
    } catch (...) {
      throw ConfigError("config: bad integer for " + k);
    }
  };

  std::string kind = get("domain.kind") ? *get("domain.kind") : "rectangle2d";
  double Lx = getd("domain.Lx", pi), Ly = getd("domain.Ly", pi);
  if (kind == "rectangle2d")
    c.domain = Domain::rectangle(Lx, Ly);
  else if (kind == "slab1d")
    c.domain = Domain::slab(Lx);
  else
    throw ConfigError("config: domain.kind must be rectangle2d or slab1d");

  c.nx = geti("grid.nx", 64);
  c.ny = geti("grid.ny", c.nx);
  c.params.gamma = getd("params.gamma", 2.0);
  c.params.epsilon = getd("params.epsilon", 0.1);
  c.params.mu = getd("params.mu", 1.0);
  c.params.lambda = getd("params.lambda", 1.0);
  c.params.theta = getd("params.theta", 1.0);
  c.params.sigma0 = getd("params.sigma0", 0.2);
  c.T = getd("time.T", 0.5);
  c.dt = getd("time.dt", 2e-3);
  c.output_stride = geti("time.output_stride", 10);
  c.modes_N = geti("modes.N", 32);
  if (get("init.profile")) c.init_profile = *get("init.profile");
  c.init_amplitude = getd("init.amplitude", 0.1);
  c.init_speed = getd("init.speed", 0.3);
  c.init_tilt = getd("init.tilt", 0.4);
  c.seed = std::uint64_t(getd("init.seed", 1));
  if (get("output.dir")) c.out_dir = *get("output.dir");
  c.filter_sigma = getd("solver.filter_sigma", 0.02);
  c.theta_acoustic = getd("solver.theta_acoustic", 0.5);
  c.validate();
  return c;
}

// canonical key=value serialization (sorted keys, %.17g numbers)
inline std::string serialize_config(const RunConfig& c) {
  char buf[64];
  auto num = [&](double v) {
    snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::map<std::string, std::string> kv;
  kv["domain.kind"] = c.domain.is1d() ? "slab1d" : "rectangle2d";
  kv["domain.Lx"] = num(c.domain.Lx);
  if (!c.domain.is1d()) kv["domain.Ly"] = num(c.domain.Ly);
  kv["grid.nx"] = std::to_string(c.nx);
  if (!c.domain.is1d()) kv["grid.ny"] = std::to_string(c.ny);
  kv["params.gamma"] = num(c.params.gamma);
  kv["params.epsilon"] = num(c.params.epsilon);
  kv["params.mu"] = num(c.params.mu);
  kv["params.lambda"] = num(c.params.lambda);
  kv["params.theta"] = num(c.params.theta);
  kv["params.sigma0"] = num(c.params.sigma0);
  kv["time.T"] = num(c.T);
  kv["time.dt"] = num(c.dt);
  kv["time.output_stride"] = std::to_string(c.output_stride);
  kv["modes.N"] = std::to_string(c.modes_N);
  kv["init.profile"] = c.init_profile;
  kv["init.amplitude"] = num(c.init_amplitude);
  kv["init.speed"] = num(c.init_speed);
  kv["init.tilt"] = num(c.init_tilt);
  kv["init.seed"] = std::to_string(c.seed);
  kv["solver.filter_sigma"] = num(c.filter_sigma);
  kv["solver.theta_acoustic"] = num(c.theta_acoustic);
  std::string out;
  for (auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace lmn
