#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lmn/config.hpp"
#include "lmn/solver_common.hpp"
#include "lmn/spectral.hpp"

namespace lmn {

namespace io {

using json = nlohmann::json;

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 14695981039346656037ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& data) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), std::streamsize(data.size()));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// ---- CSV emitters --------------------------------------------------------

inline std::string ledger_csv(const LedgerSeries& series) {
  std::string s = "t,kinetic,internal,elastic,penalty,diss_visc,diss_dir,total_plus_dissipation\n";
  for (const auto& r : series.rows()) {
    s += fmt(r.t) + "," + fmt(r.kinetic) + "," + fmt(r.internal) + "," + fmt(r.elastic) + "," +
         fmt(r.penalty_energy) + "," + fmt(r.diss_visc) + "," + fmt(r.diss_dir) + "," +
         fmt(r.total_plus_dissipation()) + "\n";
  }
  return s;
}

inline std::string modes_csv(const Trajectory& traj) {
  std::string s = "t,m,n,sign,re_b,im_b,abs_b,re_c,im_c\n";
  const std::vector<double>& times = traj.mode_times.empty() ? traj.times : traj.mode_times;
  for (size_t i = 0; i < times.size() && i < traj.modes.size(); ++i) {
    const auto& amps = traj.modes[i];
    const auto* force = (i < traj.forcings.size() && !traj.forcings.empty()) ? &traj.forcings[i] : nullptr;
    for (size_t k = 0; k < amps.size(); ++k) {
      const ModeAmplitude& a = amps[k];
      complexd cp = (force && k < force->size()) ? (*force)[k].c_plus : complexd(0);
      complexd cm = (force && k < force->size()) ? (*force)[k].c_minus : complexd(0);
      for (int sign : {+1, -1}) {
        complexd b = sign > 0 ? a.beta_plus : a.beta_minus;
        complexd c = sign > 0 ? cp : cm;
        s += fmt(times[i]) + "," + std::to_string(a.m) + "," + std::to_string(a.n) + "," +
             (sign > 0 ? "+" : "-") + "," + fmt(b.real()) + "," + fmt(b.imag()) + "," +
             fmt(std::abs(b)) + "," + fmt(c.real()) + "," + fmt(c.imag()) + "\n";
      }
    }
  }
  return s;
}

inline std::string basis_csv(const SpectralBasis& basis) {
  std::string s = "m,n,lambda0,boundary_integral,re_lambda1,im_lambda1,class\n";
  for (int k = 0; k < basis.count(); ++k) {
    const NeumannMode& mode = basis.modes[k];
    const DampingCorrection& c = basis.corrections[k];
    s += std::to_string(mode.m) + "," + std::to_string(mode.n) + "," + fmt(mode.lambda0) + "," +
         fmt(c.boundary_integral) + "," + fmt(c.value_plus.real()) + "," +
         fmt(c.value_plus.imag()) + "," + mode_class_name(c.mode_class) + "\n";
  }
  return s;
}

// ---- field dump / restore (bit-exact) ------------------------------------

inline json grid_meta(const Grid& g) {
  json j;
  j["kind"] = g.is1d() ? "slab1d" : "rectangle2d";
  j["Lx"] = fmt(g.domain.Lx);
  if (!g.is1d()) j["Ly"] = fmt(g.domain.Ly);
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  return j;
}

inline Grid grid_from_meta(const json& j) {
  Domain dom = j["kind"] == "slab1d" ? Domain::slab(std::stod(j["Lx"].get<std::string>()))
                                     : Domain::rectangle(std::stod(j["Lx"].get<std::string>()),
                                                         std::stod(j["Ly"].get<std::string>()));
  return dom.is1d() ? Grid(dom, j["nx"].get<int>()) : Grid(dom, j["nx"].get<int>(), j["ny"].get<int>());
}

// flat little-endian doubles, components concatenated in declared order
inline void dump_fields(const std::filesystem::path& base, const Grid& grid,
                        const std::vector<std::pair<std::string, const ScalarField*>>& fields) {
  std::string bin;
  json meta = grid_meta(grid);
  meta["fields"] = json::array();
  for (auto& [name, f] : fields) {
    if (!f->grid.same_layout(grid)) throw std::invalid_argument("dump_fields: grid mismatch");
    meta["fields"].push_back(name);
    const char* p = reinterpret_cast<const char*>(f->v.data());
    bin.append(p, p + sizeof(double) * f->v.size());
  }
  write_file(base.string() + ".bin", bin);
  write_file(base.string() + ".json", meta.dump(2) + "\n");
}

inline std::vector<ScalarField> restore_fields(const std::filesystem::path& base, Grid* grid_out,
                                               std::vector<std::string>* names = nullptr) {
  json meta = json::parse(read_file(base.string() + ".json"));
  Grid g = grid_from_meta(meta);
  if (grid_out) *grid_out = g;
  std::string bin = read_file(base.string() + ".bin");
  size_t count = meta["fields"].size();
  if (bin.size() != count * sizeof(double) * size_t(g.size()))
    throw std::runtime_error("restore_fields: size mismatch in " + base.string());
  std::vector<ScalarField> out;
  const double* p = reinterpret_cast<const double*>(bin.data());
  for (size_t k = 0; k < count; ++k) {
    ScalarField f(g);
    std::copy(p + k * g.size(), p + (k + 1) * g.size(), f.v.begin());
    out.push_back(std::move(f));
    if (names) names->push_back(meta["fields"][k].get<std::string>());
  }
  return out;
}

inline void dump_state(const std::filesystem::path& base, const Trajectory& traj, int sample) {
  std::vector<std::pair<std::string, const ScalarField*>> fields;
  if (!traj.rho.empty()) fields.push_back({"rho", &traj.rho[sample]});
  fields.push_back({"ux", &traj.u[sample].x});
  if (!traj.grid.is1d()) fields.push_back({"uy", &traj.u[sample].y});
  fields.push_back({"d1", &traj.d[sample].c1});
  fields.push_back({"d2", &traj.d[sample].c2});
  fields.push_back({"d3", &traj.d[sample].c3});
  if (!traj.pi.empty()) fields.push_back({"pi", &traj.pi[sample]});
  dump_fields(base, traj.grid, fields);
}

// ---- run manifest ---------------------------------------------------------

inline json manifest_json(const RunConfig& cfg,
                          const std::vector<std::pair<std::string, std::string>>& outputs) {
  json j;
  j["config"] = json::object();
  {
    auto kv = parse_config_text(serialize_config(cfg));
    for (auto& [k, v] : kv) j["config"][k] = v;
  }
  std::uint64_t h = fnv1a(serialize_config(cfg));
  j["outputs"] = json::array();
  for (auto& [name, content] : outputs) {
    json o;
    o["file"] = name;
    o["fnv1a"] = hash_hex(fnv1a(content));
    j["outputs"].push_back(o);
    h = fnv1a(content, h);
  }
  j["content_hash"] = hash_hex(h);
  return j;
}

}  // namespace io

}  // namespace lmn
