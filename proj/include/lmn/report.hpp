#pragma once

#include <iostream>

#include "lmn/harness.hpp"
#include "lmn/io.hpp"

namespace lmn {
namespace io {

inline json fit_json(const FitResult& f) {
  json j;
  j["slope"] = f.slope;
  j["correlation"] = f.correlation;
  j["used"] = f.used;
  j["flagged"] = f.flagged;
  j["defined"] = f.defined;
  return j;
}

inline FitResult fit_from_json(const json& j) {
  FitResult f;
  f.slope = j.value("slope", 0.0);
  f.correlation = j.value("correlation", 0.0);
  f.used = j.value("used", 0);
  f.flagged = j.value("flagged", false);
  f.defined = j.value("defined", false);
  return f;
}

inline json damping_row_json(const DampingRow& r) {
  json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["lambda0"] = r.lambda0;
  j["predicted_rate"] = r.predicted_rate;
  j["measured_rate"] = r.measured_rate;
  j["bulk_rate"] = r.bulk_rate;
  j["boundary_rate"] = r.boundary_rate;
  j["ratio"] = r.ratio;
  j["class"] = mode_class_name(r.cls);
  return j;
}

inline json rate_report_json(const RateReport& r) {
  json j;
  j["kappa"] = r.kappa;
  j["condition_H"] = r.condition_H;
  j["inc_drift"] = r.inc_drift;
  j["refinement_floor_d"] = r.refinement_floor_d;
  j["rho_gamma_fit"] = fit_json(r.rho_gamma_fit);
  j["rho_kappa_fit"] = fit_json(r.rho_kappa_fit);
  j["fits_defined"] = r.fits_defined;
  j["points"] = json::array();
  for (const auto& p : r.points) {
    json q;
    q["eps"] = p.eps;
    q["rho_lgamma_sup"] = p.rho_lgamma_sup;
    q["rho_lkappa_sup"] = p.rho_lkappa_sup;
    q["u_diff_l2l2"] = p.diff.u_l2l2;
    q["d_diff_l2h1"] = p.diff.d_l2h1;
    q["grad_d_l4"] = p.diff.grad_d_l4;
    q["q1u_l2l2"] = p.q1u_l2l2;
    q["q_tail"] = p.q_tail;
    q["ledger_drift"] = p.ledger_drift;
    q["aborted"] = p.aborted;
    if (p.aborted) q["note"] = p.note;
    j["points"].push_back(q);
  }
  j["damping_eps"] = r.damping_eps;
  j["damping"] = json::array();
  for (const auto& d : r.damping) j["damping"].push_back(damping_row_json(d));
  j["pass"] = {{"energy", r.pass_energy},
               {"density_slope", r.pass_density_slope},
               {"monotone", r.pass_monotone},
               {"d_floor", r.pass_d_floor}};
  return j;
}

inline RateReport rate_report_from_json(const json& j) {
  RateReport r;
  r.kappa = j.value("kappa", 2.0);
  r.condition_H = j.value("condition_H", false);
  r.inc_drift = j.value("inc_drift", 0.0);
  r.refinement_floor_d = j.value("refinement_floor_d", 0.0);
  if (j.contains("rho_gamma_fit")) r.rho_gamma_fit = fit_from_json(j["rho_gamma_fit"]);
  if (j.contains("rho_kappa_fit")) r.rho_kappa_fit = fit_from_json(j["rho_kappa_fit"]);
  r.fits_defined = j.value("fits_defined", false);
  for (const auto& q : j.value("points", json::array())) {
    SweepPoint p;
    p.eps = q.value("eps", 0.0);
    p.rho_lgamma_sup = q.value("rho_lgamma_sup", 0.0);
    p.rho_lkappa_sup = q.value("rho_lkappa_sup", 0.0);
    p.diff.u_l2l2 = q.value("u_diff_l2l2", 0.0);
    p.diff.d_l2h1 = q.value("d_diff_l2h1", 0.0);
    p.diff.grad_d_l4 = q.value("grad_d_l4", 0.0);
    p.q1u_l2l2 = q.value("q1u_l2l2", 0.0);
    p.q_tail = q.value("q_tail", 0.0);
    p.ledger_drift = q.value("ledger_drift", 0.0);
    p.aborted = q.value("aborted", false);
    r.points.push_back(p);
  }
  auto pass = j.value("pass", json::object());
  r.pass_energy = pass.value("energy", false);
  r.pass_density_slope = pass.value("density_slope", false);
  r.pass_monotone = pass.value("monotone", false);
  r.pass_d_floor = pass.value("d_floor", false);
  return r;
}

inline std::string norms_csv(const RateReport& r) {
  std::string s =
      "eps,rho_lgamma_sup,rho_lkappa_sup,u_diff_l2l2,d_diff_l2h1,grad_d_l4,q1u_l2l2,ledger_drift\n";
  for (const auto& p : r.points)
    s += fmt(p.eps) + "," + fmt(p.rho_lgamma_sup) + "," + fmt(p.rho_lkappa_sup) + "," +
         fmt(p.diff.u_l2l2) + "," + fmt(p.diff.d_l2h1) + "," + fmt(p.diff.grad_d_l4) + "," +
         fmt(p.q1u_l2l2) + "," + fmt(p.ledger_drift) + "\n";
  return s;
}

inline void print_report(const RateReport& r, std::ostream& os) {
  os << "condition (H): " << (r.condition_H ? "satisfied" : "violated") << "\n";
  os << "eps        sup|rho-1|_Lg   u_diff_L2L2     d_diff_L2H1     Q1u_L2L2        drift\n";
  char line[256];
  for (const auto& p : r.points) {
    std::snprintf(line, sizeof line, "%-10.4g %-15.6e %-15.6e %-15.6e %-15.6e %-9.2e%s\n", p.eps,
                  p.rho_lgamma_sup, p.diff.u_l2l2, p.diff.d_l2h1, p.q1u_l2l2, p.ledger_drift,
                  p.aborted ? "  ABORTED" : "");
    os << line;
  }
  if (r.fits_defined) {
    std::snprintf(line, sizeof line, "density rate: slope %.4f (corr %.4f) in L^gamma, %.4f in L^kappa\n",
                  r.rho_gamma_fit.slope, r.rho_gamma_fit.correlation, r.rho_kappa_fit.slope);
    os << line;
  } else {
    os << "density rate: undefined (degenerate sweep values)\n";
  }
  std::snprintf(line, sizeof line, "d refinement floor: %.6e (final-eps d diff %.6e)\n",
                r.refinement_floor_d, r.points.empty() ? 0.0 : r.points.back().diff.d_l2h1);
  os << line;
  if (!r.damping.empty()) {
    os << "damping table (eps = " << r.damping_eps << "):\n";
    os << "  m  n  lambda0   predicted  measured   bulk      boundary  ratio   class\n";
    for (const auto& d : r.damping) {
      std::snprintf(line, sizeof line, "  %-2d %-2d %-9.4g %-10.4g %-10.4g %-9.4g %-9.4g %-7.3f %s\n",
                    d.m, d.n, d.lambda0, d.predicted_rate, d.measured_rate, d.bulk_rate,
                    d.boundary_rate, d.ratio, mode_class_name(d.cls));
      os << line;
    }
  }
  os << "pass: energy=" << r.pass_energy << " density_slope=" << r.pass_density_slope
     << " monotone=" << r.pass_monotone << " d_floor=" << r.pass_d_floor << "\n";
}

// write all sweep artifacts under dir; returns the manifest
inline json write_sweep_outputs(const SweepResult& res, const RunConfig& base,
                                const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> outputs;
  auto add = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    outputs.push_back({name, content});
  };
  add("reference_ledger.csv", ledger_csv(res.reference.ledger));
  for (size_t i = 0; i < res.members.size(); ++i) {
    const Trajectory& t = res.members[i];
    std::string tag = "eps" + std::to_string(i);
    add(tag + "_ledger.csv", ledger_csv(t.ledger));
    add(tag + "_modes.csv", modes_csv(t));
    if (!t.times.empty()) dump_state(dir / (tag + "_checkpoint_final"), t, int(t.times.size()) - 1);
  }
  add("norms.csv", norms_csv(res.report));
  add("report.json", rate_report_json(res.report).dump(2) + "\n");
  json manifest = manifest_json(base, outputs);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace io
}  // namespace lmn
