// Command-line front end: spectral tables, condition-(H) reports, single
// compressible/incompressible runs, linearized acoustic runs, epsilon sweeps
// and sweep report assertion.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lmn/report.hpp"

namespace fs = std::filesystem;
using namespace lmn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  double epsilon = -1;
  int modes = -1;
};

std::map<std::string, std::string> load_map(const CommonOpts& o) {
  if (o.config_path.empty()) return {};
  return parse_config_text(io::read_file(o.config_path));
}

RunConfig load_config(const CommonOpts& o) {
  RunConfig cfg = run_config_from_map(load_map(o));
  if (o.epsilon > 0) cfg.params.epsilon = o.epsilon;
  if (o.modes > 0) cfg.modes_N = o.modes;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "key = value config file");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--epsilon", o.epsilon, "override params.epsilon");
  cmd->add_option("--modes", o.modes, "override modes.N");
}

void write_run_outputs(const Trajectory& traj, const RunConfig& cfg, const std::string& out_dir) {
  if (out_dir.empty()) return;
  fs::path dir(out_dir);
  std::vector<std::pair<std::string, std::string>> outputs;
  auto add = [&](const std::string& name, const std::string& content) {
    io::write_file(dir / name, content);
    outputs.push_back({name, content});
  };
  add("ledger.csv", io::ledger_csv(traj.ledger));
  if (!traj.modes.empty()) add("modes.csv", io::modes_csv(traj));
  if (!traj.times.empty()) {
    io::dump_state(dir / "checkpoint_initial", traj, 0);
    io::dump_state(dir / "checkpoint_final", traj, int(traj.times.size()) - 1);
  }
  io::write_file(dir / "manifest.json", io::manifest_json(cfg, outputs).dump(2) + "\n");
}

int cmd_basis(const CommonOpts& o) {
  RunConfig cfg = load_config(o);
  SpectralBasis basis = build_basis(cfg.domain, cfg.modes_N, cfg.params.mu);
  std::string csv = io::basis_csv(basis);
  if (!o.out_dir.empty()) {
    io::write_file(fs::path(o.out_dir) / "basis.csv", csv);
    std::cout << "wrote " << (fs::path(o.out_dir) / "basis.csv").string() << "\n";
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

int cmd_check_h(const CommonOpts& o) {
  auto kv = load_map(o);
  RunConfig cfg = run_config_from_map(kv);
  if (o.modes > 0) cfg.modes_N = o.modes;
  double tol = kv.count("condH.tol") ? std::stod(kv["condH.tol"]) : 1e-8;
  SpectralBasis basis = build_basis(cfg.domain, cfg.modes_N, cfg.params.mu);
  ConditionHReport rep = check_condition_H(basis, tol);
  std::cout << "condition (H): " << (rep.satisfied ? "satisfied" : "violated") << " (tol " << tol
            << ", " << cfg.modes_N << " modes)\n";
  for (int idx : rep.violating) {
    const NeumannMode& m = basis.modes[idx];
    std::cout << "  violating mode (" << m.m << "," << m.n << "), lambda0 = " << m.lambda0 << "\n";
  }
  std::cout << "max degenerate-pair boundary cross integral: " << rep.max_degenerate_cross << "\n";
  if (!o.out_dir.empty()) {
    io::json j;
    j["satisfied"] = rep.satisfied;
    j["tol"] = rep.tol;
    j["violating"] = io::json::array();
    for (int idx : rep.violating)
      j["violating"].push_back({{"m", basis.modes[idx].m}, {"n", basis.modes[idx].n}});
    j["max_degenerate_cross"] = rep.max_degenerate_cross;
    io::write_file(fs::path(o.out_dir) / "condition_h.json", j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_run(const CommonOpts& o, bool compressible) {
  RunConfig cfg = load_config(o);
  Trajectory traj = compressible ? run_compressible(cfg) : run_incompressible(cfg);
  write_run_outputs(traj, cfg, o.out_dir);
  if (traj.aborted) {
    std::cerr << "numerical abort: " << traj.note << "\n";
    return kExitNumerical;
  }
  std::cout << (compressible ? "compressible" : "incompressible") << " run complete: t = "
            << traj.times.back() << ", samples = " << traj.samples()
            << ", ledger drift = " << traj.ledger.max_relative_drift() << "\n";
  return kExitOk;
}

int cmd_wave(const CommonOpts& o) {
  auto kv = load_map(o);
  RunConfig cfg = run_config_from_map(kv);
  if (o.epsilon > 0) cfg.params.epsilon = o.epsilon;
  if (o.modes > 0) cfg.modes_N = o.modes;
  int spp = kv.count("wave.steps_per_period") ? std::stoi(kv["wave.steps_per_period"]) : 24;

  SpectralBasis basis = build_basis(cfg.domain, cfg.modes_N, cfg.params.mu);
  InitialState init = make_initial_state(cfg);
  ScalarField phi0 = density_fluctuation(init.rho, cfg.params.epsilon);
  VectorField m0 = init.u;

  WaveRunOptions opts;
  opts.steps_per_period = spp;
  WaveRunResult res = linearized_wave_run(phi0, m0, cfg.params.epsilon, cfg.params.mu, cfg.T,
                                          basis, opts);

  // damping rows for every traced mode that actually carries amplitude
  io::json damping = io::json::array();
  double peak = 0;
  for (auto& tr : res.traces)
    for (auto& b : tr.beta) peak = std::max(peak, std::abs(b));
  for (auto& tr : res.traces) {
    if (tr.sign != +1) continue;
    double mx = 0;
    for (auto& b : tr.beta) mx = std::max(mx, std::abs(b));
    if (mx < 1e-8 * peak) continue;
    std::vector<double> mags;
    for (auto& b : tr.beta) mags.push_back(std::abs(b));
    DampingRow row;
    row.m = tr.m;
    row.n = tr.n;
    row.lambda0 = tr.lambda0;
    NeumannMode mode = eigenpair(cfg.domain, tr.m, tr.n);
    DampingCorrection corr = damping_correction(mode, cfg.params.mu);
    row.cls = corr.mode_class;
    row.predicted_rate = -corr.value_plus.real() / std::sqrt(cfg.params.epsilon);
    row.bulk_rate = bulk_decay_rate(cfg.params.mu, tr.lambda0);
    row.measured_rate = fit_damping_rate(tr.times, mags);
    row.boundary_rate = row.measured_rate - row.bulk_rate;
    row.ratio = row.predicted_rate > 0 ? row.boundary_rate / row.predicted_rate : 0.0;
    damping.push_back(io::damping_row_json(row));
    std::cout << "mode (" << tr.m << "," << tr.n << ") class " << mode_class_name(row.cls)
              << ": measured " << row.measured_rate << ", boundary " << row.boundary_rate
              << ", predicted " << row.predicted_rate << "\n";
  }

  if (!o.out_dir.empty()) {
    std::string csv = "t,m,n,sign,re_b,im_b,abs_b,re_c,im_c\n";
    for (auto& tr : res.traces) {
      double mx = 0;
      for (auto& b : tr.beta) mx = std::max(mx, std::abs(b));
      if (mx < 1e-8 * peak) continue;
      for (size_t i = 0; i < tr.times.size(); ++i)
        csv += io::fmt(tr.times[i]) + "," + std::to_string(tr.m) + "," + std::to_string(tr.n) +
               "," + (tr.sign > 0 ? "+" : "-") + "," + io::fmt(tr.beta[i].real()) + "," +
               io::fmt(tr.beta[i].imag()) + "," + io::fmt(std::abs(tr.beta[i])) + "," +
               io::fmt(tr.c[i].real()) + "," + io::fmt(tr.c[i].imag()) + "\n";
    }
    io::write_file(fs::path(o.out_dir) / "wave_modes.csv", csv);
    io::write_file(fs::path(o.out_dir) / "damping.json", damping.dump(2) + "\n");
    std::cout << "wrote damping.json and wave_modes.csv under " << o.out_dir << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const CommonOpts& o) {
  auto kv = load_map(o);
  SweepConfig sw = default_sweep_config();
  if (!kv.empty()) sw.base = run_config_from_map(kv);
  else if (o.config_path.empty()) {
    // keep tuned sweep defaults
  }
  if (o.modes > 0) sw.base.modes_N = o.modes;
  if (kv.count("sweep.epsilons")) {
    sw.epsilons.clear();
    std::string s = kv["sweep.epsilons"];
    size_t pos = 0;
    while (pos != std::string::npos) {
      size_t comma = s.find(',', pos);
      std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!tok.empty()) sw.epsilons.push_back(std::stod(tok));
      pos = comma == std::string::npos ? comma : comma + 1;
    }
  }
  if (kv.count("sweep.damping_table")) sw.damping_table = kv["sweep.damping_table"] != "0";
  if (kv.count("sweep.damping_eps")) sw.damping_eps = std::stod(kv["sweep.damping_eps"]);
  sw.validate();

  SweepResult res = run_sweep(sw);
  io::print_report(res.report, std::cout);
  if (!o.out_dir.empty()) {
    io::write_sweep_outputs(res, sw.base, o.out_dir);
    std::cout << "wrote sweep outputs under " << o.out_dir << "\n";
  }
  for (auto& p : res.report.points)
    if (p.aborted) return kExitNumerical;
  return kExitOk;
}

int cmd_report(const CommonOpts& o, bool assert_pass) {
  fs::path path = fs::path(o.out_dir.empty() ? "." : o.out_dir) / "report.json";
  RateReport rep = io::rate_report_from_json(io::json::parse(io::read_file(path)));
  io::print_report(rep, std::cout);
  if (assert_pass && !rep.all_pass()) {
    std::cerr << "acceptance failure: one or more sweep criteria did not pass\n";
    return kExitAcceptance;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-Mach nematic liquid crystal laboratory"};
  app.require_subcommand(1);

  CommonOpts o_basis, o_checkh, o_comp, o_inc, o_wave, o_sweep, o_report;
  bool assert_pass = false;

  add_common(app.add_subcommand("basis", "dump the spectral table"), o_basis);
  add_common(app.add_subcommand("check-h", "condition (H) report"), o_checkh);
  add_common(app.add_subcommand("run-comp", "compressible run"), o_comp);
  add_common(app.add_subcommand("run-inc", "incompressible run"), o_inc);
  add_common(app.add_subcommand("wave", "linearized acoustic run"), o_wave);
  add_common(app.add_subcommand("sweep", "epsilon sweep against the incompressible reference"),
             o_sweep);
  auto* rep = app.add_subcommand("report", "print (and optionally assert) a sweep report");
  add_common(rep, o_report);
  rep->add_flag("--assert", assert_pass, "exit 4 unless all criteria pass");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("basis")) return cmd_basis(o_basis);
    if (app.got_subcommand("check-h")) return cmd_check_h(o_checkh);
    if (app.got_subcommand("run-comp")) return cmd_run(o_comp, true);
    if (app.got_subcommand("run-inc")) return cmd_run(o_inc, false);
    if (app.got_subcommand("wave")) return cmd_wave(o_wave);
    if (app.got_subcommand("sweep")) return cmd_sweep(o_sweep);
    if (app.got_subcommand("report")) return cmd_report(o_report, assert_pass);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
