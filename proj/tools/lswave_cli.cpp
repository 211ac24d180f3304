#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lswave/acceptance.hpp"
#include "lswave/config.hpp"
#include "lswave/report.hpp"
#include "lswave/scattering.hpp"
#include "lswave/unstable.hpp"

namespace fs = std::filesystem;
using namespace lswave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAcceptance = 4;

struct CommonFlags {
  std::string config_path;
  double theta = 0.0;
  int mesh_n = 0;
  double mesh_scale = 0.0;
  std::string out_dir;
  bool mesh_check = false;

  CLI::Option* opt_theta = nullptr;
  CLI::Option* opt_n = nullptr;
  CLI::Option* opt_scale = nullptr;
  CLI::Option* opt_out = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "run configuration file");
  f.opt_theta = cmd->add_option("--theta", f.theta, "contour rotation angle (degrees)");
  f.opt_n = cmd->add_option("--mesh-n", f.mesh_n, "momentum mesh size");
  f.opt_scale = cmd->add_option("--mesh-scale", f.mesh_scale, "momentum mesh scale (MeV)");
  f.opt_out = cmd->add_option("--out", f.out_dir, "output directory for CSV artifacts");
  cmd->add_flag("--mesh-check", f.mesh_check,
                "rerun at doubled mesh size and append convergence deltas");
}

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig cfg;
  if (!f.config_path.empty()) cfg = load_run_config(f.config_path);
  if (f.opt_theta->count() > 0) {
    if (f.theta < 0.0 || f.theta >= 45.0) throw ConfigError("--theta: need 0 <= theta < 45");
    cfg.options.theta_deg = f.theta;
  }
  if (f.opt_n->count() > 0) {
    if (f.mesh_n < 8) throw ConfigError("--mesh-n: need n >= 8");
    cfg.options.mesh_n = f.mesh_n;
  }
  if (f.opt_scale->count() > 0) {
    if (f.mesh_scale <= 0.0) throw ConfigError("--mesh-scale: need scale > 0");
    cfg.options.mesh_scale = f.mesh_scale;
  }
  if (f.opt_out->count() > 0) cfg.out_dir = f.out_dir;
  return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " +
                            ec.message());
  return dir;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  fn(os);
  os.flush();
  if (!os) throw ConfigError("write failed for '" + path.string() + "'");
}

std::string cstr(cplx z) {
  std::ostringstream os;
  os.precision(10);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string dstr(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void print_row(const std::string& prefix, const ReportRow& r) {
  cplx sum = 0.0;
  for (const cplx& x : r.X) sum += x;
  std::cout << prefix << r.id << ": E_pole = " << cstr(r.E_pole) << " MeV, B_E = " << dstr(r.B_E)
            << ", Gamma = " << dstr(r.Gamma) << ", sum X = " << cstr(sum)
            << ", Z = " << cstr(r.Z) << ", X_dVdE = " << cstr(r.X_dVdE) << '\n';
}

ReportRow delta_row(const ReportRow& a, const ReportRow& b) {
  ReportRow d;
  d.id = a.id + "/delta2n";
  d.E_pole = cplx(std::abs(a.E_pole.real() - b.E_pole.real()),
                  std::abs(a.E_pole.imag() - b.E_pole.imag()));
  d.B_E = std::abs(a.B_E - b.B_E);
  d.Gamma = std::abs(a.Gamma - b.Gamma);
  for (std::size_t j = 0; j < a.X.size(); ++j) {
    d.X.emplace_back(std::abs(a.X[j].real() - b.X[j].real()),
                     std::abs(a.X[j].imag() - b.X[j].imag()));
    d.X_tilde.push_back(std::abs(a.X_tilde[j] - b.X_tilde[j]));
  }
  d.Z = cplx(std::abs(a.Z.real() - b.Z.real()), std::abs(a.Z.imag() - b.Z.imag()));
  d.U = std::abs(a.U - b.U);
  d.Z_tilde = std::abs(a.Z_tilde - b.Z_tilde);
  d.X_dVdE = cplx(std::abs(a.X_dVdE.real() - b.X_dVdE.real()),
                  std::abs(a.X_dVdE.imag() - b.X_dVdE.imag()));
  return d;
}

void emit_state_artifacts(const fs::path& dir, const std::string& base,
                          const std::vector<StateResult>& results, const MomentumMesh& mesh,
                          std::vector<ReportRow>* rows) {
  for (const StateResult& r : results) {
    rows->push_back(r.row);
    write_file(dir / (base + "_" + r.row.id + "_profile.csv"),
               [&](std::ostream& os) { write_profile_csv(os, r.profile, mesh); });
    write_file(dir / (base + "_" + r.row.id + "_profile_schrod.csv"),
               [&](std::ostream& os) { write_profile_csv(os, r.profile_schrod, mesh); });
  }
}

void append_mesh_check(const RunConfig& cfg, const std::vector<StateResult>& base,
                       std::vector<ReportRow>* rows) {
  RunConfig doubled = cfg;
  doubled.options.mesh_n = cfg.options.mesh_n.value_or(200) * 2;
  const Preset p2 = build_preset(doubled);
  const std::vector<StateResult> r2 = run_preset(p2);
  if (r2.size() != base.size()) throw SolverError("mesh check: state count changed at 2n");
  for (std::size_t i = 0; i < base.size(); ++i) {
    const ReportRow d = delta_row(base[i].row, r2[i].row);
    std::cout << "mesh-check " << base[i].row.id << ": |dE| = (" << dstr(d.E_pole.real()) << ", "
              << dstr(d.E_pole.imag()) << "), |dB_E| = " << dstr(d.B_E) << ", max |dX| = ";
    double mx = 0.0;
    for (const cplx& x : d.X) mx = std::max({mx, x.real(), x.imag()});
    std::cout << dstr(mx) << '\n';
    rows->push_back(d);
  }
}

int cmd_run_states(const CommonFlags& flags, const std::string& forced_model,
                   const char* mode) {
  RunConfig cfg = resolve_config(flags);
  if (!forced_model.empty()) cfg.model = forced_model;
  const fs::path dir = prepare_out_dir(cfg);
  Preset p = build_preset(cfg);

  std::vector<StateResult> results;
  if (std::string(mode) == "preset") {
    results = run_preset(p);
  } else if (std::string(mode) == "bound") {
    for (const PresetJob& job : p.jobs) {
      double lo = job.scan_lo, hi = job.scan_hi;
      if (hi <= lo) {
        const double thr = job.channels.lowest_threshold();
        lo = thr - 30.0;
        hi = thr - 0.05;
      }
      const std::vector<double> roots =
          scan_bound_states(*job.model, job.channels, p.mesh, lo, hi, job.scan_npts);
      for (std::size_t k = 0; k < roots.size(); ++k) {
        StateSpec s;
        s.label = "bound" + std::to_string(k + 1);
        s.guess = roots[k];
        results.push_back(analyze_state(job, p.mesh, s, p.threshold_ref));
      }
    }
    if (results.empty()) throw SolverError("bound: no bound states in the scan window");
  } else {  // resonance
    std::optional<cplx> guess = cfg.guess;
    const PresetJob* job = &p.jobs.front();
    if (!guess) {
      for (const PresetJob& j : p.jobs) {
        for (const StateSpec& s : j.states) {
          if (!s.from_scan) {
            guess = s.guess;
            job = &j;
            break;
          }
        }
        if (guess) break;
      }
    }
    if (!guess) {
      throw ConfigError("resonance: no pole seed; give [pole] guess_re/guess_im in the config");
    }
    StateSpec s;
    s.label = "resonance";
    s.guess = *guess;
    results.push_back(analyze_state(*job, p.mesh, s, p.threshold_ref));
  }

  std::vector<ReportRow> rows;
  emit_state_artifacts(dir, p.name, results, p.mesh, &rows);
  for (const StateResult& r : results) print_row(p.name + "/", r.row);

  if (p.loop) {
    const cplx Xd = decay_compositeness(*p.loop, p.m_phys);
    cplx sum = 0.0;
    for (const cplx& x : results.front().row.X) sum += x;
    std::cout << p.name << ": m_phys = " << cstr(p.m_phys) << " MeV, X_d = " << cstr(Xd)
              << ", X + X_d = " << cstr(sum + Xd) << '\n';
  }
  if (flags.mesh_check) append_mesh_check(cfg, results, &rows);

  write_file(dir / (p.name + "_report.csv"),
             [&](std::ostream& os) { write_report_csv(os, rows); });
  std::cout << "wrote " << (dir / (p.name + "_report.csv")).string() << '\n';
  return kExitOk;
}

int cmd_scan(const CommonFlags& flags, const std::string& param,
             const std::vector<double>& flag_values) {
  RunConfig cfg = resolve_config(flags);
  const std::string use_param = param.empty() ? cfg.sweep_param : param;
  if (use_param != "v1") {
    throw ConfigError("scan: unsupported sweep parameter '" + use_param + "' (only v1)");
  }
  const std::vector<double> values = flag_values.empty() ? cfg.sweep_values : flag_values;
  if (values.empty()) {
    throw ConfigError("scan: no sweep values; pass --values or [sweep] values in the config");
  }
  if (cfg.model == "custom") {
    throw ConfigError("scan: sweeps are supported for the shipped presets only");
  }
  const fs::path dir = prepare_out_dir(cfg);

  const std::vector<SweepPoint> points = scan_v1(cfg.model, cfg.options, values);
  std::size_t ok = 0;
  for (const SweepPoint& pt : points) {
    if (pt.ok) {
      ++ok;
      print_row("v1 = " + dstr(pt.value) + " ", pt.row);
    } else {
      std::cerr << "v1 = " << dstr(pt.value) << " failed: " << pt.error << '\n';
    }
  }
  const fs::path csv = dir / (cfg.model + "_scan_" + use_param + ".csv");
  write_file(csv, [&](std::ostream& os) { write_sweep_csv(os, use_param, points); });
  std::cout << "wrote " << csv.string() << " (" << ok << "/" << points.size()
            << " points solved)" << '\n';
  return ok > 0 ? kExitOk : kExitSolver;
}

int cmd_check_optical(const CommonFlags& flags) {
  RunConfig cfg = resolve_config(flags);
  cfg.options.theta_deg = 0.0;  // the on-shell solver works on the real axis
  const Preset p = build_preset(cfg);
  const PresetJob& job = p.jobs.front();

  std::vector<double> energies = cfg.check_energies;
  if (energies.empty()) {
    const double thr = job.channels.lowest_threshold();
    energies = {thr + 10.0, thr + 50.0, thr + 100.0};
    for (std::size_t j = 0; j < job.channels.size(); ++j) {
      const double t = job.channels[j].threshold();
      if (t > thr) energies.push_back(t + 50.0);
    }
    std::sort(energies.begin(), energies.end());
  }

  double worst = 0.0;
  for (double E : energies) {
    const OnshellSolution sol = onshell_real_axis(*job.model, job.channels, E, p.mesh);
    const double res = optical_residual(sol);
    const Eigen::MatrixXcd S = smatrix(sol);
    const double uni = (S.adjoint() * S - Eigen::MatrixXcd::Identity(S.rows(), S.cols()))
                           .cwiseAbs()
                           .maxCoeff();
    worst = std::max(worst, res);
    std::cout << "E = " << dstr(E) << " MeV: open channels = " << sol.open.size()
              << ", optical residual = " << dstr(res) << ", |S*S - 1|max = " << dstr(uni) << '\n';
  }
  if (worst > 1e-6) {
    std::cerr << "check-optical: worst residual " << dstr(worst) << " exceeds 1e-6" << '\n';
    return kExitSolver;
  }
  std::cout << "check-optical: all residuals within 1e-6" << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled-channel momentum-space scattering and compositeness toolkit"};
  app.require_subcommand(1);

  CommonFlags f_preset, f_bound, f_resonance, f_scan, f_check;

  CLI::App* c_preset = app.add_subcommand("preset", "run a shipped scenario end to end");
  std::string preset_name;
  c_preset->add_option("name", preset_name, "one of model-a, model-b, model-c, model-d")
      ->required();
  add_common(c_preset, f_preset);

  CLI::App* c_bound = app.add_subcommand("bound", "scan for bound states and analyze each");
  add_common(c_bound, f_bound);

  CLI::App* c_resonance =
      app.add_subcommand("resonance", "polish a complex pole seed and analyze the state");
  add_common(c_resonance, f_resonance);

  CLI::App* c_scan = app.add_subcommand("scan", "sweep the interaction's energy slope");
  std::string scan_param;
  std::vector<double> scan_values;
  c_scan->add_option("--param", scan_param, "swept parameter (v1)");
  c_scan->add_option("--values", scan_values, "sweep values")->delimiter(',');
  add_common(c_scan, f_scan);

  CLI::App* c_check = app.add_subcommand("check-optical", "verify on-shell unitarity");
  add_common(c_check, f_check);

  app.add_subcommand("verify", "run the acceptance regression suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (c_preset->parsed()) return cmd_run_states(f_preset, preset_name, "preset");
    if (c_bound->parsed()) return cmd_run_states(f_bound, "", "bound");
    if (c_resonance->parsed()) return cmd_run_states(f_resonance, "", "resonance");
    if (c_scan->parsed()) return cmd_scan(f_scan, scan_param, scan_values);
    if (c_check->parsed()) return cmd_check_optical(f_check);
    // verify
    const int failures = run_acceptance(std::cout);
    return failures == 0 ? kExitOk : kExitAcceptance;
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& ex) {
    std::cerr << "solver error: " << ex.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitSolver;
  }
}
