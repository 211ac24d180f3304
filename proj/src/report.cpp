#include "lswave/report.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lswave {

namespace {

std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::runtime_error("CSV: not a number: '" + s + "'");
  return v;
}

void report_header(std::ostream& os, std::size_t nch) {
  os << "id,E_pole_re,E_pole_im,B_E,Gamma";
  for (std::size_t j = 1; j <= nch; ++j) os << ",X" << j << "_re,X" << j << "_im";
  os << ",Z_re,Z_im,U";
  for (std::size_t j = 1; j <= nch; ++j) os << ",X_tilde_" << j;
  os << ",Z_tilde,X_dVdE_re,X_dVdE_im";
}

void report_row(std::ostream& os, const ReportRow& r) {
  os << r.id << ',' << fmt(r.E_pole.real()) << ',' << fmt(r.E_pole.imag()) << ','
     << fmt(r.B_E) << ',' << fmt(r.Gamma);
  for (const cplx& x : r.X) os << ',' << fmt(x.real()) << ',' << fmt(x.imag());
  os << ',' << fmt(r.Z.real()) << ',' << fmt(r.Z.imag()) << ',' << fmt(r.U);
  for (double xt : r.X_tilde) os << ',' << fmt(xt);
  os << ',' << fmt(r.Z_tilde) << ',' << fmt(r.X_dVdE.real()) << ',' << fmt(r.X_dVdE.imag());
}

}  // namespace

cplx locate_state(const PresetJob& job, const MomentumMesh& mesh, const StateSpec& state) {
  if (!state.from_scan) {
    return locate_pole(*job.model, job.channels, state.guess, mesh);
  }
  const std::vector<double> roots = scan_bound_states(*job.model, job.channels, mesh,
                                                      job.scan_lo, job.scan_hi, job.scan_npts);
  if (state.scan_index < 0 || static_cast<std::size_t>(state.scan_index) >= roots.size()) {
    std::ostringstream msg;
    msg << "state '" << state.label << "': scan over [" << job.scan_lo << ", " << job.scan_hi
        << "] found " << roots.size() << " root(s), need index " << state.scan_index;
    throw SolverError(msg.str());
  }
  return roots[static_cast<std::size_t>(state.scan_index)];
}

StateResult analyze_state(const PresetJob& job, const MomentumMesh& mesh, const StateSpec& state,
                          double threshold_ref) {
  StateResult out;
  const cplx seed = locate_state(job, mesh, state);
  const cplx E = locate_pole(*job.model, job.channels, seed, mesh);
  const ResidueVector rv = extract_residues(*job.model, job.channels, E, mesh);
  const RadialWaveFunction wf = amplitude_wavefunction(rv, job.channels, mesh);
  out.profile = density_profile(wf, mesh);
  const std::vector<cplx> X = compositeness_X(out.profile, mesh);
  const TildeReport tilde = missing_and_tilde(X);

  const RadialWaveFunction wf_schrod =
      radial_wavefunction_normalized(*job.model, job.channels, E, mesh);
  out.profile_schrod = density_profile(wf_schrod, mesh);
  out.rank1_residual = rv.factorization_residual;

  out.row.id = state.label;
  out.row.E_pole = E;
  out.row.B_E = threshold_ref - E.real();
  out.row.Gamma = -2.0 * E.imag();
  out.row.X = X;
  out.row.Z = tilde.Z;
  out.row.U = tilde.U;
  out.row.X_tilde = tilde.X_tilde;
  out.row.Z_tilde = tilde.Z_tilde;
  out.row.X_dVdE = compositeness_dVdE(wf, *job.model, job.channels, mesh);
  return out;
}

std::vector<StateResult> run_preset(const Preset& preset) {
  std::vector<StateResult> out;
  for (const PresetJob& job : preset.jobs) {
    for (const StateSpec& state : job.states) {
      out.push_back(analyze_state(job, preset.mesh, state, preset.threshold_ref));
    }
  }
  return out;
}

std::vector<SweepPoint> scan_v1(const std::string& preset_name, const PresetOptions& base,
                                const std::vector<double>& values) {
  PresetOptions opt0 = base;
  opt0.v1 = 0.0;
  opt0.E0.reset();
  const Preset base_preset = make_preset(preset_name, opt0);
  if (base_preset.jobs.empty() || base_preset.jobs.front().states.empty()) {
    throw std::invalid_argument("scan_v1: preset declares no states");
  }
  const PresetJob& job0 = base_preset.jobs.front();
  const cplx E_star =
      locate_pole(*job0.model, job0.channels,
                  locate_state(job0, base_preset.mesh, job0.states.front()), base_preset.mesh);

  std::vector<SweepPoint> out(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      SweepPoint& pt = out[i];
      pt.value = values[i];
      try {
        PresetOptions opt = base;
        opt.v1 = values[i];
        opt.E0 = E_star;  // pins the pole: v(E_star) = v0 for every v1
        const Preset p = make_preset(preset_name, opt);
        const PresetJob& job = p.jobs.front();
        StateSpec target = job.states.front();
        target.guess = E_star;
        target.from_scan = false;
        pt.row = analyze_state(job, p.mesh, target, p.threshold_ref).row;
        pt.ok = true;
      } catch (const std::exception& ex) {
        pt.ok = false;
        pt.error = ex.what();
      }
    }
  };

  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nworkers = std::min(values.size(), hw);
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  return out;
}

void write_profile_csv(std::ostream& os, const DensityProfile& profile,
                       const MomentumMesh& mesh) {
  os << "q_MeV";
  for (std::size_t j = 1; j <= profile.P.size(); ++j) {
    os << ",reP_ch" << j << ",imP_ch" << j;
  }
  os << '\n';
  if (profile.P.empty()) return;
  const std::size_t n = static_cast<std::size_t>(profile.P.front().size());
  for (std::size_t i = 0; i < n; ++i) {
    os << fmt(mesh.q[i]);
    for (const Eigen::VectorXcd& Pj : profile.P) {
      os << ',' << fmt(Pj[static_cast<Eigen::Index>(i)].real()) << ','
         << fmt(Pj[static_cast<Eigen::Index>(i)].imag());
    }
    os << '\n';
  }
}

DensityProfile read_profile_csv(std::istream& is, std::vector<double>* q_out) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("profile CSV: missing header");
  const std::vector<std::string> head = split_csv(line);
  if (head.empty() || head[0] != "q_MeV") {
    throw std::runtime_error("profile CSV: unexpected header '" + line + "'");
  }
  const std::size_t nch = (head.size() - 1) / 2;
  std::vector<std::vector<cplx>> cols(nch);
  std::vector<double> q;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != 1 + 2 * nch) throw std::runtime_error("profile CSV: ragged row '" + line + "'");
    q.push_back(to_double(f[0]));
    for (std::size_t j = 0; j < nch; ++j) {
      cols[j].emplace_back(to_double(f[1 + 2 * j]), to_double(f[2 + 2 * j]));
    }
  }
  DensityProfile out;
  for (std::size_t j = 0; j < nch; ++j) {
    out.P.emplace_back(Eigen::Map<const Eigen::VectorXcd>(cols[j].data(),
                                                          static_cast<Eigen::Index>(cols[j].size())));
  }
  if (q_out) *q_out = std::move(q);
  return out;
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  const std::size_t nch = rows.empty() ? 0 : rows.front().X.size();
  report_header(os, nch);
  os << '\n';
  for (const ReportRow& r : rows) {
    if (r.X.size() != nch) throw std::runtime_error("report CSV: mixed channel counts");
    report_row(os, r);
    os << '\n';
  }
}

std::vector<ReportRow> read_report_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("report CSV: missing header");
  const std::vector<std::string> head = split_csv(line);
  std::size_t nch = 0;
  for (const std::string& h : head) {
    if (h.size() > 3 && h[0] == 'X' && h.compare(h.size() - 3, 3, "_re") == 0 &&
        h.find("dVdE") == std::string::npos) {
      ++nch;
    }
  }
  const std::size_t expect = 5 + 2 * nch + 3 + nch + 3;
  if (head.size() != expect) {
    throw std::runtime_error("report CSV: unexpected header '" + line + "'");
  }
  std::vector<ReportRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() != expect) throw std::runtime_error("report CSV: ragged row '" + line + "'");
    ReportRow r;
    std::size_t k = 0;
    r.id = f[k++];
    const double er = to_double(f[k++]), ei = to_double(f[k++]);
    r.E_pole = cplx(er, ei);
    r.B_E = to_double(f[k++]);
    r.Gamma = to_double(f[k++]);
    for (std::size_t j = 0; j < nch; ++j) {
      const double xr = to_double(f[k++]), xi = to_double(f[k++]);
      r.X.emplace_back(xr, xi);
    }
    const double zr = to_double(f[k++]), zi = to_double(f[k++]);
    r.Z = cplx(zr, zi);
    r.U = to_double(f[k++]);
    for (std::size_t j = 0; j < nch; ++j) r.X_tilde.push_back(to_double(f[k++]));
    r.Z_tilde = to_double(f[k++]);
    const double dr = to_double(f[k++]), di = to_double(f[k++]);
    r.X_dVdE = cplx(dr, di);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::string& param,
                     const std::vector<SweepPoint>& points) {
  std::size_t nch = 0;
  for (const SweepPoint& p : points) {
    if (p.ok) {
      nch = p.row.X.size();
      break;
    }
  }
  os << param << ',';
  report_header(os, nch);
  os << '\n';
  for (const SweepPoint& p : points) {
    if (!p.ok) continue;
    os << fmt(p.value) << ',';
    report_row(os, p.row);
    os << '\n';
  }
}

}  // namespace lswave
