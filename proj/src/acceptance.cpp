#include "lswave/acceptance.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "lswave/report.hpp"
#include "lswave/scattering.hpp"
#include "lswave/structure.hpp"
#include "lswave/unstable.hpp"

namespace lswave {

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> issues;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      issues.push_back(what);
    }
  }
};

std::string cstr(cplx z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string dstr(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool near(double got, double want, double tol) { return std::abs(got - want) <= tol; }

bool near2(cplx got, cplx want, double tol) {
  return near(got.real(), want.real(), tol) && near(got.imag(), want.imag(), tol);
}

std::map<std::string, StateResult> by_id(const std::vector<StateResult>& rs) {
  std::map<std::string, StateResult> out;
  for (const StateResult& r : rs) out.emplace(r.row.id, r);
  return out;
}

// ---- criterion 1 + 2 share the four bound states of the shallow-well preset

Check criterion1(const std::map<std::string, StateResult>& states) {
  Check c;
  const std::pair<const char*, double> want[] = {
      {"0s", 23.2}, {"0p", 13.1}, {"0d", 2.6}, {"1s", 2.1}};
  for (const auto& [label, be] : want) {
    const auto it = states.find(label);
    if (it == states.end()) {
      c.expect(false, std::string("state ") + label + " not found");
      continue;
    }
    c.expect(near(it->second.row.B_E, be, 0.1),
             std::string(label) + ": B_E = " + dstr(it->second.row.B_E) + ", want " + dstr(be) +
                 " +- 0.1");
  }
  return c;
}

Check criterion2(const std::map<std::string, StateResult>& states) {
  Check c;
  for (const auto& [label, r] : states) {
    c.expect(std::abs(r.row.X.at(0) - 1.0) <= 1e-4,
             label + ": |X - 1| = " + dstr(std::abs(r.row.X.at(0) - 1.0)) + " > 1e-4");
    const Eigen::VectorXcd& pl = r.profile.P.at(0);
    const Eigen::VectorXcd& ps = r.profile_schrod.P.at(0);
    const double peak = pl.cwiseAbs().maxCoeff();
    const double dev = (pl - ps).cwiseAbs().maxCoeff();
    c.expect(dev <= 1e-4 * peak,
             label + ": profile routes deviate by " + dstr(dev / peak) + " of peak > 1e-4");
  }
  return c;
}

const std::vector<double>& v1_grid() {
  static const std::vector<double> g{-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5};
  return g;
}

Check sweep_check(const std::string& preset, const PresetOptions& base, double route_tol,
                  bool per_part) {
  Check c;
  const std::vector<SweepPoint> pts = scan_v1(preset, base, v1_grid());
  double prev = -1e300;
  for (const SweepPoint& p : pts) {
    if (!p.ok) {
      c.expect(false, "v1 = " + dstr(p.value) + " failed: " + p.error);
      continue;
    }
    cplx sum = 0.0;
    for (const cplx& x : p.row.X) sum += x;
    const cplx d = sum - p.row.X_dVdE;
    const bool routes_agree = per_part
                                  ? (std::abs(d.real()) <= route_tol && std::abs(d.imag()) <= route_tol)
                                  : (std::abs(d) <= route_tol);
    c.expect(routes_agree, "v1 = " + dstr(p.value) + ": residue-route sum " + cstr(sum) +
                               " vs dV/dE route " + cstr(p.row.X_dVdE));
    c.expect(sum.real() > prev, "v1 = " + dstr(p.value) + ": Re sum X = " + dstr(sum.real()) +
                                    " not strictly increasing (prev " + dstr(prev) + ")");
    prev = sum.real();
  }
  return c;
}

Check criterion3() { return sweep_check("model-a", PresetOptions{}, 1e-4, false); }

Check criterion4() {
  Check c;
  std::vector<cplx> poles;
  for (double th : {10.0, 20.0, 30.0}) {
    PresetOptions o;
    o.theta_deg = th;
    const std::vector<StateResult> rs = run_preset(make_preset("model-b", o));
    const ReportRow& row = rs.at(0).row;
    poles.push_back(row.E_pole);
    c.expect(std::abs(row.X.at(0) - 1.0) <= 1e-3,
             "theta = " + dstr(th) + ": |X - 1| = " + dstr(std::abs(row.X.at(0) - 1.0)) +
                 " > 1e-3");
    if (th == 20.0) {
      c.expect(near2(row.E_pole, cplx(1884.0, -0.1), 0.2),
               "theta = 20: E_pole = " + cstr(row.E_pole) + ", want 1884.0 - 0.1i +- 0.2");
    }
  }
  double spread = 0.0;
  for (const cplx& a : poles) {
    for (const cplx& b : poles) {
      spread = std::max({spread, std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag())});
    }
  }
  c.expect(spread <= 1e-2, "pole spread across theta = " + dstr(spread) + " > 1e-2");
  return c;
}

Check criterion5(const StateResult& table_row) {
  Check c;
  PresetOptions o0;
  o0.x = 0.0;
  const std::vector<StateResult> r0 = run_preset(make_preset("model-c", o0));
  c.expect(near(r0.at(0).row.B_E, 3.5, 0.1),
           "x = 0: B_E = " + dstr(r0.at(0).row.B_E) + ", want 3.5 +- 0.1");

  const ReportRow& row = table_row.row;
  c.expect(near2(row.E_pole, cplx(1412.0, -7.3), 0.3),
           "x = 0.5: E_pole = " + cstr(row.E_pole) + ", want 1412.0 - 7.3i +- 0.3");
  c.expect(near(row.B_E, 22.6, 0.3), "B_E = " + dstr(row.B_E) + ", want 22.6 +- 0.3");
  c.expect(near(row.Gamma, 14.7, 0.5), "Gamma = " + dstr(row.Gamma) + ", want 14.7 +- 0.5");
  c.expect(near2(row.X.at(0), cplx(0.99, -0.08), 0.02),
           "X1 = " + cstr(row.X.at(0)) + ", want 0.99 - 0.08i +- 0.02");
  c.expect(near2(row.X.at(1), cplx(0.01, 0.08), 0.02),
           "X2 = " + cstr(row.X.at(1)) + ", want 0.01 + 0.08i +- 0.02");
  c.expect(near2(row.X.at(0) + row.X.at(1), cplx(1.0, 0.0), 0.02),
           "X1 + X2 = " + cstr(row.X.at(0) + row.X.at(1)) + ", want 1.00 + 0.00i +- 0.02");
  c.expect(near(row.U, 0.07, 0.02), "U = " + dstr(row.U) + ", want 0.07 +- 0.02");
  c.expect(near(row.X_tilde.at(0), 0.93, 0.02),
           "X~1 = " + dstr(row.X_tilde.at(0)) + ", want 0.93 +- 0.02");
  c.expect(near(row.X_tilde.at(1), 0.07, 0.02),
           "X~2 = " + dstr(row.X_tilde.at(1)) + ", want 0.07 +- 0.02");
  return c;
}

Check criterion6() { return sweep_check("model-c", PresetOptions{}, 1e-4, true); }

Check criterion7(const Preset& pd, const StateResult& dres) {
  Check c;
  c.expect(near2(pd.m_phys, cplx(422.7, -52.0), 0.5),
           "m_phys = " + cstr(pd.m_phys) + ", want 422.7 - 52.0i +- 0.5");
  const cplx Xd = decay_compositeness(*pd.loop, pd.m_phys);
  c.expect(near2(Xd, cplx(0.10, 0.29), 0.02), "X_d = " + cstr(Xd) + ", want 0.10 + 0.29i +- 0.02");
  const ReportRow& row = dres.row;
  c.expect(near2(row.E_pole, cplx(1363.8, -32.2), 0.5),
           "E_pole = " + cstr(row.E_pole) + ", want 1363.8 - 32.2i +- 0.5");
  c.expect(near2(row.X.at(0), cplx(0.90, -0.21), 0.02),
           "X = " + cstr(row.X.at(0)) + ", want 0.90 - 0.21i +- 0.02");
  c.expect(near2(row.X.at(0) + Xd, cplx(1.00, 0.08), 0.03),
           "X + X_d = " + cstr(row.X.at(0) + Xd) + ", want 1.00 + 0.08i +- 0.03");
  return c;
}

// ---- criterion 8: paper-independent property suite

void check_optical(Check& c, const char* tag, const Preset& p, double E) {
  const PresetJob& job = p.jobs.front();
  const OnshellSolution sol = onshell_real_axis(*job.model, job.channels, E, p.mesh);
  const double res = optical_residual(sol);
  c.expect(res <= 1e-8, std::string(tag) + " at E = " + dstr(E) +
                            ": optical residual = " + dstr(res) + " > 1e-8");
}

void check_born(Check& c) {
  PresetOptions o;
  o.v0 = -35.0e-3;
  const Preset p = make_preset("model-a", o);
  const PresetJob& job = p.jobs.front();
  const double E = job.channels.lowest_threshold() - 5.0;
  const HalfOffshellSolution sol = solve_half_offshell(*job.model, job.channels, E, p.mesh);
  const Eigen::MatrixXcd V = potential_matrix(*job.model, job.channels, E, p.mesh);
  const Eigen::MatrixXcd A = build_kernel(*job.model, job.channels, E, p.mesh);
  const Eigen::MatrixXcd born2 =
      V + (Eigen::MatrixXcd::Identity(A.rows(), A.cols()) - A) * V;
  const double rel = (sol.T - born2).norm() / sol.T.norm();
  c.expect(rel <= 1e-4, "second-Born deviation at v0 x 1e-3 = " + dstr(rel) + " > 1e-4");
}

void check_pole_routes(Check& c, const Preset& pb) {
  const PresetJob& job = pb.jobs.front();
  const cplx E_det =
      locate_pole(*job.model, job.channels, job.states.front().guess, pb.mesh);
  // relax the near-singular guard: polishing the root of 1/T11 requires
  // amplitude evaluations arbitrarily close to the pole
  const auto inv_T11 = [&](cplx E) {
    return 1.0 / solve_half_offshell(*job.model, job.channels, E, pb.mesh, 1e300).T(0, 0);
  };
  const MullerResult amp =
      muller(inv_T11, E_det + cplx(0.3, 0.1), E_det + cplx(-0.2, 0.3), E_det + cplx(0.1, -0.3),
             1e-10, 60);
  c.expect(amp.converged, "amplitude-route pole search did not converge");
  if (amp.converged) {
    c.expect(std::abs(amp.root - E_det) <= 1e-6,
             "det-root vs amplitude-pole disagree by " + dstr(std::abs(amp.root - E_det)) +
                 " MeV > 1e-6");
  }
}

void check_tilde_identity(Check& c) {
  std::mt19937 rng(20260814u);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> nch(1, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<cplx> X(static_cast<std::size_t>(nch(rng)));
    for (cplx& x : X) x = cplx(u(rng), u(rng));
    const TildeReport t = missing_and_tilde(X);
    double s = t.Z_tilde;
    for (double xt : t.X_tilde) s += xt;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  c.expect(worst <= 1e-12, "sum X~ + Z~ deviates from 1 by " + dstr(worst));
}

struct DoubledObs {
  std::string what;
  double delta;
  double tol;
};

void check_mesh_doubling(Check& c, const std::map<std::string, StateResult>& base_a,
                         const StateResult& base_b, const StateResult& base_c,
                         const Preset& base_d_preset, const StateResult& base_d) {
  std::vector<DoubledObs> obs;

  PresetOptions oa;
  oa.mesh_n = 400;
  const auto doubled_a = by_id(run_preset(make_preset("model-a", oa)));
  for (const auto& [label, r] : base_a) {
    obs.push_back({"model-a " + label + " B_E", std::abs(doubled_a.at(label).row.B_E - r.row.B_E),
                   0.1});
  }

  PresetOptions ob;
  ob.mesh_n = 400;
  const StateResult doubled_b = run_preset(make_preset("model-b", ob)).at(0);
  obs.push_back({"model-b Re E", std::abs(doubled_b.row.E_pole.real() - base_b.row.E_pole.real()),
                 0.2});
  obs.push_back({"model-b Im E", std::abs(doubled_b.row.E_pole.imag() - base_b.row.E_pole.imag()),
                 0.2});

  PresetOptions oc;
  oc.mesh_n = 400;
  const StateResult doubled_c = run_preset(make_preset("model-c", oc)).at(0);
  obs.push_back({"model-c Re E", std::abs(doubled_c.row.E_pole.real() - base_c.row.E_pole.real()),
                 0.3});
  obs.push_back({"model-c Im E", std::abs(doubled_c.row.E_pole.imag() - base_c.row.E_pole.imag()),
                 0.3});
  for (int j = 0; j < 2; ++j) {
    const cplx d = doubled_c.row.X.at(j) - base_c.row.X.at(j);
    obs.push_back({"model-c Re X" + std::to_string(j + 1), std::abs(d.real()), 0.02});
    obs.push_back({"model-c Im X" + std::to_string(j + 1), std::abs(d.imag()), 0.02});
    obs.push_back({"model-c X~" + std::to_string(j + 1),
                   std::abs(doubled_c.row.X_tilde.at(j) - base_c.row.X_tilde.at(j)), 0.02});
  }
  obs.push_back({"model-c U", std::abs(doubled_c.row.U - base_c.row.U), 0.02});

  PresetOptions od;
  od.mesh_n = 400;
  const Preset doubled_d_preset = make_preset("model-d", od);
  const StateResult doubled_d = run_preset(doubled_d_preset).at(0);
  obs.push_back({"model-d Re E", std::abs(doubled_d.row.E_pole.real() - base_d.row.E_pole.real()),
                 0.5});
  obs.push_back({"model-d Im E", std::abs(doubled_d.row.E_pole.imag() - base_d.row.E_pole.imag()),
                 0.5});
  {
    const cplx d = doubled_d.row.X.at(0) - base_d.row.X.at(0);
    obs.push_back({"model-d Re X", std::abs(d.real()), 0.02});
    obs.push_back({"model-d Im X", std::abs(d.imag()), 0.02});
  }

  // loop-mesh doubling for the dressed-state quantities
  const DecayLoop dense_loop(base_d_preset.loop->coupling(), 600, 600.0,
                             base_d_preset.loop->phi());
  const cplx m2 = physical_mass(dense_loop);
  obs.push_back({"model-d Re m_phys", std::abs(m2.real() - base_d_preset.m_phys.real()), 0.5});
  obs.push_back({"model-d Im m_phys", std::abs(m2.imag() - base_d_preset.m_phys.imag()), 0.5});
  const cplx xd1 = decay_compositeness(*base_d_preset.loop, base_d_preset.m_phys);
  const cplx xd2 = decay_compositeness(dense_loop, m2);
  obs.push_back({"model-d Re X_d", std::abs(xd2.real() - xd1.real()), 0.02});
  obs.push_back({"model-d Im X_d", std::abs(xd2.imag() - xd1.imag()), 0.02});

  for (const DoubledObs& o : obs) {
    c.expect(o.delta <= o.tol,
             "mesh doubling moved " + o.what + " by " + dstr(o.delta) + " > " + dstr(o.tol));
  }
}

Check criterion8(const std::map<std::string, StateResult>& base_a, const StateResult& base_b,
                 const StateResult& base_c, const Preset& pb, const Preset& pd,
                 const StateResult& base_d) {
  Check c;

  // optical theorem on the real axis
  {
    const Preset pa = make_preset("model-a");
    const double thr = pa.jobs.front().channels.lowest_threshold();
    for (double dE : {10.0, 50.0, 100.0}) check_optical(c, "model-a", pa, thr + dE);

    PresetOptions oc;
    oc.x = 0.5;
    oc.theta_deg = 0.0;
    const Preset pc = make_preset("model-c", oc);
    const double thr1 = pc.jobs.front().channels[0].threshold();
    const double thr2 = pc.jobs.front().channels[1].threshold();
    check_optical(c, "model-c (one open)", pc, thr2 + 30.0);
    check_optical(c, "model-c (two open)", pc, thr1 + 50.0);

    // T-matrix symmetry: on-shell between open channels and half-off-shell
    const OnshellSolution two_open =
        onshell_real_axis(*pc.jobs.front().model, pc.jobs.front().channels, thr1 + 50.0, pc.mesh);
    const double tmax = two_open.T.cwiseAbs().maxCoeff();
    c.expect(std::abs(two_open.T(0, 1) - two_open.T(1, 0)) <= 1e-10 * tmax,
             "on-shell T12 vs T21 asymmetry exceeds 1e-10");

    PresetOptions oc20;
    oc20.x = 0.5;
    const Preset pc20 = make_preset("model-c", oc20);
    const HalfOffshellSolution half = solve_half_offshell(
        *pc20.jobs.front().model, pc20.jobs.front().channels, cplx(1420.0, -5.0), pc20.mesh);
    const double hmax = half.T.cwiseAbs().maxCoeff();
    const double asym = (half.T - half.T.transpose()).cwiseAbs().maxCoeff();
    c.expect(asym <= 1e-10 * hmax, "half-off-shell T asymmetry = " + dstr(asym / hmax) +
                                       " of max > 1e-10");
  }

  // residue rank-1 factorization quality across the shipped resonances
  c.expect(base_b.rank1_residual <= 1e-6,
           "model-b rank-1 residual = " + dstr(base_b.rank1_residual) + " > 1e-6");
  c.expect(base_c.rank1_residual <= 1e-6,
           "model-c rank-1 residual = " + dstr(base_c.rank1_residual) + " > 1e-6");
  c.expect(base_d.rank1_residual <= 1e-6,
           "model-d rank-1 residual = " + dstr(base_d.rank1_residual) + " > 1e-6");

  check_pole_routes(c, pb);
  check_born(c);
  check_mesh_doubling(c, base_a, base_b, base_c, pd, base_d);
  check_tilde_identity(c);
  return c;
}

void print_check(std::ostream& os, int num, const char* title, const Check& c, int& failures) {
  os << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << num << ": " << title << '\n';
  if (!c.ok) {
    ++failures;
    for (const std::string& s : c.issues) os << "        - " << s << '\n';
  }
  os.flush();
}

Check guarded(const std::function<Check()>& fn) {
  try {
    return fn();
  } catch (const std::exception& ex) {
    Check c;
    c.expect(false, std::string("exception: ") + ex.what());
    return c;
  }
}

}  // namespace

int run_acceptance(std::ostream& os) {
  int failures = 0;

  std::map<std::string, StateResult> base_a;
  print_check(os, 1, "four bound states of the shallow-well preset", guarded([&] {
                base_a = by_id(run_preset(make_preset("model-a")));
                return criterion1(base_a);
              }),
              failures);
  print_check(os, 2, "automatic wave-function normalization (X = 1, two routes agree)",
              guarded([&] {
                if (base_a.empty()) throw SolverError("base run unavailable");
                return criterion2(base_a);
              }),
              failures);
  print_check(os, 3, "energy-dependence sum rule along the v1 sweep (single channel)",
              guarded([] { return criterion3(); }), failures);

  Preset pb = make_preset("model-b");
  print_check(os, 4, "rotated-contour resonance, rotation independence",
              guarded([] { return criterion4(); }), failures);

  StateResult base_c;
  print_check(os, 5, "coupled-channel pole, table of compositeness measures", guarded([&] {
                base_c = run_preset(make_preset("model-c")).at(0);
                return criterion5(base_c);
              }),
              failures);
  print_check(os, 6, "energy-dependence sum rule along the v1 sweep (coupled channels)",
              guarded([] { return criterion6(); }), failures);

  Preset pd;
  StateResult base_d;
  print_check(os, 7, "dressed bare state: mass, decay compositeness, partner scattering",
              guarded([&] {
                pd = make_preset("model-d");
                base_d = run_preset(pd).at(0);
                return criterion7(pd, base_d);
              }),
              failures);

  print_check(os, 8, "property suite (unitarity, symmetry, factorization, routes, stability)",
              guarded([&] {
                if (base_a.empty() || base_c.row.X.empty() || base_d.row.X.empty()) {
                  throw SolverError("base runs unavailable");
                }
                StateResult base_b = run_preset(pb).at(0);
                return criterion8(base_a, base_b, base_c, pb, pd, base_d);
              }),
              failures);

  os << (failures == 0 ? "acceptance: all 8 criteria passed"
                       : "acceptance: " + std::to_string(8 - failures) + "/8 criteria passed")
     << '\n';
  return failures;
}

}  // namespace lswave
