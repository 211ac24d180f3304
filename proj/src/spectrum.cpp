#include "lswave/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lswave/scattering.hpp"

namespace lswave {

DeterminantFunction::DeterminantFunction(const InteractionModel& model,
                                         const ChannelSet& channels, MomentumMesh mesh)
    : model_(&model), channels_(&channels), mesh_(std::move(mesh)) {}

cplx DeterminantFunction::raw_scaled(cplx E) const {
  const Eigen::MatrixXcd A = build_kernel(*model_, *channels_, E, mesh_);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const auto& diag = lu.matrixLU().diagonal();
  double logabs = 0.0;
  double arg = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    logabs += std::log(std::abs(diag[i]));
    arg += std::arg(diag[i]);
  }
  if (!lognorm_) lognorm_ = logabs;
  const double perm_sign = lu.permutationP().determinant();  // +1 or -1
  return perm_sign * std::exp(cplx(logabs - *lognorm_, arg));
}

void DeterminantFunction::set_reference(cplx E_ref) const {
  lognorm_.reset();
  ref_value_ = cplx(1.0, 0.0);
  ref_value_ = raw_scaled(E_ref);
}

cplx DeterminantFunction::operator()(cplx E) const { return raw_scaled(E) / ref_value_; }

cplx find_eigenenergy(const InteractionModel& model, const ChannelSet& channels,
                      cplx E_guess, const MomentumMesh& mesh, double tol, int itmax) {
  DeterminantFunction det(model, channels, mesh);
  const MullerResult res = muller([&](cplx E) { return det(E); }, E_guess, E_guess + 0.5,
                                  E_guess - cplx(0.0, 0.5), tol, itmax);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "find_eigenenergy: Muller iteration did not converge within " << itmax
        << " iterations from guess " << E_guess.real() << (E_guess.imag() < 0 ? " - " : " + ")
        << std::abs(E_guess.imag()) << "i MeV";
    throw SolverError(msg.str());
  }
  if (mesh.theta > 0.0) {
    for (std::size_t j = 0; j < channels.size(); ++j) {
      if (channels.has_override(j)) continue;
      const cplx z = res.root - channels[j].threshold();
      const cplx zr = z * std::exp(cplx(0.0, 2.0 * mesh.theta));
      if (zr.real() > 0.0 && std::abs(zr.imag()) < 1e-8 * std::abs(z)) {
        throw SolverError("find_eigenenergy: root drifted onto the rotated continuum line");
      }
    }
  }
  return res.root;
}

std::vector<double> scan_bound_states(const InteractionModel& model, const ChannelSet& channels,
                                      const MomentumMesh& mesh, double Emin, double Emax,
                                      int npts) {
  DeterminantFunction det(model, channels, mesh);
  det.set_reference(cplx(Emin));
  std::vector<double> Es(npts), vals(npts);
  for (int i = 0; i < npts; ++i) {
    Es[i] = Emin + (Emax - Emin) * i / (npts - 1);
    vals[i] = det(cplx(Es[i])).real();
  }
  std::vector<double> roots;
  for (int i = 0; i + 1 < npts; ++i) {
    if (vals[i] == 0.0) {
      roots.push_back(Es[i]);
      continue;
    }
    if (vals[i] * vals[i + 1] < 0.0) {
      const MullerResult res =
          muller([&](cplx E) { return det(E); }, cplx(Es[i]), cplx(0.5 * (Es[i] + Es[i + 1])),
                 cplx(Es[i + 1]), 1e-8, 100);
      if (res.converged && res.root.real() >= Emin && res.root.real() <= Emax) {
        roots.push_back(res.root.real());
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-6; }),
              roots.end());
  return roots;
}

DensityProfile density_profile(const RadialWaveFunction& wf, const MomentumMesh& mesh) {
  DensityProfile prof;
  const cplx phase3 = std::exp(cplx(0.0, -3.0 * wf.theta));
  for (const auto& Rj : wf.R) {
    Eigen::VectorXcd Pj(Rj.size());
    for (Eigen::Index i = 0; i < Rj.size(); ++i) {
      Pj[i] = phase3 * mesh.q[i] * mesh.q[i] / (2.0 * pi * pi) * Rj[i] * Rj[i];
    }
    prof.P.push_back(std::move(Pj));
  }
  return prof;
}

std::vector<cplx> compositeness_X(const DensityProfile& profile, const MomentumMesh& mesh) {
  std::vector<cplx> X;
  for (const auto& Pj : profile.P) {
    cplx sum = 0.0;
    for (Eigen::Index i = 0; i < Pj.size(); ++i) sum += mesh.w[i] * Pj[i];
    X.push_back(sum);
  }
  return X;
}

RadialWaveFunction radial_wavefunction_normalized(const InteractionModel& model,
                                                  const ChannelSet& channels, cplx E_pole,
                                                  const MomentumMesh& mesh) {
  const int N = static_cast<int>(channels.size());
  const int n = mesh.n;
  const Eigen::MatrixXcd A = build_kernel(model, channels, E_pole, mesh);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);

  const auto iterate = [&](Eigen::VectorXcd x) {
    for (int it = 0; it < 30; ++it) {
      x = lu.solve(x);
      x /= x.norm();
    }
    return x;
  };

  Eigen::VectorXcd u = iterate(Eigen::VectorXcd::Ones(N * n));
  const double anorm = A.norm();
  const double res = (A * u).norm() / anorm;
  if (res > 1e-8) {
    std::ostringstream msg;
    msg << "radial_wavefunction_normalized: no null vector at E (relative residual " << res
        << "); E is not a converged discrete eigenenergy";
    throw SolverError(msg.str());
  }
  // a second start vector, orthogonalized against u, must NOT also be a null
  // vector if the root is simple
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N * n);
  for (int i = 0; i < N * n; ++i) v[i] = ((i % 3) - 1.0) + 0.5 * std::cos(0.7 * i);
  v = iterate(v);
  Eigen::VectorXcd vperp = v - u * (u.adjoint() * v)(0);
  if (vperp.norm() > 1e-8) {
    vperp /= vperp.norm();
    if ((A * vperp).norm() / anorm < 1e-10) {
      throw SolverError("radial_wavefunction_normalized: null space dimension exceeds 1 (degenerate root)");
    }
  }

  // the null vector of (1-K) is the vertex gamma; R = gamma / (E - E_ch)
  RadialWaveFunction wf;
  wf.E = E_pole;
  wf.theta = mesh.theta;
  wf.tag = Normalization::by_hand;
  const cplx rot = std::exp(cplx(0.0, -mesh.theta));
  for (int j = 0; j < N; ++j) {
    Eigen::VectorXcd Rj(n);
    for (int i = 0; i < n; ++i) {
      Rj[i] = u[j * n + i] / (E_pole - channels.energy(j, E_pole, mesh.q[i] * rot));
    }
    wf.R.push_back(std::move(Rj));
  }

  // scale so that sum_j X_j = 1 exactly
  const std::vector<cplx> Xraw = compositeness_X(density_profile(wf, mesh), mesh);
  cplx sum = 0.0;
  for (const cplx& x : Xraw) sum += x;
  const cplx scale = 1.0 / std::sqrt(sum);
  for (auto& Rj : wf.R) Rj *= scale;

  // phase convention: Re R_1(q_peak) > 0
  Eigen::Index peak = 0;
  wf.R[0].cwiseAbs().maxCoeff(&peak);
  if (wf.R[0][peak].real() < 0.0) {
    for (auto& Rj : wf.R) Rj = -Rj;
  }
  return wf;
}

}  // namespace lswave
