#include "lswave/structure.hpp"

#include <cmath>
#include <sstream>

#include "lswave/scattering.hpp"

namespace lswave {

cplx locate_pole(const InteractionModel& model, const ChannelSet& channels, cplx E_guess,
                 const MomentumMesh& mesh, double tol, int itmax) {
  return find_eigenenergy(model, channels, E_guess, mesh, tol, itmax);
}

ResidueVector extract_residues(const InteractionModel& model, const ChannelSet& channels,
                               cplx E_pole, const MomentumMesh& mesh, double delta) {
  if (delta <= 0.0) delta = std::max(1e-3, 1e-6 * std::abs(E_pole));
  const auto T_at = [&](cplx E) { return solve_half_offshell(model, channels, E, mesh).T; };

  const auto sym_diff = [&](double d) {
    return ((T_at(E_pole + d) - T_at(E_pole - d)) * (d / 2.0)).eval();
  };
  const Eigen::MatrixXcd r1 = sym_diff(delta);
  const Eigen::MatrixXcd r2 = sym_diff(delta / 2.0);
  const Eigen::MatrixXcd r = (4.0 * r2 - r1) / 3.0;

  // rank-1 factorization r = gamma gamma^T from the largest diagonal entry
  Eigen::Index idx = 0;
  r.diagonal().cwiseAbs().maxCoeff(&idx);
  cplx gref = std::sqrt(r(idx, idx));
  if (gref.real() < 0.0) gref = -gref;
  const Eigen::VectorXcd gamma = r.col(idx) / gref;
  const double resid = (r - gamma * gamma.transpose()).norm() / r.norm();
  if (resid > 1e-6) {
    std::ostringstream msg;
    msg << "extract_residues: rank-1 factorization residual " << resid
        << " exceeds 1e-6; the pole is not simple or delta is too large";
    throw SolverError(msg.str());
  }

  ResidueVector rv;
  rv.E_pole = E_pole;
  rv.theta = mesh.theta;
  rv.factorization_residual = resid;
  const int N = static_cast<int>(channels.size());
  const int n = mesh.n;
  for (int j = 0; j < N; ++j) rv.gamma.push_back(gamma.segment(j * n, n));
  return rv;
}

RadialWaveFunction amplitude_wavefunction(const ResidueVector& residues,
                                          const ChannelSet& channels, const MomentumMesh& mesh) {
  RadialWaveFunction wf;
  wf.E = residues.E_pole;
  wf.theta = residues.theta;
  wf.tag = Normalization::amplitude_scaled;
  const cplx rot = std::exp(cplx(0.0, -residues.theta));
  for (std::size_t j = 0; j < residues.gamma.size(); ++j) {
    Eigen::VectorXcd Rj(residues.gamma[j].size());
    for (Eigen::Index i = 0; i < Rj.size(); ++i) {
      Rj[i] = residues.gamma[j][i] /
              (residues.E_pole - channels.energy(j, residues.E_pole, mesh.q[i] * rot));
    }
    wf.R.push_back(std::move(Rj));
  }
  return wf;
}

TildeReport missing_and_tilde(const std::vector<cplx>& X) {
  TildeReport rep;
  cplx sum = 0.0;
  double absum = 0.0;
  for (const cplx& x : X) {
    sum += x;
    absum += std::abs(x);
  }
  rep.Z = 1.0 - sum;
  rep.U = absum + std::abs(rep.Z) - 1.0;
  for (const cplx& x : X) rep.X_tilde.push_back(std::abs(x) / (1.0 + rep.U));
  rep.Z_tilde = std::abs(rep.Z) / (1.0 + rep.U);
  return rep;
}

cplx compositeness_dVdE(const RadialWaveFunction& wf, const InteractionModel& model,
                        const ChannelSet& channels, const MomentumMesh& mesh) {
  const int N = static_cast<int>(channels.size());
  const int n = mesh.n;
  const cplx phase3 = std::exp(cplx(0.0, -3.0 * wf.theta));

  std::vector<Eigen::VectorXcd> a(N);
  for (int j = 0; j < N; ++j) {
    a[j].resize(n);
    for (int i = 0; i < n; ++i) {
      a[j][i] = mesh.w[i] * mesh.q[i] * mesh.q[i] / (2.0 * pi * pi) * phase3 * wf.R[j][i];
    }
  }

  cplx X = 1.0;
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < N; ++l) {
      const Eigen::MatrixXcd dV = model.block_dE(j, l, wf.E, mesh.q, mesh.theta);
      if (dV.isZero(0.0)) continue;
      const Eigen::VectorXcd dVa = dV * a[l];
      X += (a[j].array() * dVa.array()).sum();  // transpose contraction, no conjugation
    }
  }
  return X;
}

CompositenessReport analyze_pole(const InteractionModel& model, const ChannelSet& channels,
                                 cplx E_guess, const MomentumMesh& mesh) {
  CompositenessReport rep;
  rep.E_pole = locate_pole(model, channels, E_guess, mesh);
  rep.theta = mesh.theta;
  const ResidueVector rv = extract_residues(model, channels, rep.E_pole, mesh);
  rep.rank1_residual = rv.factorization_residual;
  const RadialWaveFunction wf = amplitude_wavefunction(rv, channels, mesh);
  rep.X = compositeness_X(density_profile(wf, mesh), mesh);
  const TildeReport tilde = missing_and_tilde(rep.X);
  rep.Z = tilde.Z;
  rep.U = tilde.U;
  rep.X_tilde = tilde.X_tilde;
  rep.Z_tilde = tilde.Z_tilde;
  rep.X_dVdE = compositeness_dVdE(wf, model, channels, mesh);
  return rep;
}

}  // namespace lswave
