#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lswave/kinematics.hpp"
#include "lswave/potential.hpp"
#include "lswave/spectrum.hpp"

namespace lswave {

/// Pole of the scattering amplitude: zero of det(1 - K(E)). Shares the
/// determinant root-finder with the spectrum side; this entry point serves
/// amplitude-route workflows.
cplx locate_pole(const InteractionModel& model, const ChannelSet& channels, cplx E_guess,
                 const MomentumMesh& mesh, double tol = 1e-8, int itmax = 100);

/// Residue vertex functions gamma_j(q_i e^{-i theta}) of a simple amplitude
/// pole: T ~ gamma gamma^T / (E - E_pole) near the pole.
struct ResidueVector {
  std::vector<Eigen::VectorXcd> gamma;  // per channel
  cplx E_pole{};
  double theta = 0.0;
  double factorization_residual = 0.0;  // ||r - gamma gamma^T|| / ||r||
};

/// Extracts the residue matrix by the symmetric difference estimator
/// r = [T(E+delta) - T(E-delta)] delta/2, Richardson-extrapolated over delta
/// and delta/2, then factorizes it rank-1. delta defaults to
/// max(1e-3 MeV, 1e-6 |E_pole|). Throws SolverError when the factorization
/// residual exceeds 1e-6 (pole not simple, or delta too large).
ResidueVector extract_residues(const InteractionModel& model, const ChannelSet& channels,
                               cplx E_pole, const MomentumMesh& mesh, double delta = 0.0);

/// Wave function carried by the pole residue: R_j(q) = gamma_j(q)/(E_pole - E_j(q)).
/// No rescaling is applied; the residue normalization is the physical one.
RadialWaveFunction amplitude_wavefunction(const ResidueVector& residues,
                                          const ChannelSet& channels, const MomentumMesh& mesh);

/// Missing-channel fraction and the probabilistic reinterpretation:
/// Z = 1 - sum X_j, U = sum|X_j| + |Z| - 1, X~_j = |X_j|/(1+U), Z~ = |Z|/(1+U).
struct TildeReport {
  cplx Z{};
  double U = 0.0;
  std::vector<double> X_tilde;
  double Z_tilde = 0.0;
};

TildeReport missing_and_tilde(const std::vector<cplx>& X);

/// Norm of the total wave function including the induced missing-channel
/// piece: X = 1 + e^{-6 i theta} sum_jk a_j^T (dV_jk/dE) a_k with
/// a_j(i) = w_i q_i^2/(2 pi^2) e^{-3 i theta} R_j(q_i). Equals sum_j X_j for
/// the energy-dependent interactions of this family.
cplx compositeness_dVdE(const RadialWaveFunction& wf, const InteractionModel& model,
                        const ChannelSet& channels, const MomentumMesh& mesh);

/// One state's complete structure analysis.
struct CompositenessReport {
  cplx E_pole{};
  double theta = 0.0;
  std::vector<cplx> X;
  cplx Z{};
  double U = 0.0;
  std::vector<double> X_tilde;
  double Z_tilde = 0.0;
  cplx X_dVdE{};
  double rank1_residual = 0.0;
};

/// Full amplitude-route pipeline: locate the pole from the guess, extract
/// residues, integrate the density, and run the dV/dE cross-check.
CompositenessReport analyze_pole(const InteractionModel& model, const ChannelSet& channels,
                                 cplx E_guess, const MomentumMesh& mesh);

}  // namespace lswave
