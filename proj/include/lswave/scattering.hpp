#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lswave/kinematics.hpp"
#include "lswave/numerics.hpp"
#include "lswave/potential.hpp"

namespace lswave {

/// Interaction matrix V over the (channel x mesh-node) index space at the
/// rotated momenta q_i e^{-i theta}.
Eigen::MatrixXcd potential_matrix(const InteractionModel& model, const ChannelSet& channels,
                                  cplx E, const MomentumMesh& mesh);

/// Analytic energy derivative of potential_matrix.
Eigen::MatrixXcd potential_matrix_dE(const InteractionModel& model, const ChannelSet& channels,
                                     cplx E, const MomentumMesh& mesh);

/// (1 - K) over the (channel x mesh-node) index space with
///   K_{(j a),(l b)} = w_b q_b^2 e^{-3 i theta} / (2 pi^2)
///                     * V_jl(E; q_a e^{-i theta}, q_b e^{-i theta})
///                     / (E - E_l(q_b e^{-i theta})).
/// Throws if a mesh node sits (numerically) on a kernel-denominator zero;
/// move the mesh or change theta in that case.
Eigen::MatrixXcd build_kernel(const InteractionModel& model, const ChannelSet& channels,
                              cplx E, const MomentumMesh& mesh);

struct HalfOffshellSolution {
  Eigen::MatrixXcd T;  // (channel x node) square matrix of T(E; q_a e^{-i th}, q_b e^{-i th})
  cplx E;
  double theta = 0.0;
  double residual = 0.0;        // ||(1-K)T - V|| / ||V||
  double condition_est = 0.0;   // 1-norm condition estimate of (1-K)
};

/// Solves (1 - K) T = V by dense LU with partial pivoting. Throws SolverError
/// when the system is within roundoff of a pole (condition estimate above
/// cond_limit) or when the solve residual exceeds 1e-10 ||V||. Root polishing
/// that must evaluate 1/T arbitrarily close to a pole may relax cond_limit;
/// LU with partial pivoting stays backward stable there, so the computed
/// amplitude is that of a nearby problem even when the forward error blows up.
HalfOffshellSolution solve_half_offshell(const InteractionModel& model,
                                         const ChannelSet& channels, cplx E,
                                         const MomentumMesh& mesh, double cond_limit = 1e14);

struct OnshellSolution {
  std::vector<int> open;     // indices of channels open at E
  std::vector<double> k;     // on-shell momenta, one per open channel
  std::vector<double> rho;   // two-body phase space k^2/(pi dE/dk), per open channel
  Eigen::MatrixXcd T;        // on-shell amplitudes between open channels
};

/// Real-axis on-shell amplitudes at theta = 0. The open-channel singularity
/// is handled by principal-value pole subtraction over the mesh plus the
/// analytic i pi rho/2 piece, with the on-shell momenta appended to the mesh
/// as extra nodes.
OnshellSolution onshell_real_axis(const InteractionModel& model, const ChannelSet& channels,
                                  double E, const MomentumMesh& mesh);

/// max over open channels j of |Im T_jj + sum_k rho_k |T_jk|^2 / 2|,
/// normalized by sum |T|^2. Zero for an exactly unitary solution.
double optical_residual(const OnshellSolution& sol);

/// Unitary S-matrix S_ab = delta_ab - i sqrt(rho_a rho_b) T_ab.
Eigen::MatrixXcd smatrix(const OnshellSolution& sol);

}  // namespace lswave
