#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lswave/kinematics.hpp"
#include "lswave/numerics.hpp"
#include "lswave/potential.hpp"

namespace lswave {

/// Normalized Fredholm determinant det(1 - K(E)). The first evaluation (or an
/// explicit set_reference call) pins a real log-scale normalizer and a complex
/// reference value, so that the returned values stay O(1) and equal exactly 1
/// at the reference energy. Zeros coincide with discrete eigenenergies and
/// amplitude poles.
class DeterminantFunction {
 public:
  DeterminantFunction(const InteractionModel& model, const ChannelSet& channels,
                      MomentumMesh mesh);

  cplx operator()(cplx E) const;
  void set_reference(cplx E_ref) const;

  const MomentumMesh& mesh() const { return mesh_; }

 private:
  cplx raw_scaled(cplx E) const;  // det scaled by exp(-lognorm), continuous in E

  const InteractionModel* model_;
  const ChannelSet* channels_;
  MomentumMesh mesh_;
  mutable std::optional<double> lognorm_;  // real normalizer
  mutable cplx ref_value_{1.0, 0.0};       // raw_scaled at the reference energy
};

/// Root of det(1 - K(E)) by Muller iteration from a single guess;
/// |Delta E| < tol (default 1e-8 MeV) within itmax iterations or SolverError.
/// Also rejects roots that land on the rotated continuum line of a channel.
cplx find_eigenenergy(const InteractionModel& model, const ChannelSet& channels,
                      cplx E_guess, const MomentumMesh& mesh, double tol = 1e-8,
                      int itmax = 100);

/// Real-axis bound states: sign scan of the determinant over [Emin, Emax]
/// followed by Muller polishing of each bracket. Returns increasing energies.
std::vector<double> scan_bound_states(const InteractionModel& model,
                                      const ChannelSet& channels, const MomentumMesh& mesh,
                                      double Emin, double Emax, int npts = 121);

enum class Normalization { by_hand, amplitude_scaled };

/// Momentum-space radial wave function samples R_j(q_i e^{-i theta}) of one
/// discrete state.
struct RadialWaveFunction {
  std::vector<Eigen::VectorXcd> R;  // per channel
  cplx E{};
  double theta = 0.0;
  Normalization tag = Normalization::by_hand;
};

/// Channel density distributions P_j(q_i) = e^{-3 i theta} q_i^2/(2 pi^2)
/// R_j(q_i e^{-i theta})^2; weighted sums give the channel compositeness.
struct DensityProfile {
  std::vector<Eigen::VectorXcd> P;
};

DensityProfile density_profile(const RadialWaveFunction& wf, const MomentumMesh& mesh);

/// Channel compositeness X_j = sum_i w_i P_j(q_i).
std::vector<cplx> compositeness_X(const DensityProfile& profile, const MomentumMesh& mesh);

/// Null vector of (1 - K(E_pole)) by inverse iteration, returned as a radial
/// wave function scaled BY HAND so that sum_j X_j = 1 exactly, with the phase
/// fixed by Re R_1(q_peak) > 0. Throws SolverError when the null space at
/// E_pole is empty (not an eigenenergy) or two-dimensional (degenerate root).
RadialWaveFunction radial_wavefunction_normalized(const InteractionModel& model,
                                                  const ChannelSet& channels, cplx E_pole,
                                                  const MomentumMesh& mesh);

}  // namespace lswave
