#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "lswave/kinematics.hpp"
#include "lswave/numerics.hpp"
#include "lswave/potential.hpp"

namespace lswave {

/// Coupling of a bare discrete state of mass m_bare to a pair of decay
/// particles of mass m_d each, with form factor f(q) = alpha lambda^2/(q^2+lambda^2).
struct BareCoupling {
  double alpha = 0.0;       // MeV^{-1/2}
  double lambda_cut = 0.0;  // MeV
  double m_bare = 0.0;      // MeV
  double m_d = 0.0;         // MeV

  bool decay_open() const { return 2.0 * m_d < m_bare; }
  cplx formfactor(cplx q) const {
    return alpha * lambda_cut * lambda_cut / (q * q + lambda_cut * lambda_cut);
  }
};

/// Loop integrals over the decay channel, analytically continued to the lower
/// half-plane by the rotated momentum contour k -> k e^{-i phi}:
///   gtilde(E) = Integral d^3k/(2 pi)^3 f(k)^2 / (E - E_d(k)),
///   E_d(k) = 2 sqrt(k^2 + m_d^2).
class DecayLoop {
 public:
  explicit DecayLoop(BareCoupling bc, int n = 300, double scale = 600.0,
                     double phi = deg2rad(20.0));

  cplx gtilde(cplx E) const;
  cplx gtilde_prime(cplx E) const;

  /// Self-energy of the bare particle moving with momentum q inside a
  /// two-body system of total energy E3 with a partner of mass M:
  ///   Sigma(E3; q) = [m_bare/sqrt(q^2+m_bare^2)]
  ///     * Integral d^3k/(2 pi)^3 [E_d(k)/sqrt(E_d(k)^2+q^2)]
  ///       * f(k)^2 / (E3 - sqrt(q^2+M^2) - sqrt(E_d(k)^2+q^2)).
  cplx self_energy(cplx E3, cplx q, double M) const;

  const BareCoupling& coupling() const { return bc_; }
  double phi() const { return phi_; }
  const MomentumMesh& mesh() const { return mesh_; }

 private:
  BareCoupling bc_;
  double phi_;
  MomentumMesh mesh_;
  std::vector<cplx> kc_;    // rotated nodes
  std::vector<cplx> mfac_;  // w k^2 e^{-3 i phi} / (2 pi^2)
  std::vector<cplx> f2_;    // f(k e^{-i phi})^2
  std::vector<cplx> Ed_;    // E_d(k e^{-i phi})
};

/// Physical (complex) mass of the dressed state: fixed point of
/// m = m_bare + gtilde(m), found by Muller iteration; |residual| < 1e-8 MeV.
cplx physical_mass(const DecayLoop& loop);

/// Decay-channel compositeness from the dressed propagator:
/// X_d = -gtilde'(m_phys) / (1 - gtilde'(m_phys)).
cplx decay_compositeness(const DecayLoop& loop, cplx m_phys);

/// Same quantity from the generic residue pipeline applied to the separable
/// decay-channel amplitude with interaction f(q') f(q)/(E - m_bare).
cplx decay_compositeness_residue(const DecayLoop& loop, cplx m_phys);

/// Channel set describing the dressed particle A (bare mass + self-energy)
/// paired with a spectator of mass M_partner:
///   E_Sigma(E3; q) = sqrt(q^2 + m_bare^2) + Sigma(E3; q) + sqrt(q^2 + M^2).
/// When q_independent is set, Sigma(E3; q) is frozen at its q = 0 value.
/// Sigma values are cached per (E3, q). The loop object must outlive the set.
ChannelSet dressed_channel_set(std::shared_ptr<const DecayLoop> loop, double M_partner,
                               bool q_independent = false);

}  // namespace lswave
