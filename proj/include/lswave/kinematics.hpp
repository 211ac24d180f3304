#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "lswave/constants.hpp"

namespace lswave {

/// Kaellen triangle function lambda(x,y,z) = x^2+y^2+z^2-2xy-2yz-2zx.
double kallen(double x, double y, double z);
cplx kallen(cplx x, cplx y, cplx z);

enum class Dispersion { nonrelativistic, semirelativistic };

/// One two-body channel: masses of the pair and the dispersion law used for
/// the off-shell two-body energy E(p).
struct Channel {
  double m1 = 0.0;  // MeV
  double m2 = 0.0;  // MeV
  Dispersion mode = Dispersion::semirelativistic;

  double threshold() const { return m1 + m2; }
  double reduced_mass() const { return m1 * m2 / (m1 + m2); }

  /// Two-body energy at relative momentum p (analytic in p, complex allowed).
  cplx energy(cplx p) const;
  /// dE/dp at relative momentum p.
  cplx denergy(cplx p) const;

  /// On-shell relative momentum k(E) on the principal branch:
  /// nonrelativistic k = sqrt(2 mu (E - threshold)),
  /// semirelativistic k = sqrt(kallen(E^2, m1^2, m2^2))/(2E).
  cplx onshell_momentum(cplx E) const;

  /// Two-body phase space rho(E) = k^2 / (pi dE/dk) at the on-shell point,
  /// i.e. mu k / pi (NR) or omega_1 omega_2 k / (pi E) (SR). Real E above
  /// threshold.
  double rho(double E) const;

  /// Effective mass k0 / (dE/dk at k0), the slope inverse used by the
  /// principal-value subtraction on the real axis.
  double mu_eff(double k0) const;
};

/// A set of coupled channels, optionally with a per-channel override of the
/// two-body energy. The override receives the total energy E as well as the
/// (complex) relative momentum and replaces Channel::energy(q); it is the hook
/// by which a self-energy-dressed constituent modifies the kinematics.
struct ChannelSet {
  std::vector<Channel> channels;
  std::vector<std::function<cplx(cplx E, cplx q)>> energy_override;  // empty or per channel

  ChannelSet() = default;
  explicit ChannelSet(std::vector<Channel> ch) : channels(std::move(ch)) {}

  std::size_t size() const { return channels.size(); }
  const Channel& operator[](std::size_t j) const { return channels[j]; }

  bool has_override(std::size_t j) const {
    return j < energy_override.size() && energy_override[j] != nullptr;
  }

  /// Channel-j two-body energy entering kernel denominators: the override if
  /// present, the plain dispersion law otherwise.
  cplx energy(std::size_t j, cplx E, cplx q) const {
    if (has_override(j)) return energy_override[j](E, q);
    return channels[j].energy(q);
  }

  double lowest_threshold() const;
};

}  // namespace lswave
