#include "lswave/kinematics.hpp"

#include <cmath>
#include <limits>

namespace lswave {

double kallen(double x, double y, double z) {
  return x * x + y * y + z * z - 2.0 * (x * y + y * z + z * x);
}

cplx kallen(cplx x, cplx y, cplx z) {
  return x * x + y * y + z * z - 2.0 * (x * y + y * z + z * x);
}

cplx Channel::energy(cplx p) const {
  if (mode == Dispersion::nonrelativistic) {
    return m1 + m2 + p * p / (2.0 * reduced_mass());
  }
  return std::sqrt(p * p + m1 * m1) + std::sqrt(p * p + m2 * m2);
}

cplx Channel::denergy(cplx p) const {
  if (mode == Dispersion::nonrelativistic) {
    return p / reduced_mass();
  }
  return p / std::sqrt(p * p + m1 * m1) + p / std::sqrt(p * p + m2 * m2);
}

cplx Channel::onshell_momentum(cplx E) const {
  if (mode == Dispersion::nonrelativistic) {
    return std::sqrt(2.0 * reduced_mass() * (E - threshold()));
  }
  return std::sqrt(kallen(E * E, cplx(m1 * m1), cplx(m2 * m2))) / (2.0 * E);
}

double Channel::rho(double E) const {
  if (E <= threshold()) {
    throw std::domain_error("Channel::rho: energy below threshold");
  }
  const double k = onshell_momentum(cplx(E)).real();
  const double dEdk = denergy(cplx(k)).real();
  return k * k / (pi * dEdk);
}

double Channel::mu_eff(double k0) const {
  const double dEdk = denergy(cplx(k0)).real();
  return k0 / dEdk;
}

double ChannelSet::lowest_threshold() const {
  double thr = std::numeric_limits<double>::max();
  for (const auto& c : channels) thr = std::min(thr, c.threshold());
  return thr;
}

}  // namespace lswave
