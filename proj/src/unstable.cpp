#include "lswave/unstable.hpp"

#include <array>
#include <cmath>

#include "lswave/structure.hpp"

namespace lswave {

DecayLoop::DecayLoop(BareCoupling bc, int n, double scale, double phi)
    : bc_(bc), phi_(phi), mesh_(tangent_mapped_mesh(n, scale, 0.0)) {
  const cplx rot = std::exp(cplx(0.0, -phi_));
  const cplx phase3 = std::exp(cplx(0.0, -3.0 * phi_));
  kc_.resize(n);
  mfac_.resize(n);
  f2_.resize(n);
  Ed_.resize(n);
  for (int i = 0; i < n; ++i) {
    kc_[i] = mesh_.q[i] * rot;
    mfac_[i] = mesh_.w[i] * mesh_.q[i] * mesh_.q[i] * phase3 / (2.0 * pi * pi);
    const cplx f = bc_.formfactor(kc_[i]);
    f2_[i] = f * f;
    Ed_[i] = 2.0 * std::sqrt(kc_[i] * kc_[i] + bc_.m_d * bc_.m_d);
  }
}

cplx DecayLoop::gtilde(cplx E) const {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < kc_.size(); ++i) sum += mfac_[i] * f2_[i] / (E - Ed_[i]);
  return sum;
}

cplx DecayLoop::gtilde_prime(cplx E) const {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < kc_.size(); ++i) {
    const cplx den = E - Ed_[i];
    sum -= mfac_[i] * f2_[i] / (den * den);
  }
  return sum;
}

cplx DecayLoop::self_energy(cplx E3, cplx q, double M) const {
  const cplx om_bare = std::sqrt(q * q + bc_.m_bare * bc_.m_bare);
  const cplx om_partner = std::sqrt(q * q + M * M);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < kc_.size(); ++i) {
    const cplx w3 = std::sqrt(Ed_[i] * Ed_[i] + q * q);
    sum += mfac_[i] * (Ed_[i] / w3) * f2_[i] / (E3 - om_partner - w3);
  }
  return (bc_.m_bare / om_bare) * sum;
}

cplx physical_mass(const DecayLoop& loop) {
  const BareCoupling& bc = loop.coupling();
  // The dressing is a contraction as long as |G~'| < 1, so plain fixed-point
  // iteration walks from the bare mass into the lower half plane (or down the
  // real axis when the decay channel is closed).  A Muller polish sharpens the
  // result to the requested tolerance.
  cplx m = bc.m_bare;
  for (int it = 0; it < 200; ++it) {
    const cplx next = bc.m_bare + loop.gtilde(m);
    const double step = std::abs(next - m);
    m = next;
    if (step < 1e-12 * (1.0 + std::abs(m))) break;
  }
  const auto f = [&](cplx mm) { return mm - bc.m_bare - loop.gtilde(mm); };
  const MullerResult res = muller(f, m, m + 0.5, m - cplx(0.0, 0.5), 1e-10, 100);
  if (res.converged) m = res.root;
  if (std::abs(f(m)) > 1e-8) {
    throw SolverError("physical_mass: dressed-mass residual exceeds 1e-8 MeV");
  }
  return m;
}

cplx decay_compositeness(const DecayLoop& loop, cplx m_phys) {
  const cplx gp = loop.gtilde_prime(m_phys);
  return -gp / (1.0 - gp);
}

cplx decay_compositeness_residue(const DecayLoop& loop, cplx m_phys) {
  const BareCoupling& bc = loop.coupling();
  const SeparableBare model(bc.alpha, bc.lambda_cut, bc.m_bare);
  ChannelSet channels({Channel{bc.m_d, bc.m_d, Dispersion::semirelativistic}});
  MomentumMesh mesh = loop.mesh();
  mesh.theta = loop.phi();
  const cplx pole = locate_pole(model, channels, m_phys, mesh);
  const ResidueVector rv = extract_residues(model, channels, pole, mesh);
  const RadialWaveFunction wf = amplitude_wavefunction(rv, channels, mesh);
  return compositeness_X(density_profile(wf, mesh), mesh)[0];
}

ChannelSet dressed_channel_set(std::shared_ptr<const DecayLoop> loop, double M_partner,
                               bool q_independent) {
  const double m_bare = loop->coupling().m_bare;
  ChannelSet set({Channel{m_bare, M_partner, Dispersion::semirelativistic}});

  using Key = std::array<double, 4>;
  struct Cache {
    std::mutex mtx;
    std::map<Key, cplx> values;
  };
  auto cache = std::make_shared<Cache>();

  set.energy_override.push_back([loop, M_partner, q_independent, cache, m_bare](cplx E3, cplx q) {
    const cplx q_sigma = q_independent ? cplx(0.0) : q;
    const Key key{E3.real(), E3.imag(), q_sigma.real(), q_sigma.imag()};
    cplx sigma;
    {
      std::lock_guard<std::mutex> lock(cache->mtx);
      auto it = cache->values.find(key);
      if (it != cache->values.end()) {
        sigma = it->second;
      } else {
        sigma = loop->self_energy(E3, q_sigma, M_partner);
        cache->values.emplace(key, sigma);
      }
    }
    return std::sqrt(q * q + m_bare * m_bare) + sigma +
           std::sqrt(q * q + M_partner * M_partner);
  });
  return set;
}

}  // namespace lswave
