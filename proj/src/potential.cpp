#include "lswave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lswave {

namespace {

// Real-argument spherical Bessel j_L, the hot path of the radial projection.
double sph_bessel_real(int L, double x) {
  if (x < 1e-3) {
    double dfact = 1.0;
    for (int k = 1; k <= 2 * L + 1; k += 2) dfact *= k;
    double xL = 1.0;
    for (int k = 0; k < L; ++k) xL *= x;
    const double x2 = x * x;
    return xL / dfact * (1.0 - x2 / (2.0 * (2.0 * L + 3.0)) + x2 * x2 / (8.0 * (2.0 * L + 3.0) * (2.0 * L + 5.0)));
  }
  const double j0 = std::sin(x) / x;
  if (L == 0) return j0;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  if (L == 1) return j1;
  if (x >= L) {
    double jm = j0, jc = j1;
    for (int l = 1; l < L; ++l) {
      const double jn = (2.0 * l + 1.0) / x * jc - jm;
      jm = jc;
      jc = jn;
    }
    return jc;
  }
  const int lstart = L + 15 + static_cast<int>(x);
  double jp = 0.0, jc = 1e-30, target = 0.0;
  for (int l = lstart; l >= 1; --l) {
    const double jm = (2.0 * l + 1.0) / x * jc - jp;
    jp = jc;
    jc = jm;
    if (l - 1 == L) target = jc;
  }
  return target * (j0 / jc);
}

// Panel count for a given Bessel phase across [0, rmax]; -1 = beyond cap.
int panels_for_phase(double phase, const ProjectionOptions& opt) {
  int m = opt.m_min;
  while (m < opt.m_max && phase > opt.phase_per_panel * m) m *= 2;
  return (phase <= opt.phase_per_panel * m) ? m : -1;
}

}  // namespace

Eigen::MatrixXcd project_local(int L, const std::vector<double>& q, double theta,
                               const std::function<cplx(cplx)>& profile_fm,
                               double rmax_fm, const ProjectionOptions& opt) {
  const int n = static_cast<int>(q.size());
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, n);
  if (n == 0) return V;

  // work in ascending momentum order so that the panel level of an element
  // (a, b) is the one demanded by max(q_a, q_b)
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return q[a] < q[b]; });

  std::vector<int> level(n);
  for (int pos = 0; pos < n; ++pos) {
    const double phase = 2.0 * q[order[pos]] * rmax_fm / hbarc;
    level[pos] = panels_for_phase(phase, opt);
  }

  const cplx pref = 4.0 * pi * std::exp(cplx(0.0, 3.0 * theta)) / (hbarc * hbarc * hbarc);
  const cplx rot = std::exp(cplx(0.0, theta));

  std::vector<int> levels_present;
  for (int pos = 0; pos < n; ++pos) {
    if (level[pos] > 0 && (levels_present.empty() || levels_present.back() != level[pos])) {
      levels_present.push_back(level[pos]);
    }
  }
  levels_present.erase(std::unique(levels_present.begin(), levels_present.end()),
                       levels_present.end());

  for (const int m : levels_present) {
    std::vector<int> cols;  // sorted positions at this level
    for (int pos = 0; pos < n; ++pos) {
      if (level[pos] == m) cols.push_back(pos);
    }
    const int cmax = cols.back();
    const Quadrature grid = composite_panels(m, 0.0, rmax_fm);
    const int nodes = static_cast<int>(grid.size());

    Eigen::VectorXd gre(nodes), gim(nodes);
    for (int k = 0; k < nodes; ++k) {
      const double r = grid.x[k];
      const cplx g = grid.w[k] * r * r * profile_fm(r * rot);
      gre[k] = g.real();
      gim[k] = g.imag();
    }

    Eigen::MatrixXd J(static_cast<int>(cols.size()), nodes);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double qc = q[order[cols[c]]];
      for (int k = 0; k < nodes; ++k) J(c, k) = sph_bessel_real(L, qc * grid.x[k] / hbarc);
    }

    Eigen::VectorXd jr(nodes);
    for (int row = 0; row <= cmax; ++row) {
      const double qr = q[order[row]];
      for (int k = 0; k < nodes; ++k) jr[k] = sph_bessel_real(L, qr * grid.x[k] / hbarc);
      const Eigen::VectorXd vre = J * gre.cwiseProduct(jr);
      const Eigen::VectorXd vim = J * gim.cwiseProduct(jr);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c] < row) continue;
        const cplx val = pref * cplx(vre[c], vim[c]);
        V(order[row], order[cols[c]]) = val;
        V(order[cols[c]], order[row]) = val;
      }
    }
  }
  return V;
}

cplx project_local_pair(int L, cplx pprime, cplx p, double theta,
                        const std::function<cplx(cplx)>& profile_fm,
                        double rmax_fm, const ProjectionOptions& opt) {
  const double phase = (std::abs(pprime) + std::abs(p)) * rmax_fm / hbarc;
  const int m = panels_for_phase(phase, opt);
  if (m < 0) return 0.0;
  const Quadrature grid = composite_panels(m, 0.0, rmax_fm);
  const cplx rot = std::exp(cplx(0.0, theta));
  cplx sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double r = grid.x[k];
    const cplx rc = r * rot;
    sum += grid.w[k] * r * r * profile_fm(rc) * sph_bessel_j(L, pprime * rc / hbarc) *
           sph_bessel_j(L, p * rc / hbarc);
  }
  return 4.0 * pi * std::exp(cplx(0.0, 3.0 * theta)) / (hbarc * hbarc * hbarc) * sum;
}

LocalPotential::LocalPotential(int L, Eigen::MatrixXd coupling, EnergyLaw law,
                               std::function<cplx(cplx)> profile_fm, double rmax_fm,
                               double theta_ceiling, ProjectionOptions opt)
    : L_(L),
      coupling_(std::move(coupling)),
      law_(law),
      profile_(std::move(profile_fm)),
      rmax_(rmax_fm),
      theta_ceiling_(theta_ceiling),
      opt_(opt) {
  if (coupling_.rows() != coupling_.cols()) {
    throw std::invalid_argument("LocalPotential: coupling matrix must be square");
  }
}

void LocalPotential::check_theta(double theta) const {
  if (theta < 0.0 || theta >= theta_ceiling_) {
    throw std::domain_error("LocalPotential: rotation angle outside the interaction's analyticity sector");
  }
}

const Eigen::MatrixXcd& LocalPotential::shape(const std::vector<double>& q, double theta) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  const auto key = std::make_pair(theta, q);
  auto it = shape_cache_.find(key);
  if (it == shape_cache_.end()) {
    it = shape_cache_.emplace(key, project_local(L_, q, theta, profile_, rmax_, opt_)).first;
  }
  return it->second;
}

cplx LocalPotential::element(int j, int l, cplx E, cplx pprime, cplx p, double theta) const {
  check_theta(theta);
  return law_(E) * coupling_(j, l) * project_local_pair(L_, pprime, p, theta, profile_, rmax_, opt_);
}

cplx LocalPotential::element_dE(int j, int l, cplx /*E*/, cplx pprime, cplx p, double theta) const {
  check_theta(theta);
  if (law_.v1 == 0.0) return 0.0;
  return law_.v1 * coupling_(j, l) * project_local_pair(L_, pprime, p, theta, profile_, rmax_, opt_);
}

Eigen::MatrixXcd LocalPotential::block(int j, int l, cplx E, const std::vector<double>& q,
                                       double theta) const {
  check_theta(theta);
  return (law_(E) * coupling_(j, l)) * shape(q, theta);
}

Eigen::MatrixXcd LocalPotential::block_dE(int j, int l, cplx /*E*/, const std::vector<double>& q,
                                          double theta) const {
  check_theta(theta);
  if (law_.v1 == 0.0 || coupling_(j, l) == 0.0) {
    return Eigen::MatrixXcd::Zero(q.size(), q.size());
  }
  return (law_.v1 * coupling_(j, l)) * shape(q, theta);
}

namespace {

// Angular projection Integral_{-1}^{1} dc P_L(c) / ((u + mu^2)(u + lam^2)),
// u = pp^2 + p^2 - 2 pp p c, on panels refined geometrically toward c = 1
// until the first panel resolves the forward scale |u(1) + mu^2|.
cplx yukawa_angular(int L, cplx pp, cplx p, double mu2, double lam2) {
  const cplx A = pp * pp + p * p;
  const cplx B = 2.0 * pp * p;
  const double Babs = std::abs(B);
  const Quadrature& u16 = gauss_legendre(16);

  const auto integrand = [&](double c) {
    const cplx u = A - B * c;
    return legendre_p(L, cplx(c)) / ((u + mu2) * (u + lam2));
  };

  if (Babs < 1e-14 * std::abs(A + mu2)) {
    // u is effectively constant across the sphere
    cplx sum = 0.0;
    const Quadrature full = gauss_legendre(64);
    for (std::size_t k = 0; k < full.size(); ++k) sum += full.w[k] * integrand(full.x[k]);
    return sum;
  }

  const double d = std::abs(A - B + mu2);  // forward-point scale
  double h = std::min(2.0, std::max(d / Babs, 1e-14));
  double hi = 1.0;
  cplx sum = 0.0;
  while (hi > -1.0) {
    const double lo = std::max(-1.0, hi - h);
    const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
    for (std::size_t k = 0; k < u16.size(); ++k) {
      sum += half * u16.w[k] * integrand(mid + half * u16.x[k]);
    }
    hi = lo;
    h *= 2.0;
  }
  return sum;
}

}  // namespace

YukawaFormFactor::YukawaFormFactor(int L, double beta, double mu, double lambda_cap)
    : L_(L), beta_(beta), mu_(mu), lambda_(lambda_cap) {}

void YukawaFormFactor::set_beta(double beta) { beta_ = beta; }

cplx YukawaFormFactor::element(int /*j*/, int /*l*/, cplx /*E*/, cplx pprime, cplx p,
                               double /*theta*/) const {
  return beta_ * 2.0 * pi * lambda_ * lambda_ *
         yukawa_angular(L_, pprime, p, mu_ * mu_, lambda_ * lambda_);
}

Eigen::MatrixXcd YukawaFormFactor::block(int /*j*/, int /*l*/, cplx /*E*/,
                                         const std::vector<double>& q, double theta) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const auto key = std::make_pair(theta, q);
    auto it = cache_.find(key);
    if (it != cache_.end()) return beta_ * it->second;
  }
  const int n = static_cast<int>(q.size());
  Eigen::MatrixXcd V(n, n);
  const cplx rot = std::exp(cplx(0.0, -theta));
  const double pref = 2.0 * pi * lambda_ * lambda_;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const cplx val =
          pref * yukawa_angular(L_, q[a] * rot, q[b] * rot, mu_ * mu_, lambda_ * lambda_);
      V(a, b) = val;
      V(b, a) = val;
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.emplace(std::make_pair(theta, q), V);
  return beta_ * V;
}

Eigen::MatrixXcd SeparableBare::block(int /*j*/, int /*l*/, cplx E, const std::vector<double>& q,
                                      double theta) const {
  const int n = static_cast<int>(q.size());
  Eigen::VectorXcd f(n);
  const cplx rot = std::exp(cplx(0.0, -theta));
  for (int i = 0; i < n; ++i) f[i] = formfactor(q[i] * rot);
  return (f * f.transpose()) / (E - m0_);
}

Eigen::MatrixXcd SeparableBare::block_dE(int j, int l, cplx E, const std::vector<double>& q,
                                         double theta) const {
  return -block(j, l, E, q, theta) / (E - m0_);
}

}  // namespace lswave
