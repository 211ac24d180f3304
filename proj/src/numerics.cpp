#include "lswave/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace lswave {

namespace {

// Nodes/weights on [-1, 1] by Newton iteration on P_n (symmetric rule).
Quadrature gl_unit(int n) {
  Quadrature rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int l = 0; l < n; ++l) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * l + 1.0) * z * p1 - l * p2) / (l + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

const Quadrature& gl_unit_cached(int n) {
  static std::mutex mtx;
  static std::map<int, Quadrature> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gl_unit(n)).first;
  return it->second;
}

}  // namespace

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  const Quadrature& unit = gl_unit_cached(n);
  Quadrature rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = mid + half * unit.x[i];
    rule.w[i] = half * unit.w[i];
  }
  return rule;
}

Quadrature composite_panels(int m, double a, double b) {
  if (m < 1) throw std::invalid_argument("composite_panels: m must be >= 1");
  const Quadrature& unit = gl_unit_cached(64);
  Quadrature rule;
  rule.x.reserve(64 * m);
  rule.w.reserve(64 * m);
  const double h = (b - a) / m;
  for (int p = 0; p < m; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h, half = 0.5 * h;
    for (int i = 0; i < 64; ++i) {
      rule.x.push_back(mid + half * unit.x[i]);
      rule.w.push_back(half * unit.w[i]);
    }
  }
  return rule;
}

MomentumMesh tangent_mapped_mesh(int n, double scale, double theta) {
  if (n < 8) throw std::invalid_argument("tangent_mapped_mesh: n must be >= 8");
  if (scale <= 0.0) throw std::invalid_argument("tangent_mapped_mesh: scale must be > 0");
  if (theta < 0.0 || theta >= pi / 4.0) {
    throw std::invalid_argument("tangent_mapped_mesh: theta must lie in [0, pi/4)");
  }
  const Quadrature& unit = gl_unit_cached(n);
  MomentumMesh mesh;
  mesh.n = n;
  mesh.scale = scale;
  mesh.theta = theta;
  mesh.q.resize(n);
  mesh.w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = pi * (1.0 + unit.x[i]) / 4.0;
    const double c = std::cos(t);
    mesh.q[i] = scale * std::tan(t);
    mesh.w[i] = unit.w[i] * scale * (pi / 4.0) / (c * c);
  }
  return mesh;
}

cplx legendre_p(int L, cplx x) {
  if (L < 0 || L > 12) throw std::invalid_argument("legendre_p: L out of supported range [0, 12]");
  if (L == 0) return 1.0;
  cplx pm = 1.0, pc = x;
  for (int l = 1; l < L; ++l) {
    const cplx pn = ((2.0 * l + 1.0) * x * pc - static_cast<double>(l) * pm) / (l + 1.0);
    pm = pc;
    pc = pn;
  }
  return pc;
}

double legendre_p(int L, double x) { return legendre_p(L, cplx(x)).real(); }

namespace {

cplx sph_bessel_series(int L, cplx z) {
  double dfact = 1.0;
  for (int k = 1; k <= 2 * L + 1; k += 2) dfact *= k;
  const cplx z2 = z * z;
  cplx zL = 1.0;
  for (int k = 0; k < L; ++k) zL *= z;
  const double a1 = 2.0 * (2.0 * L + 3.0);
  const double a2 = 8.0 * (2.0 * L + 3.0) * (2.0 * L + 5.0);
  const double a3 = 48.0 * (2.0 * L + 3.0) * (2.0 * L + 5.0) * (2.0 * L + 7.0);
  return zL / dfact * (1.0 - z2 / a1 + z2 * z2 / a2 - z2 * z2 * z2 / a3);
}

}  // namespace

cplx sph_bessel_j(int L, cplx z) {
  if (L < 0 || L > 6) throw std::invalid_argument("sph_bessel_j: L out of supported range [0, 6]");
  if (std::abs(z.imag()) > 700.0) {
    throw std::overflow_error("sph_bessel_j: |Im z| too large, sin/cos would overflow");
  }
  const double az = std::abs(z);
  if (az < 1e-3) return sph_bessel_series(L, z);

  const cplx j0 = std::sin(z) / z;
  if (L == 0) return j0;
  const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  if (L == 1) return j1;

  if (az >= L) {
    // upward recurrence, stable for |z| >= L
    cplx jm = j0, jc = j1;
    for (int l = 1; l < L; ++l) {
      const cplx jn = (2.0 * l + 1.0) / z * jc - jm;
      jm = jc;
      jc = jn;
    }
    return jc;
  }

  // Miller's downward recurrence, normalized against j0.
  const int lstart = L + 15 + static_cast<int>(az);
  cplx jp = 0.0, jc = 1e-30;
  cplx target = 0.0;
  for (int l = lstart; l >= 1; --l) {
    const cplx jm = (2.0 * l + 1.0) / z * jc - jp;
    jp = jc;
    jc = jm;
    if (l - 1 == L) target = jc;
  }
  return target * (j0 / jc);
}

MullerResult muller(const std::function<cplx(cplx)>& f, cplx e0, cplx e1,
                    cplx e2, double tol, int itmax) {
  MullerResult res;
  cplx f0 = f(e0), f1 = f(e1), f2 = f(e2);
  for (int it = 0; it < itmax; ++it) {
    const cplx h1 = e1 - e0, h2 = e2 - e1;
    const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx c = f2;
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    cplx den = (std::abs(b + disc) > std::abs(b - disc)) ? b + disc : b - disc;
    if (den == cplx(0.0)) den = b + disc + 1e-30;
    const cplx de = -2.0 * c / den;
    e0 = e1;
    f0 = f1;
    e1 = e2;
    f1 = f2;
    e2 = e2 + de;
    f2 = f(e2);
    res.iterations = it + 1;
    if (std::abs(de) < tol) {
      res.root = e2;
      res.converged = true;
      return res;
    }
  }
  res.root = e2;
  res.converged = false;
  return res;
}

}  // namespace lswave
