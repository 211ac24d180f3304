#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "lswave/constants.hpp"

namespace lswave {

/// Raised when an iterative solver fails to converge (maps to CLI exit 3).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A one-dimensional quadrature rule: nodes x and weights w.
struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

/// Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 2n-1.
/// Rules on [-1, 1] are cached per n.
Quadrature gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Composite rule: m equal panels on [a, b], 64-point Gauss-Legendre each.
Quadrature composite_panels(int m, double a, double b);

/// Momentum mesh on [0, inf): q = scale * tan(pi (1+x)/4) over Gauss-Legendre
/// nodes x in (-1, 1), plus the contour-rotation angle theta used downstream.
struct MomentumMesh {
  int n = 0;
  double scale = 0.0;   // MeV
  double theta = 0.0;   // radians, in [0, pi/4)
  std::vector<double> q;  // MeV, increasing
  std::vector<double> w;  // MeV
};

MomentumMesh tangent_mapped_mesh(int n, double scale, double theta = 0.0);

/// Legendre polynomial P_L(x) by Bonnet recurrence; supported for L <= 12.
cplx legendre_p(int L, cplx x);
double legendre_p(int L, double x);

/// Spherical Bessel function j_L(z) for complex z, L <= 6 supported.
/// Small |z| uses the power series; otherwise upward recurrence when
/// |z| >= L and Miller's downward recurrence when L > |z|.
cplx sph_bessel_j(int L, cplx z);

struct MullerResult {
  cplx root{};
  int iterations = 0;
  bool converged = false;
};

/// Muller's method for a complex root of f, started from three points.
/// Convergence criterion: |step| < tol.
MullerResult muller(const std::function<cplx(cplx)>& f, cplx e0, cplx e1,
                    cplx e2, double tol = 1e-8, int itmax = 100);

}  // namespace lswave
