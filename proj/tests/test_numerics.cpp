#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lswave/numerics.hpp"

using namespace lswave;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  SUBCASE("n=1 on [-1,1] is the midpoint rule") {
    const Quadrature q = gauss_legendre(1);
    REQUIRE(q.size() == 1);
    CHECK(q.x[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.w[0] == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("n=4 integrates x^7 on [0,1]") {
    const Quadrature q = gauss_legendre(4, 0.0, 1.0);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.w[i] * std::pow(q.x[i], 7);
    CHECK(s == doctest::Approx(1.0 / 8.0).epsilon(1e-14));
  }
  SUBCASE("n=5 integrates x^8 on [-1,1]") {
    const Quadrature q = gauss_legendre(5);
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.w[i] * std::pow(q.x[i], 8);
    CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  }
  SUBCASE("weights are positive and sum to the interval length") {
    const Quadrature q = gauss_legendre(48, 0.0, 10.0);
    double s = 0.0;
    for (double w : q.w) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == doctest::Approx(10.0).epsilon(1e-13));
  }
  SUBCASE("invalid arguments throw") {
    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_legendre(4, 2.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("composite_panels resolves oscillatory integrands") {
  // int_0^{20 pi} sin(x) dx = 1 - cos(20 pi) = 0; use [0, 19.5 pi] -> 1 - cos(19.5 pi) = 1.
  const double b = 19.5 * pi;
  const Quadrature q = composite_panels(8, 0.0, b);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.w[i] * std::sin(q.x[i]);
  CHECK(s == doctest::Approx(1.0 - std::cos(b)).epsilon(1e-12));
  CHECK_THROWS_AS(composite_panels(0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("tangent_mapped_mesh covers [0,inf) with the documented map") {
  const double scale = 300.0;
  const MomentumMesh mesh = tangent_mapped_mesh(100, scale, 0.3);
  REQUIRE(mesh.n == 100);
  CHECK(mesh.scale == scale);
  CHECK(mesh.theta == doctest::Approx(0.3));

  SUBCASE("nodes increase, weights positive") {
    for (int i = 0; i < mesh.n; ++i) {
      CHECK(mesh.q[i] > 0.0);
      CHECK(mesh.w[i] > 0.0);
      if (i > 0) CHECK(mesh.q[i] > mesh.q[i - 1]);
    }
  }
  SUBCASE("median node brackets the map scale") {
    CHECK(mesh.q[49] < scale);
    CHECK(mesh.q[50] > scale);
  }
  SUBCASE("closed-form integral: int_0^inf scale^2 q / (q^2+scale^2)^2 dq = 1/2") {
    double s = 0.0;
    for (int i = 0; i < mesh.n; ++i) {
      const double d = mesh.q[i] * mesh.q[i] + scale * scale;
      s += mesh.w[i] * scale * scale * mesh.q[i] / (d * d);
    }
    CHECK(s == doctest::Approx(0.5).epsilon(1e-8));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(tangent_mapped_mesh(7, scale), std::invalid_argument);
    CHECK_THROWS_AS(tangent_mapped_mesh(100, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tangent_mapped_mesh(100, scale, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(tangent_mapped_mesh(100, scale, pi / 4.0), std::invalid_argument);
  }
}

TEST_CASE("legendre_p matches closed forms and orthogonality") {
  CHECK(legendre_p(0, 0.83) == doctest::Approx(1.0));
  CHECK(legendre_p(1, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  const double x = 0.7;
  CHECK(legendre_p(4, x) ==
        doctest::Approx((35.0 * std::pow(x, 4) - 30.0 * x * x + 3.0) / 8.0).epsilon(1e-14));

  SUBCASE("complex argument, P2(z) = (3z^2-1)/2") {
    const cplx z(0.4, -0.9);
    const cplx p2 = legendre_p(2, z);
    const cplx ref = (3.0 * z * z - 1.0) / 2.0;
    CHECK(std::abs(p2 - ref) < 1e-14);
  }
  SUBCASE("orthogonality on a Gauss grid reproduces 2/(2L+1) delta") {
    const Quadrature g = gauss_legendre(16);
    for (int L = 0; L <= 6; ++L) {
      for (int Lp = 0; Lp <= 6; ++Lp) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          s += g.w[i] * legendre_p(L, g.x[i]) * legendre_p(Lp, g.x[i]);
        }
        const double expect = (L == Lp) ? 2.0 / (2.0 * L + 1.0) : 0.0;
        CHECK(std::abs(s - expect) < 1e-12);
      }
    }
  }
  SUBCASE("supported range") {
    CHECK_NOTHROW(legendre_p(12, 0.5));
    CHECK_THROWS_AS(legendre_p(13, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(legendre_p(-1, 0.5), std::invalid_argument);
  }
}

namespace {

// Independent truncated power series j_L(z) = z^L sum_k (-z^2/2)^k / (k! (2L+2k+1)!!),
// accurate to well below 1e-15 for |z| <= 3 with 25 terms.
cplx bessel_series_oracle(int L, cplx z) {
  double dfact = 1.0;
  for (int k = 1; k <= 2 * L + 1; k += 2) dfact *= k;
  cplx zL = 1.0;
  for (int k = 0; k < L; ++k) zL *= z;
  cplx sum = 0.0, term = 1.0 / dfact;
  for (int k = 0; k < 25; ++k) {
    sum += term;
    term *= -0.5 * z * z / ((k + 1.0) * (2.0 * L + 2.0 * k + 3.0));
  }
  return zL * sum;
}

}  // namespace

TEST_CASE("sph_bessel_j matches closed forms and the series oracle") {
  SUBCASE("limiting values at z = 0") {
    CHECK(std::abs(sph_bessel_j(0, cplx(0.0)) - 1.0) < 1e-15);
    CHECK(std::abs(sph_bessel_j(1, cplx(0.0))) < 1e-15);
    CHECK(std::abs(sph_bessel_j(2, cplx(1e-8, 0.0))) < 1e-15);
  }
  SUBCASE("j0 and j1 closed forms at complex argument") {
    const cplx z(2.3, -1.1);
    CHECK(std::abs(sph_bessel_j(0, z) - std::sin(z) / z) < 1e-14);
    const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    CHECK(std::abs(sph_bessel_j(1, z) - j1) < 1e-14);
  }
  SUBCASE("j2 closed form on a complex grid (downward and upward branches)") {
    for (double re : {0.4, 1.5, 4.0, 9.0}) {
      for (double im : {-2.0, -0.5, 0.0, 0.7}) {
        const cplx z(re, im);
        const cplx ref = (3.0 / (z * z * z) - 1.0 / z) * std::sin(z) - 3.0 * std::cos(z) / (z * z);
        CHECK(std::abs(sph_bessel_j(2, z) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
      }
    }
  }
  SUBCASE("j2(1.5 - 0.5i) against the series oracle") {
    const cplx z(1.5, -0.5);
    CHECK(std::abs(sph_bessel_j(2, z) - bessel_series_oracle(2, z)) < 1e-12);
  }
  SUBCASE("j6 at small |z| (Miller recurrence) against the series oracle") {
    const cplx z(0.8, 0.3);
    const cplx ref = bessel_series_oracle(6, z);
    CHECK(std::abs(sph_bessel_j(6, z) - ref) < 1e-12 * std::abs(ref) + 1e-18);
  }
  SUBCASE("range and overflow guards") {
    CHECK_THROWS_AS(sph_bessel_j(-1, cplx(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(sph_bessel_j(7, cplx(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(sph_bessel_j(0, cplx(1.0, 800.0)), std::overflow_error);
  }
}

TEST_CASE("muller finds complex roots") {
  SUBCASE("z^2 + 1 from seeds near i") {
    const auto f = [](cplx z) { return z * z + 1.0; };
    const MullerResult r = muller(f, cplx(0.2, 0.8), cplx(0.0, 1.2), cplx(-0.1, 0.9), 1e-12, 50);
    REQUIRE(r.converged);
    CHECK(std::abs(r.root - cplx(0.0, 1.0)) < 1e-10);
  }
  SUBCASE("transcendental root of cos z = z") {
    const auto f = [](cplx z) { return std::cos(z) - z; };
    const MullerResult r = muller(f, 0.5, 0.8, 1.0, 1e-13, 50);
    REQUIRE(r.converged);
    CHECK(std::abs(f(r.root)) < 1e-12);
    CHECK(r.root.real() == doctest::Approx(0.7390851332151607).epsilon(1e-10));
  }
  SUBCASE("reports non-convergence for a rootless flat function") {
    const auto f = [](cplx) { return cplx(1.0); };
    const MullerResult r = muller(f, 0.0, 1.0, 2.0, 1e-12, 8);
    CHECK_FALSE(r.converged);
  }
}
