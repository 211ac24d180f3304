#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lswave/numerics.hpp"
#include "lswave/potential.hpp"

using namespace lswave;

namespace {

// Closed-form s-wave projection of a unit Gaussian shape exp(-(r/b)^2):
//   V0(q', q; theta) = pi^{3/2} b e^{2 i theta} / (hbarc q' q)
//     * [exp(-b^2 e^{-2 i theta} (q'-q)^2 / (4 hbarc^2))
//        - exp(-b^2 e^{-2 i theta} (q'+q)^2 / (4 hbarc^2))]
// for real momenta q', q (MeV) and b in fm.
cplx gauss_swave_exact(double qp, double q, double theta, double b_fm) {
  const cplx rot = std::exp(cplx(0.0, -2.0 * theta));
  const double b2 = b_fm * b_fm / (4.0 * hbarc * hbarc);
  const cplx em = std::exp(-b2 * rot * (qp - q) * (qp - q));
  const cplx ep = std::exp(-b2 * rot * (qp + q) * (qp + q));
  return std::pow(pi, 1.5) * b_fm * std::exp(cplx(0.0, 2.0 * theta)) / (hbarc * qp * q) *
         (em - ep);
}

// Same closed form continued to complex momenta (theta = 0 contour).
cplx gauss_swave_exact_pair(cplx qp, cplx q, double b_fm) {
  const double b2 = b_fm * b_fm / (4.0 * hbarc * hbarc);
  const cplx em = std::exp(-b2 * (qp - q) * (qp - q));
  const cplx ep = std::exp(-b2 * (qp + q) * (qp + q));
  return std::pow(pi, 1.5) * b_fm / (hbarc * qp * q) * (em - ep);
}

// Closed-form s-wave angular integral of the regularized exchange interaction
//   Vtilde(q) = 4 pi beta Lambda^2 / ((q^2+mu^2)(q^2+Lambda^2)),
// by partial fractions:
//   V0(p', p) = pi beta Lambda^2 / (p' p (Lambda^2 - mu^2))
//     * [ln r(mu) - ln r(Lambda)], r(m) = ((p'+p)^2+m^2)/((p'-p)^2+m^2).
cplx yukawa_swave_exact(cplx pp, cplx p, double beta, double mu, double lam) {
  const auto lr = [&](double m) {
    return std::log(((pp + p) * (pp + p) + m * m) / ((pp - p) * (pp - p) + m * m));
  };
  return pi * beta * lam * lam / (pp * p * (lam * lam - mu * mu)) * (lr(mu) - lr(lam));
}

std::function<cplx(cplx)> woods_saxon_shape() {
  return [](cplx r) { return 1.0 / (1.0 + std::exp((r - 3.6) / 0.5)); };
}

std::function<cplx(cplx)> two_gauss_shape() {
  return [](cplx r) {
    return 2.0 * std::exp(-(r / 2.5) * (r / 2.5)) - std::exp(-(r / 5.0) * (r / 5.0));
  };
}

std::vector<double> short_momentum_list() {
  const MomentumMesh mesh = tangent_mapped_mesh(24, 300.0);
  return mesh.q;
}

}  // namespace

TEST_CASE("project_local reproduces the exact Gaussian projection") {
  const double b = 0.5;
  const auto shape = [b](cplx r) { return std::exp(-(r / b) * (r / b)); };
  const std::vector<double> q = short_momentum_list();

  for (double theta : {0.0, deg2rad(20.0)}) {
    CAPTURE(theta);
    const Eigen::MatrixXcd V = project_local(0, q, theta, shape, 6.0);
    double worst = 0.0, scale = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
      for (std::size_t c = 0; c < q.size(); ++c) {
        const cplx exact = gauss_swave_exact(q[a], q[c], theta, b);
        worst = std::max(worst, std::abs(V(a, c) - exact));
        scale = std::max(scale, std::abs(exact));
      }
    }
    CHECK(worst < 1e-10 * scale);
  }
}

TEST_CASE("project_local_pair is contour-independent and matches the continued closed form") {
  const double b = 0.5;
  const auto shape = [b](cplx r) { return std::exp(-(r / b) * (r / b)); };
  const cplx pp(150.0, -30.0), p(200.0, 10.0);

  const cplx v0 = project_local_pair(0, pp, p, 0.0, shape, 6.0);
  const cplx v20 = project_local_pair(0, pp, p, deg2rad(20.0), shape, 6.0);
  const cplx exact = gauss_swave_exact_pair(pp, p, b);

  CHECK(std::abs(v0 - exact) < 1e-10 * std::abs(exact));
  CHECK(std::abs(v20 - exact) < 1e-10 * std::abs(exact));
  CHECK(std::abs(v0 - v20) < 1e-10 * std::abs(exact));
}

TEST_CASE("s-wave projection at equal momenta matches a brute-force double quadrature") {
  // Independent route: V0(q,q) = (1/2) Integral dc Vtilde(k(c)),
  // Vtilde(k) = 4 pi / hbarc^3 Integral dr r^2 j0(k r / hbarc) f(r),
  // k(c) = q sqrt(2 - 2c). This decomposes by the momentum transfer rather
  // than by the product of partial-wave Bessel functions.
  const auto shape = woods_saxon_shape();
  const double q = 50.0, rmax = 25.0;

  const Quadrature rq = composite_panels(8, 0.0, rmax);
  const auto vtilde = [&](double k) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < rq.size(); ++i) {
      const double r = rq.x[i];
      s += rq.w[i] * r * r * sph_bessel_j(0, cplx(k * r / hbarc)) * shape(cplx(r));
    }
    return 4.0 * pi / (hbarc * hbarc * hbarc) * s;
  };
  const Quadrature cq = gauss_legendre(64);
  cplx oracle = 0.0;
  for (std::size_t i = 0; i < cq.size(); ++i) {
    const double k = q * std::sqrt(std::max(0.0, 2.0 - 2.0 * cq.x[i]));
    oracle += 0.5 * cq.w[i] * vtilde(k);
  }

  const Eigen::MatrixXcd V = project_local(0, {q}, 0.0, shape, rmax);
  CHECK(std::abs(V(0, 0) - oracle) < 1e-9 * std::abs(oracle));
}

TEST_CASE("exchange interaction matches its partial-fraction closed form") {
  const double beta = -2.0, mu = 450.0, lam = 1000.0;
  const YukawaFormFactor model(0, beta, mu, lam);
  const std::vector<double> q = short_momentum_list();

  SUBCASE("real momenta") {
    const Eigen::MatrixXcd V = model.block(0, 0, 1400.0, q, 0.0);
    double worst = 0.0, scale = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
      for (std::size_t c = 0; c < q.size(); ++c) {
        const cplx exact = yukawa_swave_exact(q[a], q[c], beta, mu, lam);
        worst = std::max(worst, std::abs(V(a, c) - exact));
        scale = std::max(scale, std::abs(exact));
      }
    }
    CHECK(worst < 1e-10 * scale);
  }
  SUBCASE("rotated momenta") {
    const double theta = deg2rad(20.0);
    const cplx rot = std::exp(cplx(0.0, -theta));
    const Eigen::MatrixXcd V = model.block(0, 0, 1400.0, q, theta);
    for (std::size_t a : {std::size_t(0), std::size_t(7), std::size_t(20)}) {
      for (std::size_t c : {std::size_t(3), std::size_t(15)}) {
        const cplx exact = yukawa_swave_exact(q[a] * rot, q[c] * rot, beta, mu, lam);
        CHECK(std::abs(V(a, c) - exact) < 1e-10 * std::abs(exact));
      }
    }
  }
  SUBCASE("forward-peaked kinematics (nearly equal large momenta)") {
    const cplx pp(820.0, 0.0), p(819.5, 0.0);
    const cplx exact = yukawa_swave_exact(pp, p, beta, mu, lam);
    CHECK(std::abs(model.element(0, 0, 1400.0, pp, p, 0.0) - exact) < 1e-9 * std::abs(exact));
  }
  SUBCASE("uncapped limit approaches the plain Yukawa projection") {
    const YukawaFormFactor loose(0, beta, mu, 1e7);
    const double qp = 320.0, qq = 180.0;
    const cplx plain = pi * beta / (qp * qq) *
                       std::log(((qp + qq) * (qp + qq) + mu * mu) /
                                ((qp - qq) * (qp - qq) + mu * mu));
    CHECK(std::abs(loose.element(0, 0, 1400.0, qp, qq, 0.0) - plain) < 1e-6 * std::abs(plain));
  }
  SUBCASE("energy independent") {
    const cplx a = model.element(0, 0, 1300.0, 200.0, 150.0, 0.0);
    const cplx b = model.element(0, 0, 1500.0, 200.0, 150.0, 0.0);
    CHECK(std::abs(a - b) < 1e-15);
    CHECK(std::abs(model.element_dE(0, 0, 1400.0, 200.0, 150.0, 0.0)) == 0.0);
  }
}

TEST_CASE("momentum-space exchange block equals its coordinate-space radial profile") {
  // The interaction whose Fourier transform is the regularized exchange:
  //   rho(r) = beta Lambda^2/(Lambda^2-mu^2) (e^{-mu r/hbarc} - e^{-Lambda r/hbarc}) hbarc/r.
  const double beta = -2.0, mu = 450.0, lam = 1000.0;
  const auto profile = [=](cplx r) {
    return beta * lam * lam / (lam * lam - mu * mu) *
           (std::exp(-mu * r / hbarc) - std::exp(-lam * r / hbarc)) * hbarc / r;
  };
  const YukawaFormFactor angular(0, beta, mu, lam);
  const std::vector<double> q = short_momentum_list();

  const Eigen::MatrixXcd Vr = project_local(0, q, 0.0, profile, 20.0);
  const Eigen::MatrixXcd Vq = angular.block(0, 0, 1400.0, q, 0.0);
  const double scale = Vq.cwiseAbs().maxCoeff();
  CHECK((Vr - Vq).cwiseAbs().maxCoeff() < 1e-8 * scale);
}

TEST_CASE("LocalPotential applies the linear energy law") {
  const EnergyLaw law{-35.0, 0.2, cplx(2200.0, -3.0)};
  LocalPotential model(0, Eigen::MatrixXd::Identity(1, 1), law, woods_saxon_shape(), 25.0,
                       std::atan(pi * 0.5 / 3.6));
  const cplx E(2150.0, -1.0);
  const cplx pp(60.0, 0.0), p(45.0, 0.0);

  SUBCASE("element = v(E) * shape projection") {
    const cplx v = model.element(0, 0, E, pp, p, 0.0);
    const cplx shape_only = project_local_pair(0, pp, p, 0.0, woods_saxon_shape(), 25.0);
    CHECK(std::abs(v - law(E) * shape_only) < 1e-12 * std::abs(v));
  }
  SUBCASE("analytic energy derivative against finite differences") {
    const double h = 0.1;
    const cplx fd =
        (model.element(0, 0, E + h, pp, p, 0.0) - model.element(0, 0, E - h, pp, p, 0.0)) /
        (2.0 * h);
    const cplx an = model.element_dE(0, 0, E, pp, p, 0.0);
    CHECK(std::abs(an - fd) < 1e-6 * std::abs(an));
    // slope/value identity for a linear law
    const cplx v = model.element(0, 0, E, pp, p, 0.0);
    CHECK(std::abs(an - 0.2 / law(E) * v) < 1e-12 * std::abs(an));
  }
  SUBCASE("block_dE is proportional to the block") {
    const std::vector<double> q{40.0, 90.0, 160.0};
    const Eigen::MatrixXcd B = model.block(0, 0, E, q, 0.0);
    const Eigen::MatrixXcd BdE = model.block_dE(0, 0, E, q, 0.0);
    CHECK((BdE - 0.2 / law(E) * B).cwiseAbs().maxCoeff() < 1e-12 * B.cwiseAbs().maxCoeff());
  }
  SUBCASE("set_law changes the scale without re-projection") {
    const cplx before = model.element(0, 0, E, pp, p, 0.0);
    EnergyLaw deeper = law;
    deeper.v0 = -70.0;
    model.set_law(deeper);
    const cplx after = model.element(0, 0, E, pp, p, 0.0);
    CHECK(std::abs(after - deeper(E) / law(E) * before) < 1e-12 * std::abs(after));
  }
}

TEST_CASE("interaction matrices are symmetric under channel-and-momentum exchange") {
  Eigen::MatrixXd coupling(2, 2);
  coupling << 1.0, 0.5, 0.5, 0.0;
  const LocalPotential model(0, coupling, EnergyLaw{-650.0, 0.0, 0.0},
                             [](cplx r) { return std::exp(-r * r / 0.25); }, 6.0);
  const cplx E(1420.0, -6.0);
  const cplx pp(230.0, -55.0), p(110.0, 20.0);

  for (int j = 0; j < 2; ++j) {
    for (int l = 0; l < 2; ++l) {
      const cplx a = model.element(j, l, E, pp, p, 0.0);
      const cplx b = model.element(l, j, E, p, pp, 0.0);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1e-30, std::abs(a)));
    }
  }
  SUBCASE("blocks at rotated momenta are symmetric matrices") {
    const std::vector<double> q = short_momentum_list();
    const Eigen::MatrixXcd B = model.block(0, 1, E, q, deg2rad(20.0));
    CHECK((B - B.transpose()).cwiseAbs().maxCoeff() < 1e-12 * B.cwiseAbs().maxCoeff());
  }
  SUBCASE("a vanishing coupling entry gives an exactly zero block") {
    const std::vector<double> q{50.0, 150.0, 400.0};
    CHECK(model.block(1, 1, E, q, 0.0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(model.element(1, 1, E, pp, p, 0.0)) == 0.0);
  }
  SUBCASE("exchange interaction is symmetric too") {
    const YukawaFormFactor yuk(0, -2.0, 450.0, 1000.0);
    const cplx a = yuk.element(0, 0, E, pp, p, 0.0);
    const cplx b = yuk.element(0, 0, E, p, pp, 0.0);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
  }
}

TEST_CASE("rotated-contour projections agree across angles inside the analyticity sector") {
  // rmax = 60: at theta = 30 deg the wide Gaussian term only decays like
  // exp(-r^2 cos(2 theta) / 25) while the Bessel factors grow, so the
  // integrand is still O(1e-6) at r = 30 and the three contours would
  // disagree at that level.  At r = 60 the tail is below 1e-17.
  const LocalPotential model(0, Eigen::MatrixXd::Identity(1, 1), EnergyLaw{-50.0, 0.0, 0.0},
                             two_gauss_shape(), 60.0);
  const cplx E(1884.0, -0.5);
  const cplx pp(180.0, -40.0), p(220.0, -60.0);

  const cplx v10 = model.element(0, 0, E, pp, p, deg2rad(10.0));
  const cplx v20 = model.element(0, 0, E, pp, p, deg2rad(20.0));
  const cplx v30 = model.element(0, 0, E, pp, p, deg2rad(30.0));
  const double scale = std::abs(v20);
  CHECK(std::abs(v10 - v20) < 1e-8 * scale);
  CHECK(std::abs(v20 - v30) < 1e-8 * scale);

  SUBCASE("block entries match elements evaluated at the rotated nodes") {
    const std::vector<double> q{80.0, 210.0, 530.0};
    const double theta = deg2rad(20.0);
    const cplx rot = std::exp(cplx(0.0, -theta));
    const Eigen::MatrixXcd B = model.block(0, 0, E, q, theta);
    for (int a = 0; a < 3; ++a) {
      for (int c = 0; c < 3; ++c) {
        const cplx e = model.element(0, 0, E, q[a] * rot, q[c] * rot, theta);
        CHECK(std::abs(B(a, c) - e) < 1e-9 * B.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("rotation beyond the profile's analyticity sector is rejected") {
  // Woods-Saxon poles at r = 3.6 +/- i pi 0.5 limit the rotation to atan(pi a / R).
  const double ceiling = std::atan(pi * 0.5 / 3.6);
  const LocalPotential model(0, Eigen::MatrixXd::Identity(1, 1), EnergyLaw{-35.0, 0.0, 0.0},
                             woods_saxon_shape(), 25.0, ceiling);
  const std::vector<double> q{50.0, 120.0};
  CHECK_NOTHROW(model.block(0, 0, 40150.0, q, 0.40));
  CHECK_THROWS_AS(model.block(0, 0, 40150.0, q, 0.45), std::domain_error);
  CHECK_THROWS_AS(model.element(0, 0, 40150.0, cplx(50.0), cplx(60.0), 0.45), std::domain_error);
}

TEST_CASE("columns beyond the oscillation budget are zeroed, not mis-integrated") {
  const auto shape = [](cplx r) { return std::exp(-r * r / 25.0); };
  const Eigen::MatrixXcd V = project_local(0, {100.0, 5.0e6}, 0.0, shape, 25.0);
  CHECK(std::abs(V(0, 0)) > 0.0);
  CHECK(std::abs(V(0, 1)) == 0.0);
  CHECK(std::abs(V(1, 0)) == 0.0);
  CHECK(std::abs(V(1, 1)) == 0.0);
}

TEST_CASE("separable bare-state interaction and its energy derivative") {
  const SeparableBare model(0.15, 600.0, 600.0);
  const cplx E(430.0, -50.0);
  const cplx pp(140.0, -20.0), p(310.0, 5.0);

  const cplx f_pp = model.formfactor(pp);
  const cplx f_p = model.formfactor(p);
  CHECK(std::abs(model.element(0, 0, E, pp, p, 0.3) - f_pp * f_p / (E - 600.0)) < 1e-15);

  const double h = 0.1;
  const cplx fd = (model.element(0, 0, E + h, pp, p, 0.0) - model.element(0, 0, E - h, pp, p, 0.0)) /
                  (2.0 * h);
  const cplx an = model.element_dE(0, 0, E, pp, p, 0.0);
  CHECK(std::abs(an - fd) < 1e-6 * std::abs(an));

  const std::vector<double> q{100.0, 250.0};
  const Eigen::MatrixXcd B = model.block(0, 0, E, q, deg2rad(20.0));
  const cplx rot = std::exp(cplx(0.0, -deg2rad(20.0)));
  CHECK(std::abs(B(0, 1) - model.formfactor(q[0] * rot) * model.formfactor(q[1] * rot) /
                               (E - 600.0)) < 1e-15);
}
