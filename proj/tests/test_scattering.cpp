#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "lswave/kinematics.hpp"
#include "lswave/numerics.hpp"
#include "lswave/potential.hpp"
#include "lswave/scattering.hpp"
#include "lswave/spectrum.hpp"

using namespace lswave;

namespace {

// Single nonrelativistic channel in a Woods-Saxon well, four bound states.
struct WellSetup {
  std::shared_ptr<LocalPotential> model;
  ChannelSet channels;

  explicit WellSetup(double v0 = -35.0) {
    model = std::make_shared<LocalPotential>(
        0, Eigen::MatrixXd::Identity(1, 1), EnergyLaw{v0, 0.0, 0.0},
        [](cplx r) { return 1.0 / (1.0 + std::exp((r - 3.6) / 0.5)); }, 25.0,
        std::atan(pi * 0.5 / 3.6));
    channels = ChannelSet({Channel{1115.7, 35.0 * 1115.7, Dispersion::nonrelativistic}});
  }
};

// Two coupled semirelativistic channels with a Gaussian contact shape.
struct CoupledSetup {
  std::shared_ptr<LocalPotential> model;
  ChannelSet channels;

  explicit CoupledSetup(double x = 0.5) {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, x, x, 0.0;
    model = std::make_shared<LocalPotential>(
        0, c, EnergyLaw{-650.0, 0.0, 0.0},
        [](cplx r) { return std::exp(-r * r / 0.25); }, 6.0);
    channels = ChannelSet({Channel{495.7, 938.9, Dispersion::semirelativistic},
                           Channel{138.0, 1193.1, Dispersion::semirelativistic}});
  }
};

}  // namespace

TEST_CASE("potential_matrix assembles channel blocks at rotated momenta") {
  const CoupledSetup cs;
  const MomentumMesh mesh = tangent_mapped_mesh(16, 300.0, deg2rad(20.0));
  const cplx E(1412.0, -7.0);
  const Eigen::MatrixXcd V = potential_matrix(*cs.model, cs.channels, E, mesh);
  REQUIRE(V.rows() == 32);
  REQUIRE(V.cols() == 32);

  const Eigen::MatrixXcd B01 = cs.model->block(0, 1, E, mesh.q, mesh.theta);
  CHECK((V.block(0, 16, 16, 16) - B01).cwiseAbs().maxCoeff() < 1e-14);
  // channel 2 couples only through channel 1
  CHECK(V.block(16, 16, 16, 16).cwiseAbs().maxCoeff() == 0.0);
  // energy-independent shape: dV/dE vanishes
  CHECK(potential_matrix_dE(*cs.model, cs.channels, E, mesh).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_kernel rejects a mesh node sitting on a kernel singularity") {
  const WellSetup ws;
  const MomentumMesh mesh = tangent_mapped_mesh(64, 300.0, 0.0);
  const double E_on_node = ws.channels[0].energy(mesh.q[20]).real();
  CHECK_THROWS_AS(build_kernel(*ws.model, ws.channels, E_on_node, mesh),
                  std::domain_error);
  // slightly off the node the kernel is fine
  CHECK_NOTHROW(build_kernel(*ws.model, ws.channels, E_on_node + 0.5, mesh));
}

TEST_CASE("half-off-shell amplitude is symmetric and satisfies its linear system") {
  const CoupledSetup cs;
  const MomentumMesh mesh = tangent_mapped_mesh(100, 300.0, deg2rad(20.0));
  const cplx E(1420.0, -5.0);
  const HalfOffshellSolution sol = solve_half_offshell(*cs.model, cs.channels, E, mesh);

  CHECK(sol.residual < 1e-10);
  CHECK(sol.condition_est >= 1.0);
  const double scale = sol.T.cwiseAbs().maxCoeff();
  CHECK((sol.T - sol.T.transpose()).cwiseAbs().maxCoeff() < 1e-10 * scale);

  // the amplitude actually solves (1 - K) T = V
  const Eigen::MatrixXcd A = build_kernel(*cs.model, cs.channels, E, mesh);
  const Eigen::MatrixXcd V = potential_matrix(*cs.model, cs.channels, E, mesh);
  CHECK((A * sol.T - V).cwiseAbs().maxCoeff() < 1e-9 * V.cwiseAbs().maxCoeff());
}

TEST_CASE("weak coupling reproduces the second Born approximation") {
  const WellSetup ws(-35.0e-3);
  const MomentumMesh mesh = tangent_mapped_mesh(100, 300.0, 0.0);
  const cplx E = ws.channels[0].threshold() - 5.0;

  const HalfOffshellSolution sol = solve_half_offshell(*ws.model, ws.channels, E, mesh);
  const Eigen::MatrixXcd V = potential_matrix(*ws.model, ws.channels, E, mesh);
  const Eigen::MatrixXcd K =
      Eigen::MatrixXcd::Identity(V.rows(), V.cols()) -
      build_kernel(*ws.model, ws.channels, E, mesh);
  const Eigen::MatrixXcd born2 = V + K * V;
  CHECK((sol.T - born2).cwiseAbs().maxCoeff() < 1e-4 * V.cwiseAbs().maxCoeff());
  // and the once-iterated series is closer than the bare Born term
  CHECK((sol.T - born2).cwiseAbs().maxCoeff() < (sol.T - V).cwiseAbs().maxCoeff());
}

TEST_CASE("solving at a bound-state energy raises SolverError") {
  const WellSetup ws;
  const MomentumMesh mesh = tangent_mapped_mesh(100, 300.0, 0.0);
  // 0s level of the well, polished to the working precision
  const cplx Eb = find_eigenenergy(*ws.model, ws.channels, ws.channels[0].threshold() - 20.0,
                                   mesh, 1e-12, 200);
  CHECK_THROWS_AS(solve_half_offshell(*ws.model, ws.channels, Eb, mesh), SolverError);
}

TEST_CASE("real-axis on-shell amplitudes satisfy unitarity") {
  const MomentumMesh mesh = tangent_mapped_mesh(150, 300.0, 0.0);

  SUBCASE("single nonrelativistic channel") {
    const WellSetup ws;
    const double thr = ws.channels[0].threshold();
    for (double dE : {10.0, 50.0, 100.0}) {
      const OnshellSolution sol = onshell_real_axis(*ws.model, ws.channels, thr + dE, mesh);
      REQUIRE(sol.open.size() == 1);
      CHECK(sol.rho[0] == doctest::Approx(ws.channels[0].rho(thr + dE)).epsilon(1e-12));
      CHECK(optical_residual(sol) < 1e-8);
      const Eigen::MatrixXcd S = smatrix(sol);
      CHECK(std::abs(std::abs(S(0, 0)) - 1.0) < 1e-8);
    }
  }
  SUBCASE("two coupled channels, both open") {
    const CoupledSetup cs;
    const double E = cs.channels[0].threshold() + 50.0;
    const OnshellSolution sol = onshell_real_axis(*cs.model, cs.channels, E, mesh);
    REQUIRE(sol.open.size() == 2);
    CHECK(optical_residual(sol) < 1e-8);
    CHECK(std::abs(sol.T(0, 1) - sol.T(1, 0)) < 1e-10 * sol.T.cwiseAbs().maxCoeff());
    const Eigen::MatrixXcd S = smatrix(sol);
    const Eigen::MatrixXcd unit = S.adjoint() * S - Eigen::MatrixXcd::Identity(2, 2);
    CHECK(unit.cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("between the thresholds only the lower channel is open") {
    const CoupledSetup cs;
    const double E = cs.channels[1].threshold() + 30.0;  // below channel 1's threshold
    REQUIRE(E < cs.channels[0].threshold());
    const OnshellSolution sol = onshell_real_axis(*cs.model, cs.channels, E, mesh);
    REQUIRE(sol.open.size() == 1);
    CHECK(sol.open[0] == 1);
    CHECK(optical_residual(sol) < 1e-8);
    const Eigen::MatrixXcd S = smatrix(sol);
    CHECK(std::abs(std::abs(S(0, 0)) - 1.0) < 1e-8);
  }
  SUBCASE("guards") {
    const WellSetup ws;
    CHECK_THROWS_AS(
        onshell_real_axis(*ws.model, ws.channels, ws.channels[0].threshold() - 1.0, mesh),
        std::domain_error);
    const MomentumMesh rotated = tangent_mapped_mesh(64, 300.0, 0.2);
    CHECK_THROWS_AS(
        onshell_real_axis(*ws.model, ws.channels, ws.channels[0].threshold() + 10.0, rotated),
        std::invalid_argument);
  }
}
