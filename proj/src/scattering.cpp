#include "lswave/scattering.hpp"

#include <cmath>
#include <sstream>

namespace lswave {

namespace {

Eigen::MatrixXcd assemble_blocks(const InteractionModel& model, const ChannelSet& channels,
                                 cplx E, const MomentumMesh& mesh, bool dE) {
  const int N = static_cast<int>(channels.size());
  const int n = mesh.n;
  Eigen::MatrixXcd V(N * n, N * n);
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < N; ++l) {
      V.block(j * n, l * n, n, n) = dE ? model.block_dE(j, l, E, mesh.q, mesh.theta)
                                       : model.block(j, l, E, mesh.q, mesh.theta);
    }
  }
  return V;
}

}  // namespace

Eigen::MatrixXcd potential_matrix(const InteractionModel& model, const ChannelSet& channels,
                                  cplx E, const MomentumMesh& mesh) {
  return assemble_blocks(model, channels, E, mesh, false);
}

Eigen::MatrixXcd potential_matrix_dE(const InteractionModel& model, const ChannelSet& channels,
                                     cplx E, const MomentumMesh& mesh) {
  return assemble_blocks(model, channels, E, mesh, true);
}

Eigen::MatrixXcd build_kernel(const InteractionModel& model, const ChannelSet& channels,
                              cplx E, const MomentumMesh& mesh) {
  const int N = static_cast<int>(channels.size());
  const int n = mesh.n;
  const cplx rot = std::exp(cplx(0.0, -mesh.theta));
  const cplx phase3 = std::exp(cplx(0.0, -3.0 * mesh.theta));

  Eigen::MatrixXcd A = potential_matrix(model, channels, E, mesh);  // reused as scratch
  // column factors w q^2 e^{-3 i theta} / (2 pi^2) / (E - E_l(q e^{-i theta}))
  Eigen::VectorXcd colfac(N * n);
  for (int l = 0; l < N; ++l) {
    for (int b = 0; b < n; ++b) {
      const cplx qc = mesh.q[b] * rot;
      const cplx den = E - channels.energy(l, E, qc);
      if (std::abs(den) < 1e-10 * (std::abs(E) + 1.0)) {
        std::ostringstream msg;
        msg << "build_kernel: kernel denominator vanishes at node q = " << mesh.q[b]
            << " MeV in channel " << l << "; reposition the mesh or change theta";
        throw std::domain_error(msg.str());
      }
      colfac[l * n + b] = mesh.w[b] * mesh.q[b] * mesh.q[b] * phase3 / (2.0 * pi * pi) / den;
    }
  }
  A = (-A * colfac.asDiagonal()).eval();
  A += Eigen::MatrixXcd::Identity(N * n, N * n);
  return A;
}

HalfOffshellSolution solve_half_offshell(const InteractionModel& model,
                                         const ChannelSet& channels, cplx E,
                                         const MomentumMesh& mesh, double cond_limit) {
  HalfOffshellSolution sol;
  sol.E = E;
  sol.theta = mesh.theta;
  const Eigen::MatrixXcd A = build_kernel(model, channels, E, mesh);
  const Eigen::MatrixXcd V = potential_matrix(model, channels, E, mesh);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  sol.condition_est = 1.0 / lu.rcond();
  if (sol.condition_est > cond_limit) {
    std::ostringstream msg;
    msg << "solve_half_offshell: system is near-singular (condition estimate "
        << sol.condition_est << "); E = " << E.real() << (E.imag() < 0 ? " - " : " + ")
        << std::abs(E.imag()) << "i MeV is too close to an amplitude pole";
    throw SolverError(msg.str());
  }
  sol.T = lu.solve(V);
  const double vnorm = V.norm();
  sol.residual = vnorm > 0.0 ? (A * sol.T - V).norm() / vnorm : 0.0;
  // attainable backward-error floor grows with ||T||/||V|| when E approaches a
  // pole; the contract tolerance of 1e-10 applies away from that regime
  const double eps = 2.2e-16;
  const double tol = std::max(1e-10, 100.0 * eps * A.norm() * sol.T.norm() / std::max(vnorm, 1e-300));
  if (sol.residual > tol) {
    std::ostringstream msg;
    msg << "solve_half_offshell: solve residual " << sol.residual << " exceeds " << tol;
    throw SolverError(msg.str());
  }
  return sol;
}

OnshellSolution onshell_real_axis(const InteractionModel& model, const ChannelSet& channels,
                                  double E, const MomentumMesh& mesh) {
  if (mesh.theta != 0.0) {
    throw std::invalid_argument("onshell_real_axis: requires a theta = 0 mesh");
  }
  const int N = static_cast<int>(channels.size());
  for (int j = 0; j < N; ++j) {
    if (channels.has_override(j)) {
      throw std::invalid_argument("onshell_real_axis: dressed channels are not supported on the real axis");
    }
  }

  OnshellSolution sol;
  for (int j = 0; j < N; ++j) {
    if (E > channels[j].threshold()) {
      sol.open.push_back(j);
      sol.k.push_back(channels[j].onshell_momentum(cplx(E)).real());
    }
  }
  if (sol.open.empty()) {
    throw std::domain_error("onshell_real_axis: energy below all thresholds");
  }
  const int n = mesh.n;
  const int nopen = static_cast<int>(sol.open.size());

  // union momentum list: mesh nodes plus the appended on-shell nodes
  std::vector<double> u = mesh.q;
  for (double k0 : sol.k) u.push_back(k0);

  std::vector<std::vector<Eigen::MatrixXcd>> blocks(N, std::vector<Eigen::MatrixXcd>(N));
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < N; ++l) blocks[j][l] = model.block(j, l, E, u, 0.0);
  }

  // global index space: (channel j, mesh node i) -> j*n + i, then one extra
  // index per open channel for its on-shell node
  const int dim = N * n + nopen;
  const auto chan_of = [&](int g) { return g < N * n ? g / n : sol.open[g - N * n]; };
  const auto upos_of = [&](int g) { return g < N * n ? g % n : n + (g - N * n); };

  Eigen::MatrixXcd V(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      V(r, c) = blocks[chan_of(r)][chan_of(c)](upos_of(r), upos_of(c));
    }
  }

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(dim, dim);
  for (int l = 0; l < N; ++l) {
    for (int b = 0; b < n; ++b) {
      const double den = E - channels[l].energy(cplx(mesh.q[b])).real();
      if (std::abs(den) < 1e-8 * (std::abs(E) + 1.0)) {
        throw std::domain_error("onshell_real_axis: mesh node coincides with the on-shell point; reposition the mesh");
      }
      const cplx colf = mesh.w[b] * mesh.q[b] * mesh.q[b] / (2.0 * pi * pi) / den;
      A.col(l * n + b) -= V.col(l * n + b) * colf;
    }
  }
  for (int a = 0; a < nopen; ++a) {
    const int c = sol.open[a];
    const double k0 = sol.k[a];
    const double depsdk = channels[c].denergy(cplx(k0)).real();
    const double mu_eff = k0 / depsdk;
    double pv = 0.0;  // principal-value compensation sum over the mesh
    for (int b = 0; b < n; ++b) pv += mesh.w[b] / (k0 * k0 - mesh.q[b] * mesh.q[b]);
    const cplx cfac = -(k0 * k0 / (2.0 * pi * pi)) * 2.0 * mu_eff * pv -
                      I * k0 * k0 / (2.0 * pi * depsdk);
    A.col(N * n + a) -= V.col(N * n + a) * cfac;
  }

  const Eigen::MatrixXcd T = A.partialPivLu().solve(V);
  sol.T.resize(nopen, nopen);
  for (int a = 0; a < nopen; ++a) {
    for (int b = 0; b < nopen; ++b) sol.T(a, b) = T(N * n + a, N * n + b);
  }
  for (int a = 0; a < nopen; ++a) sol.rho.push_back(channels[sol.open[a]].rho(E));
  return sol;
}

double optical_residual(const OnshellSolution& sol) {
  const int nopen = static_cast<int>(sol.open.size());
  double worst = 0.0;
  double tsum = 0.0;
  for (int a = 0; a < nopen; ++a) {
    for (int b = 0; b < nopen; ++b) tsum += std::norm(sol.T(a, b));
  }
  if (tsum == 0.0) return 0.0;
  for (int a = 0; a < nopen; ++a) {
    double flux = 0.0;
    for (int b = 0; b < nopen; ++b) flux += sol.rho[b] * std::norm(sol.T(a, b)) / 2.0;
    worst = std::max(worst, std::abs(sol.T(a, a).imag() + flux));
  }
  return worst / tsum;
}

Eigen::MatrixXcd smatrix(const OnshellSolution& sol) {
  const int nopen = static_cast<int>(sol.open.size());
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(nopen, nopen);
  for (int a = 0; a < nopen; ++a) {
    for (int b = 0; b < nopen; ++b) {
      S(a, b) -= I * std::sqrt(sol.rho[a] * sol.rho[b]) * sol.T(a, b);
    }
  }
  return S;
}

}  // namespace lswave
