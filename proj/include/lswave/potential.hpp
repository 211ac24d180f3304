#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "lswave/constants.hpp"
#include "lswave/numerics.hpp"

namespace lswave {

/// Linear energy law v(E) = v0 + v1 (E - E0) multiplying an interaction shape.
struct EnergyLaw {
  double v0 = 0.0;  // MeV
  double v1 = 0.0;  // dimensionless
  cplx E0 = 0.0;    // MeV

  cplx operator()(cplx E) const { return v0 + v1 * (E - E0); }
};

/// Controls for the oscillation-aware Fourier-Bessel projection. A momentum
/// column q is integrated with composite 64-point Gauss-Legendre panels; the
/// panel count is the smallest power of two >= m_min such that the Bessel
/// phase advance per panel, 2 q r_max / (hbarc m), stays below
/// phase_per_panel. Columns that would need more than m_max panels lie so
/// deep in the mapped tail that the projected element is below double
/// precision; they are set to zero.
struct ProjectionOptions {
  double phase_per_panel = 50.0;  // radians of 2 q r / hbarc per panel
  int m_min = 8;
  int m_max = 1024;
};

/// Rotated-contour Fourier-Bessel projection of a local radial profile onto
/// partial wave L over one list of real momenta (MeV):
///   V_L(q'_a e^{-i theta}, q_b e^{-i theta})
///     = 4 pi e^{3 i theta} / hbarc^3
///       * Integral dr r^2 j_L(q'_a r / hbarc) f(r e^{i theta}) j_L(q_b r / hbarc),
/// with r in fm on [0, rmax] and f the profile in MeV. The result is
/// symmetric; the element (a, b) is integrated at the panel level demanded by
/// max(q_a, q_b).
Eigen::MatrixXcd project_local(int L, const std::vector<double>& q, double theta,
                               const std::function<cplx(cplx)>& profile_fm,
                               double rmax_fm, const ProjectionOptions& opt = {});

/// Same projection for a single pair of (possibly complex) momenta p', p:
///   4 pi e^{3 i theta} / hbarc^3
///     * Integral dr r^2 j_L(p' r e^{i theta}/hbarc) f(r e^{i theta}) j_L(p r e^{i theta}/hbarc).
cplx project_local_pair(int L, cplx pprime, cplx p, double theta,
                        const std::function<cplx(cplx)>& profile_fm,
                        double rmax_fm, const ProjectionOptions& opt = {});

/// A partial-wave interaction between N coupled channels: matrix elements
/// V_L,jl(E; p', p) in MeV^-2 and their analytic energy derivative.
class InteractionModel {
 public:
  virtual ~InteractionModel() = default;

  virtual int num_channels() const = 0;
  virtual int angular_momentum() const = 0;

  /// V_L,jl(E; p', p) at arbitrary complex momenta; theta is the contour
  /// angle used for rotated-integral representations.
  virtual cplx element(int j, int l, cplx E, cplx pprime, cplx p, double theta) const = 0;
  virtual cplx element_dE(int j, int l, cplx E, cplx pprime, cplx p, double theta) const = 0;

  /// Matrix of V_L,jl(E; q_a e^{-i theta}, q_b e^{-i theta}) over a list of
  /// real momenta (MeV).
  virtual Eigen::MatrixXcd block(int j, int l, cplx E, const std::vector<double>& q,
                                 double theta) const = 0;
  virtual Eigen::MatrixXcd block_dE(int j, int l, cplx E, const std::vector<double>& q,
                                    double theta) const = 0;
};

/// Local coordinate-space interaction v(E) C_jl f(r) projected onto partial
/// wave L by the rotated-contour Fourier-Bessel integral. The shape matrix is
/// independent of E and is cached per (theta, momentum list).
class LocalPotential : public InteractionModel {
 public:
  LocalPotential(int L, Eigen::MatrixXd coupling, EnergyLaw law,
                 std::function<cplx(cplx)> profile_fm, double rmax_fm,
                 double theta_ceiling = pi / 4.0, ProjectionOptions opt = {});

  int num_channels() const override { return static_cast<int>(coupling_.rows()); }
  int angular_momentum() const override { return L_; }

  cplx element(int j, int l, cplx E, cplx pprime, cplx p, double theta) const override;
  cplx element_dE(int j, int l, cplx E, cplx pprime, cplx p, double theta) const override;
  Eigen::MatrixXcd block(int j, int l, cplx E, const std::vector<double>& q,
                         double theta) const override;
  Eigen::MatrixXcd block_dE(int j, int l, cplx E, const std::vector<double>& q,
                            double theta) const override;

  const EnergyLaw& law() const { return law_; }
  void set_law(const EnergyLaw& law) { law_ = law; }

 private:
  const Eigen::MatrixXcd& shape(const std::vector<double>& q, double theta) const;
  void check_theta(double theta) const;

  int L_;
  Eigen::MatrixXd coupling_;
  EnergyLaw law_;
  std::function<cplx(cplx)> profile_;
  double rmax_;
  double theta_ceiling_;
  ProjectionOptions opt_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<double, std::vector<double>>, Eigen::MatrixXcd> shape_cache_;
};

/// Single-channel momentum-space interaction
///   Vtilde(q) = 4 pi beta Lambda^2 / ((q^2 + mu^2)(q^2 + Lambda^2)),
/// projected onto partial wave L by the angular integral
///   V_L(p', p) = 2 pi beta Lambda^2
///                Integral_{-1}^{1} dc P_L(c) / ((u + mu^2)(u + Lambda^2)),
/// u = p'^2 + p^2 - 2 p' p c. The integral is evaluated on composite
/// Gauss-Legendre panels refined geometrically toward the forward point
/// c = 1, where u + mu^2 can become small relative to the panel scale.
/// Energy independent.
class YukawaFormFactor : public InteractionModel {
 public:
  YukawaFormFactor(int L, double beta, double mu, double lambda_cap);

  int num_channels() const override { return 1; }
  int angular_momentum() const override { return L_; }

  cplx element(int j, int l, cplx E, cplx pprime, cplx p, double theta) const override;
  cplx element_dE(int, int, cplx, cplx, cplx, double) const override { return 0.0; }
  Eigen::MatrixXcd block(int j, int l, cplx E, const std::vector<double>& q,
                         double theta) const override;
  Eigen::MatrixXcd block_dE(int, int, cplx, const std::vector<double>& q,
                            double) const override {
    return Eigen::MatrixXcd::Zero(q.size(), q.size());
  }

  double beta() const { return beta_; }
  void set_beta(double beta);

 private:
  int L_;
  double beta_, mu_, lambda_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<double, std::vector<double>>, Eigen::MatrixXcd> cache_;
};

/// Separable single-channel interaction V(E; q', q) = f(q') f(q) / (E - m0)
/// with form factor f(q) = alpha lambda^2 / (q^2 + lambda^2). This is the
/// interaction a bare discrete state of mass m0 induces in its decay channel.
class SeparableBare : public InteractionModel {
 public:
  SeparableBare(double alpha, double lambda_cut, double m0)
      : alpha_(alpha), lambda_(lambda_cut), m0_(m0) {}

  int num_channels() const override { return 1; }
  int angular_momentum() const override { return 0; }

  cplx formfactor(cplx q) const { return alpha_ * lambda_ * lambda_ / (q * q + lambda_ * lambda_); }

  cplx element(int, int, cplx E, cplx pprime, cplx p, double) const override {
    return formfactor(pprime) * formfactor(p) / (E - m0_);
  }
  cplx element_dE(int, int, cplx E, cplx pprime, cplx p, double) const override {
    return -formfactor(pprime) * formfactor(p) / ((E - m0_) * (E - m0_));
  }
  Eigen::MatrixXcd block(int j, int l, cplx E, const std::vector<double>& q,
                         double theta) const override;
  Eigen::MatrixXcd block_dE(int j, int l, cplx E, const std::vector<double>& q,
                            double theta) const override;

 private:
  double alpha_, lambda_, m0_;
};

}  // namespace lswave
