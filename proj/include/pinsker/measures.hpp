#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pinsker {

/// Which scaling of the total-variation distance a value is expressed in.
///
/// `Sup` is sup_A |P(A) - Q(A)|, with range [0, 1].
/// `Variational` is the L1 distance sum_i |p_i - q_i|, twice `Sup`, with range [0, 2].
enum class TvConvention { Sup, Variational };

std::string_view to_string(TvConvention conv);
TvConvention parse_tv_convention(std::string_view text);

/// Thrown when adaptive quadrature cannot reach its error target.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

/// Probability vector on a finite support.
class DiscreteDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit DiscreteDistribution(std::vector<double> probs);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

class Gaussian1D {
 public:
  Gaussian1D(double mu, double sigma2);

  double mu() const noexcept { return mu_; }
  double sigma2() const noexcept { return sigma2_; }

  friend bool operator==(const Gaussian1D&, const Gaussian1D&) = default;

 private:
  double mu_;
  double sigma2_;
};

/// Multivariate normal N_n(nu, sigma). The covariance is symmetrised on
/// construction and its eigenvalues are cached in ascending order.
class GaussianND {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  GaussianND(Eigen::VectorXd nu, Eigen::MatrixXd sigma);

  Eigen::Index dim() const noexcept { return nu_.size(); }
  const Eigen::VectorXd& nu() const noexcept { return nu_; }
  const Eigen::MatrixXd& sigma() const noexcept { return sigma_; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  double min_eigenvalue() const noexcept { return eigenvalues_(0); }
  double max_eigenvalue() const noexcept { return eigenvalues_(eigenvalues_.size() - 1); }

 private:
  Eigen::VectorXd nu_;
  Eigen::MatrixXd sigma_;
  Eigen::VectorXd eigenvalues_;
};

/// Essential infimum and supremum of a relative density dP/dQ.
///
/// Construction allows ess_inf == 0 so that densities vanishing on part of the
/// support can be reported; the reverse-Pinsker routines reject that case.
struct DensityBounds {
  double ess_inf;
  double ess_sup;

  DensityBounds(double inf, double sup);
};

double kl_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q);
double tv_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q, TvConvention conv);

double kl_gaussian_1d(const Gaussian1D& a, const Gaussian1D& b);

/// (1/2) * integral |f_a - f_b| (doubled under `Variational`), integrated with
/// adaptive Gauss-Kronrod between the points where the two densities cross.
/// Throws QuadratureError if the absolute error estimate exceeds 1e-9.
double tv_gaussian_1d(const Gaussian1D& a, const Gaussian1D& b, TvConvention conv);

/// Points where the densities of a and b are equal, sorted ascending (0, 1 or 2 of them).
std::vector<double> density_crossings(const Gaussian1D& a, const Gaussian1D& b);

DensityBounds density_bounds_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q);

double convert_tv(double value, TvConvention from, TvConvention to);

}  // namespace pinsker
