#include "pinsker/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pinsker {

namespace {

constexpr double kTvQuadratureTolerance = 1e-9;
constexpr unsigned kTvQuadratureMaxDepth = 20;

void require_same_support(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distributions have different support sizes (" +
                                std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
}

double tv_upper_limit(TvConvention conv) { return conv == TvConvention::Sup ? 1.0 : 2.0; }

double normal_pdf(double x, const Gaussian1D& g) {
  const double z = x - g.mu();
  return std::exp(-0.5 * z * z / g.sigma2()) / std::sqrt(2.0 * std::numbers::pi * g.sigma2());
}

}  // namespace

std::string_view to_string(TvConvention conv) {
  return conv == TvConvention::Sup ? "sup" : "variational";
}

TvConvention parse_tv_convention(std::string_view text) {
  if (text == "sup") return TvConvention::Sup;
  if (text == "variational") return TvConvention::Variational;
  throw std::invalid_argument("unknown TV convention '" + std::string(text) +
                              "' (expected 'sup' or 'variational')");
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution has empty support");
  for (double v : probs_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("distribution entries must be finite and non-negative");
    }
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument("distribution entries sum to " + std::to_string(total) + ", not 1");
  }
}

Gaussian1D::Gaussian1D(double mu, double sigma2) : mu_(mu), sigma2_(sigma2) {
  if (!std::isfinite(mu)) throw std::invalid_argument("Gaussian mean must be finite");
  if (!std::isfinite(sigma2) || sigma2 <= 0.0) {
    throw std::invalid_argument("Gaussian variance must be finite and positive");
  }
}

GaussianND::GaussianND(Eigen::VectorXd nu, Eigen::MatrixXd sigma) : nu_(std::move(nu)) {
  const Eigen::Index n = nu_.size();
  if (n == 0) throw std::invalid_argument("Gaussian dimension must be at least 1");
  if (sigma.rows() != n || sigma.cols() != n) {
    throw std::invalid_argument("covariance shape does not match mean dimension");
  }
  if (!nu_.allFinite() || !sigma.allFinite()) {
    throw std::invalid_argument("Gaussian parameters must be finite");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw std::invalid_argument("covariance matrix is not symmetric");
  }
  sigma_ = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::invalid_argument("eigendecomposition of covariance failed");
  eigenvalues_ = solver.eigenvalues();
  if (eigenvalues_(0) <= 0.0) throw std::invalid_argument("covariance matrix is not positive definite");
}

DensityBounds::DensityBounds(double inf, double sup) : ess_inf(inf), ess_sup(sup) {
  // 0 <= m <= 1 <= M: dP/dQ integrates to one under Q.
  if (!(inf >= 0.0 && inf <= 1.0)) throw std::invalid_argument("density lower bound must lie in [0, 1]");
  if (!(sup >= 1.0 && std::isfinite(sup))) {
    throw std::invalid_argument("density upper bound must be finite and at least 1");
  }
}

double kl_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  require_same_support(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can leave a tiny negative value for p ~= q.
  return std::max(sum, 0.0);
}

double tv_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q, TvConvention conv) {
  require_same_support(p, q);
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  l1 = std::min(l1, 2.0);
  return conv == TvConvention::Variational ? l1 : 0.5 * l1;
}

double kl_gaussian_1d(const Gaussian1D& a, const Gaussian1D& b) {
  const double ratio = a.sigma2() / b.sigma2();
  const double shift = a.mu() - b.mu();
  const double value = 0.5 * (ratio - 1.0 - std::log(ratio) + shift * shift / b.sigma2());
  return std::max(value, 0.0);
}

std::vector<double> density_crossings(const Gaussian1D& a, const Gaussian1D& b) {
  // log f_a(x) = log f_b(x)  <=>  A x^2 + B x + C = 0
  const double va = a.sigma2(), vb = b.sigma2();
  const double A = 0.5 / vb - 0.5 / va;
  const double B = a.mu() / va - b.mu() / vb;
  const double C = 0.5 * b.mu() * b.mu() / vb - 0.5 * a.mu() * a.mu() / va + 0.5 * std::log(vb / va);

  std::vector<double> roots;
  if (A == 0.0) {
    if (B != 0.0) roots.push_back(-C / B);
    return roots;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return roots;
  const double sq = std::sqrt(disc);
  // Numerically stable pair of quadratic roots.
  const double qq = -0.5 * (B + std::copysign(sq, B));
  if (qq != 0.0) {
    roots.push_back(qq / A);
    roots.push_back(C / qq);
  } else {
    roots.push_back(0.0);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

double tv_gaussian_1d(const Gaussian1D& a, const Gaussian1D& b, TvConvention conv) {
  if (a == b) return 0.0;

  // Tails beyond 40 standard deviations of both densities carry < 1e-300 mass.
  const double spread = 40.0 * std::sqrt(std::max(a.sigma2(), b.sigma2()));
  const double lo = std::min(a.mu(), b.mu()) - spread;
  const double hi = std::max(a.mu(), b.mu()) + spread;

  std::vector<double> knots{lo};
  for (double x : density_crossings(a, b)) {
    if (x > lo && x < hi) knots.push_back(x);
  }
  knots.push_back(hi);

  auto integrand = [&](double x) { return normal_pdf(x, a) - normal_pdf(x, b); };
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;

  double l1 = 0.0;
  double total_error = 0.0;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    // Boost stops on error <= tol * integral of |f|; a fixed relative tol is out of
    // reach when the two densities nearly coincide, so derive it from a coarse L1.
    double coarse_l1 = 0.0;
    Quadrature::integrate(integrand, knots[k], knots[k + 1], 0, 0.0, nullptr, &coarse_l1);
    const double abs_target = kTvQuadratureTolerance * 1e-3;
    const double rel_tol = std::max(1e-14, abs_target / std::max(coarse_l1, 1e-300));
    double error = 0.0;
    const double piece = Quadrature::integrate(integrand, knots[k], knots[k + 1], kTvQuadratureMaxDepth, rel_tol, &error);
    // The integrand has constant sign between consecutive crossings.
    l1 += std::abs(piece);
    total_error += error;
  }
  if (total_error > kTvQuadratureTolerance) {
    throw QuadratureError("Gaussian TV quadrature did not converge (error estimate " +
                              std::to_string(total_error) + ")",
                          total_error);
  }
  const double sup = std::clamp(0.5 * l1, 0.0, 1.0);
  return conv == TvConvention::Sup ? sup : 2.0 * sup;
}

DensityBounds density_bounds_discrete(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  require_same_support(p, q);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) {
      if (p[i] != 0.0) throw std::invalid_argument("p is not absolutely continuous with respect to q");
      continue;
    }
    const double r = p[i] / q[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  // Ratios equal to one up to rounding would otherwise violate m <= 1 <= M.
  return DensityBounds(std::min(lo, 1.0), std::max(hi, 1.0));
}

double convert_tv(double value, TvConvention from, TvConvention to) {
  if (!(value >= 0.0 && value <= tv_upper_limit(from))) {
    throw std::invalid_argument("TV value " + std::to_string(value) + " is outside the range of the '" +
                                std::string(to_string(from)) + "' convention");
  }
  if (from == to) return value;
  return to == TvConvention::Variational ? 2.0 * value : 0.5 * value;
}

}  // namespace pinsker
