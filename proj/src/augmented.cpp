#include "pinsker/augmented.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "pinsker/detail/scalar_search.hpp"

namespace pinsker {

namespace {

constexpr int kMaxDrawAttempts = 10;
constexpr double kRankTolerance = 1e-10;
constexpr int kRefineSteps = 100;
constexpr int kRefineStall = 10;
constexpr double kRefineInitialStep = 0.1;
constexpr double kLogVarianceTolerance = 1e-10;
constexpr std::uint64_t kRefineStream = std::numeric_limits<std::uint64_t>::max();

Eigen::MatrixXd standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

// Orthonormalises the rows in place. Returns false on (numerical) rank deficiency.
bool orthonormalize_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double original = m.row(i).norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < i; ++k) m.row(i) -= m.row(i).dot(m.row(k)) * m.row(k);
    }
    const double norm = m.row(i).norm();
    if (!(norm > kRankTolerance * std::max(original, 1.0))) return false;
    m.row(i) /= norm;
  }
  return true;
}

void require_line_target(const GaussianND& q, const StiefelFrame& frame) {
  if (frame.source_dim() != q.dim()) {
    throw std::invalid_argument("frame has " + std::to_string(frame.source_dim()) +
                                " columns but the Gaussian has dimension " + std::to_string(q.dim()));
  }
}

double projected_variance(const GaussianND& q, const Eigen::RowVectorXd& v) {
  return (v * q.sigma() * v.transpose())(0, 0);
}

double evaluate_objective(const Gaussian1D& p, double variance, SearchObjective objective, TvConvention conv) {
  const Gaussian1D beta(p.mu(), variance);
  return objective == SearchObjective::Kl ? kl_gaussian_1d(p, beta) : tv_gaussian_1d(p, beta, conv);
}

StiefelFrame mean_matched_frame(const Gaussian1D& p, const GaussianND& q, const Eigen::RowVectorXd& v) {
  Eigen::VectorXd b(1);
  b(0) = p.mu() - v.dot(q.nu());
  return StiefelFrame(Eigen::MatrixXd(v), std::move(b));
}

}  // namespace

namespace detail {

std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

StiefelFrame::StiefelFrame(Eigen::MatrixXd v, Eigen::VectorXd b) : v_(std::move(v)), b_(std::move(b)) {
  if (v_.rows() < 1 || v_.rows() > v_.cols()) {
    throw std::invalid_argument("Stiefel frame needs 1 <= d <= n");
  }
  if (b_.size() != v_.rows()) throw std::invalid_argument("frame offset length must equal the target dimension");
  const Eigen::MatrixXd gram = v_ * v_.transpose();
  const double defect = (gram - Eigen::MatrixXd::Identity(v_.rows(), v_.rows())).norm();
  if (!(defect <= kOrthonormalityTolerance)) {
    throw std::invalid_argument("frame rows are not orthonormal (|V V^T - I| = " + std::to_string(defect) + ")");
  }
}

GaussianND pushforward_gaussian(const GaussianND& q, const StiefelFrame& frame) {
  require_line_target(q, frame);
  Eigen::VectorXd mean = frame.v() * q.nu() + frame.b();
  Eigen::MatrixXd cov = frame.v() * q.sigma() * frame.v().transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianND(std::move(mean), std::move(cov));
}

Gaussian1D pushforward_gaussian_1d(const GaussianND& q, const StiefelFrame& frame) {
  if (frame.target_dim() != 1) throw std::invalid_argument("frame does not project onto a line");
  require_line_target(q, frame);
  return Gaussian1D(frame.v().row(0).dot(q.nu()) + frame.b()(0), projected_variance(q, frame.v().row(0)));
}

StiefelFrame sample_stiefel(int d, int n, std::uint64_t seed) {
  if (d < 1 || d > n) throw std::invalid_argument("sample_stiefel needs 1 <= d <= n");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kMaxDrawAttempts; ++attempt) {
    Eigen::MatrixXd m = standard_normal_matrix(d, n, rng);
    if (orthonormalize_rows(m)) return StiefelFrame(std::move(m), Eigen::VectorXd::Zero(d));
  }
  throw std::runtime_error("sample_stiefel: rank-deficient draw in every attempt");
}

double gaussian_akl(const Gaussian1D& p, const GaussianND& q) {
  const double s = p.sigma2();
  const double zeta_min = q.min_eigenvalue();
  const double zeta_max = q.max_eigenvalue();
  double target;
  if (s < zeta_min) {
    target = zeta_min;
  } else if (s > zeta_max) {
    target = zeta_max;
  } else {
    return 0.0;
  }
  return std::max(0.5 * (s / target - 1.0 + std::log(target / s)), 0.0);
}

ProjectionSearchResult search_projection_divergence(const Gaussian1D& p, const GaussianND& q,
                                                    SearchObjective objective, TvConvention conv, int budget,
                                                    std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("search budget must be at least 1");
  const int n = static_cast<int>(q.dim());

  Eigen::RowVectorXd best_v;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < budget; ++i) {
    const StiefelFrame frame = sample_stiefel(1, n, detail::sub_seed(seed, static_cast<std::uint64_t>(i)));
    const double value = evaluate_objective(p, projected_variance(q, frame.v().row(0)), objective, conv);
    if (value < best_value) {
      best_value = value;
      best_v = frame.v().row(0);
    }
  }
  const double sampled_value = best_value;

  std::mt19937_64 rng(detail::sub_seed(seed, kRefineStream));
  double step = kRefineInitialStep;
  int stall = 0;
  for (int iter = 0; iter < kRefineSteps; ++iter) {
    Eigen::MatrixXd candidate = standard_normal_matrix(1, n, rng);
    // Tangent direction at best_v, then retract back onto the sphere.
    candidate.row(0) -= candidate.row(0).dot(best_v) * best_v;
    candidate = (best_v + step * candidate.row(0)).eval();
    if (!orthonormalize_rows(candidate)) continue;
    const double value = evaluate_objective(p, projected_variance(q, candidate.row(0)), objective, conv);
    if (value < best_value) {
      best_value = value;
      best_v = candidate.row(0);
      stall = 0;
    } else if (++stall == kRefineStall) {
      step *= 0.5;
      stall = 0;
    }
  }

  StiefelFrame frame = mean_matched_frame(p, q, best_v);
  Gaussian1D witness(p.mu(), projected_variance(q, best_v));
  return ProjectionSearchResult{std::move(frame), best_value, sampled_value, budget, witness};
}

double atv_gaussian(const Gaussian1D& p, const GaussianND& q, TvConvention conv, int budget, std::uint64_t seed) {
  if (budget < 0) throw std::invalid_argument("search budget must be non-negative");
  const double log_lo = std::log(q.min_eigenvalue());
  const double log_hi = std::log(q.max_eigenvalue());
  auto tv_at = [&](double log_s) { return tv_gaussian_1d(p, Gaussian1D(p.mu(), std::exp(log_s)), conv); };

  const auto golden = detail::golden_section_minimize(tv_at, log_lo, log_hi, kLogVarianceTolerance);
  double value = golden.fx;
  // The variance closest to sigma^2 is always feasible and, by unimodality, optimal.
  const double nearest = std::clamp(p.sigma2(), q.min_eigenvalue(), q.max_eigenvalue());
  value = std::min(value, tv_gaussian_1d(p, Gaussian1D(p.mu(), nearest), conv));
  if (budget > 0) {
    value = std::min(value, search_projection_divergence(p, q, SearchObjective::Tv, conv, budget, seed).best_value);
  }
  return value;
}

}  // namespace pinsker
