#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "pinsker/measures.hpp"

namespace pinsker {

/// An affine map x -> V x + b from R^n to R^d where V has orthonormal rows
/// (a point on the Stiefel manifold O(d, n)).
class StiefelFrame {
 public:
  static constexpr double kOrthonormalityTolerance = 1e-10;

  StiefelFrame(Eigen::MatrixXd v, Eigen::VectorXd b);

  const Eigen::MatrixXd& v() const noexcept { return v_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }
  Eigen::Index target_dim() const noexcept { return v_.rows(); }
  Eigen::Index source_dim() const noexcept { return v_.cols(); }

 private:
  Eigen::MatrixXd v_;
  Eigen::VectorXd b_;
};

enum class SearchObjective { Kl, Tv };

struct ProjectionSearchResult {
  StiefelFrame best_frame;
  /// Objective at best_frame after local refinement.
  double best_value;
  /// Best objective among the random draws alone, before refinement.
  double sampled_value;
  int n_samples;
  /// The projected measure at best_frame.
  Gaussian1D witness;
};

/// Affine image of q under the frame: N(V nu + b, V Sigma V^T).
GaussianND pushforward_gaussian(const GaussianND& q, const StiefelFrame& frame);

/// pushforward_gaussian for a frame with a single row.
Gaussian1D pushforward_gaussian_1d(const GaussianND& q, const StiefelFrame& frame);

/// Random frame with orthonormal rows: Gram-Schmidt (two passes) applied to a
/// d x n matrix of standard normal draws, offset b = 0. Deterministic in seed.
StiefelFrame sample_stiefel(int d, int n, std::uint64_t seed);

/// Closed-form augmented KL divergence between N(mu, sigma^2) and N_n(nu, Sigma).
///
/// With s = sigma^2 and zeta_min <= zeta_max the extreme eigenvalues of Sigma:
///   s < zeta_min:  (1/2) [s / zeta_min - 1 + log(zeta_min / s)]
///   s > zeta_max:  (1/2) [s / zeta_max - 1 + log(zeta_max / s)]
///   otherwise:     0
/// The second case is sometimes printed with the condition sigma > sqrt(zeta_min);
/// that reading overlaps the first and zero cases and disagrees with the
/// projection search, so the condition used here is s > zeta_max.
double gaussian_akl(const Gaussian1D& p, const GaussianND& q);

/// Monte-Carlo search over one-row frames for the projection of q closest to p.
///
/// Each of `budget` frames is drawn with its own sub-seed derived from `seed`,
/// the offset is chosen so the projected mean equals p's mean, and the best
/// frame is then polished by 100 steps of random tangent perturbations. The
/// result is an upper estimate of the augmented divergence. `conv` sets the
/// scale of TV values and is ignored for the KL objective.
ProjectionSearchResult search_projection_divergence(const Gaussian1D& p, const GaussianND& q,
                                                    SearchObjective objective, TvConvention conv, int budget,
                                                    std::uint64_t seed);

/// Augmented TV distance between N(mu, sigma^2) and N_n(nu, Sigma): the
/// smallest TV between p and N(mu, s) over s in [zeta_min, zeta_max], found by
/// golden-section search on log s. When budget > 0 the TV projection search is
/// also run and the smaller of the two feasible values is returned.
double atv_gaussian(const Gaussian1D& p, const GaussianND& q, TvConvention conv, int budget, std::uint64_t seed);

namespace detail {

/// splitmix64 finaliser applied to root + (index + 1) * golden-ratio constant.
std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index);

}  // namespace detail

}  // namespace pinsker
