#pragma once

#include "pinsker/measures.hpp"

namespace pinsker {

/// TV convention in which the reverse-Pinsker bound is stated. The bound
/// delta * (M log M / (M - 1) + m log m / (1 - m)) is tight when delta is
/// sup_A |P(A) - Q(A)|; oracle::resolve_tv_convention re-derives this from a
/// binary grid and the test suite pins the two together.
inline constexpr TvConvention kReversePinskerConvention = TvConvention::Sup;

/// Density-ratio bounds for the two sides of a different-dimension pair:
/// `emb` bounds d(alpha)/dQ for the optimal embedding alpha of P, `proj`
/// bounds dP/d(beta) for the optimal projection beta of Q.
struct AugmentedDensityBounds {
  DensityBounds emb;
  DensityBounds proj;
};

/// Outcome of checking poly_lb <= vajda_lb <= divergence <= upper.
struct SandwichReport {
  static constexpr double kTolerance = 1e-9;

  double poly_lb;
  double vajda_lb;
  double divergence;
  double upper;
  bool all_hold;
};

/// Largest KL divergence over pairs with TV `delta` whose relative density
/// takes values in [m, M]:
///
///   delta * ( M log M / (M - 1) + m log m / (1 - m) )
///
/// with delta in kReversePinskerConvention. The value is linear in delta. If m
/// or M equals 1 the pair is forced to be identical, so only delta == 0 is
/// accepted and the result is 0.
double reverse_pinsker(double delta, TvConvention conv, const DensityBounds& bounds);

/// The slope M log M / (M - 1) + m log m / (1 - m) of reverse_pinsker in delta.
/// Requires 0 < m < 1 < M < infinity.
double reverse_pinsker_slope(const DensityBounds& bounds);

/// max(U1, U2): reverse_pinsker evaluated with the embedding-side and the
/// projection-side density bounds.
double augmented_upper_bound(double delta, TvConvention conv, const AugmentedDensityBounds& bounds);

/// Builds a report from the four values, applying SandwichReport::kTolerance.
SandwichReport make_sandwich_report(double poly_lb, double vajda_lb, double divergence, double upper);

/// Same-dimension chain for a discrete pair p << q.
SandwichReport check_sandwich_same_dim(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Different-dimension chain for a 1-D Gaussian against an n-D Gaussian.
/// `atv` is the augmented TV in convention `conv`; the divergence is the
/// closed-form augmented KL. The checker reports; it does not enforce.
SandwichReport check_sandwich_augmented(const Gaussian1D& p, const GaussianND& q,
                                        const AugmentedDensityBounds& bounds, double atv, TvConvention conv);

}  // namespace pinsker
