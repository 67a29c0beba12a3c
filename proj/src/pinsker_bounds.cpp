#include "pinsker/pinsker_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pinsker/augmented.hpp"
#include "pinsker/vajda_curve.hpp"

namespace pinsker {

namespace {

// M log M / (M - 1), written with u = M - 1 to keep precision near M = 1.
double upper_ratio_term(double big_m) {
  const double u = big_m - 1.0;
  return (1.0 + u) * std::log1p(u) / u;
}

// m log m / (1 - m). The log1p form only pays off near m = 1; for tiny m,
// 1 - m rounds to 1 and log1p(-1) would be -inf.
double lower_ratio_term(double small_m) {
  const double w = 1.0 - small_m;
  const double log_m = small_m < 0.5 ? std::log(small_m) : std::log1p(-w);
  return small_m * log_m / w;
}

// Lower-bound curve value at a variational TV. The parametric inversion
// saturates just short of 2; the explicit minimisation covers the rest.
double lower_bound_curve(double delta_var) {
  if (delta_var < max_curve_delta()) return vajda_lower_bound(delta_var, TvConvention::Variational);
  return reid_lower_bound(delta_var, TvConvention::Variational).value;
}

}  // namespace

double reverse_pinsker(double delta, TvConvention conv, const DensityBounds& bounds) {
  const double d = convert_tv(delta, conv, kReversePinskerConvention);
  if (!(bounds.ess_inf > 0.0)) {
    throw std::domain_error("reverse Pinsker bound needs an essential infimum m > 0");
  }
  if (!std::isfinite(bounds.ess_sup)) {
    throw std::domain_error("reverse Pinsker bound needs a finite essential supremum M");
  }
  if (bounds.ess_inf == 1.0 || bounds.ess_sup == 1.0) {
    if (d != 0.0) {
      throw std::domain_error("m = 1 or M = 1 forces P = Q, so the TV distance must be 0");
    }
    return 0.0;
  }
  return std::max(d * reverse_pinsker_slope(bounds), 0.0);
}

double reverse_pinsker_slope(const DensityBounds& bounds) {
  if (!(bounds.ess_inf > 0.0 && bounds.ess_inf < 1.0 && bounds.ess_sup > 1.0 && std::isfinite(bounds.ess_sup))) {
    throw std::domain_error("reverse Pinsker slope needs 0 < m < 1 < M < infinity");
  }
  return upper_ratio_term(bounds.ess_sup) + lower_ratio_term(bounds.ess_inf);
}

double augmented_upper_bound(double delta, TvConvention conv, const AugmentedDensityBounds& bounds) {
  return std::max(reverse_pinsker(delta, conv, bounds.emb), reverse_pinsker(delta, conv, bounds.proj));
}

SandwichReport make_sandwich_report(double poly_lb, double vajda_lb, double divergence, double upper) {
  const double tol = SandwichReport::kTolerance;
  const bool holds = poly_lb <= vajda_lb + tol && vajda_lb <= divergence + tol && divergence <= upper + tol;
  return SandwichReport{poly_lb, vajda_lb, divergence, upper, holds};
}

SandwichReport check_sandwich_same_dim(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  const DensityBounds bounds = density_bounds_discrete(p, q);
  const double delta_var = tv_discrete(p, q, TvConvention::Variational);
  // A relative density touching 0 leaves the bounded-density class; no finite upper bound applies.
  const double upper = bounds.ess_inf > 0.0 ? reverse_pinsker(delta_var, TvConvention::Variational, bounds)
                                            : std::numeric_limits<double>::infinity();
  return make_sandwich_report(poly_lower_bound(delta_var), lower_bound_curve(delta_var), kl_discrete(p, q),
                              upper);
}

SandwichReport check_sandwich_augmented(const Gaussian1D& p, const GaussianND& q,
                                        const AugmentedDensityBounds& bounds, double atv, TvConvention conv) {
  const double delta_var = convert_tv(atv, conv, TvConvention::Variational);
  return make_sandwich_report(poly_lower_bound(delta_var), lower_bound_curve(delta_var), gaussian_akl(p, q),
                              augmented_upper_bound(atv, conv, bounds));
}

}  // namespace pinsker
