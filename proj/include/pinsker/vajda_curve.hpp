#pragma once

#include <vector>

#include "pinsker/measures.hpp"

namespace pinsker {

/// Largest accepted curve parameter. Past it delta(t) sits within double
/// rounding of its asymptote 2 and sinh(t)^2 overflows.
inline constexpr double kMaxCurveParameter = 500.0;

/// Below this, sinh(t) - t and t cosh(t) - sinh(t) are summed from their power
/// series instead of being formed by cancelling subtraction.
inline constexpr double kSeriesThreshold = 1.0;

/// A point on the optimal KL-versus-TV lower-bound curve, parametrised by the
/// slope t = dL/d(delta). `delta` is in the variational convention.
struct CurvePoint {
  double t;
  double delta;
  double l_value;
};

struct GammaSearchResult {
  double gamma_star;
  double value;
};

CurvePoint curve_at_parameter(double t);

/// delta(kMaxCurveParameter): the largest variational TV that can be inverted.
double max_curve_delta();

/// True when delta(t) was verified strictly increasing over 10^4 log-spaced
/// samples of (0, kMaxCurveParameter]. Computed once.
bool curve_is_monotone();

/// The curve point whose delta matches the given TV (after conversion to the
/// variational convention). Bisection on t runs in extended precision until
/// the bracket collapses.
/// delta == 0 maps to the limit point t = 0.
CurvePoint invert_curve(double delta, TvConvention conv);

/// Minimal KL divergence among pairs at the given TV distance, by bisection
/// on the curve parameter. Throws std::domain_error for delta outside
/// [0, max_curve_delta()) once converted to the variational convention.
double vajda_lower_bound(double delta, TvConvention conv);

/// Same function via the explicit minimisation over gamma in [delta-2, 2-delta],
/// solved with golden-section search.
GammaSearchResult reid_lower_bound(double delta, TvConvention conv);

/// The objective minimised by reid_lower_bound, exposed for tests.
double reid_objective(double delta, double gamma);

/// delta^2/2 + delta^4/36 + delta^6/270 + 221 delta^8/340200, delta variational.
double poly_lower_bound(double delta);

/// The delta >= 0 with poly_lower_bound(delta) == xi.
double invert_poly_bound(double xi);

/// Curve points on a log-spaced t grid in [t_min, t_max].
std::vector<CurvePoint> emit_curve(double t_min, double t_max, int n_points);

}  // namespace pinsker
