#include "pinsker/vajda_curve.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "pinsker/detail/scalar_search.hpp"

namespace pinsker {

namespace {

constexpr double kGammaTolerance = 1e-12;
constexpr double kGammaEndpointClamp = 1e-13;
constexpr int kMonotoneSamples = 10000;
constexpr double kMonotoneTMin = 1e-6;

using Extended = long double;

// sinh(t) - t and t cosh(t) - sinh(t). Both are O(t^3) near 0, where the
// direct forms cancel; there their power series have only positive terms.
struct OddRemainders {
  Extended sinh_minus_t;
  Extended t_cosh_minus_sinh;
};

OddRemainders odd_remainders(Extended t) {
  if (t >= kSeriesThreshold) {
    const Extended sh = std::sinh(t);
    return {sh - t, t * std::cosh(t) - sh};
  }
  // Term k is t^(2k+1) / (2k+1)!; the second series weights it by 2k.
  const Extended t2 = t * t;
  Extended term = t * t2 / 6;
  Extended a = 0, b = 0;
  for (int k = 1; k < 40; ++k) {
    a += term;
    b += 2 * k * term;
    if (term <= a * 1e-22L) break;
    term *= t2 / ((2 * k + 2) * (2 * k + 3));
  }
  return {a, b};
}

Extended curve_delta_ext(Extended t) {
  const auto [a, b] = odd_remainders(t);
  const Extended sh = t + a;
  // Langevin function coth(t) - 1/t and its complement 1 - L(t); the second
  // form avoids cancellation as L(t) -> 1.
  const Extended langevin = b / (t * sh);
  const Extended complement = t < kSeriesThreshold ? 1 - langevin : (sh - t * std::exp(-t)) / (t * sh);
  return t * complement * (1 + langevin);
}

Extended curve_l_value_ext(Extended t) {
  const auto [a, b] = odd_remainders(t);
  const Extended sh = t + a;
  // log(t / sinh t) + (t coth t - 1) + (1 - t^2 / sinh^2 t)
  return -std::log1p(a / t) + b / sh + a * (sh + t) / (sh * sh);
}

double curve_delta(double t) { return static_cast<double>(curve_delta_ext(t)); }

void require_monotone_curve() {
  if (!curve_is_monotone()) {
    std::fprintf(stderr,
                 "pinsker: delta(t) failed the monotonicity check on (0, %g]; "
                 "curve inversion is not well defined\n",
                 kMaxCurveParameter);
    std::abort();
  }
}

double to_variational(double delta, TvConvention conv) {
  if (!std::isfinite(delta) || delta < 0.0) {
    throw std::domain_error("TV value must be finite and non-negative, got " + std::to_string(delta));
  }
  if (conv == TvConvention::Sup && delta > 1.0) {
    throw std::domain_error("TV value " + std::to_string(delta) + " exceeds 1 in the sup convention");
  }
  return conv == TvConvention::Sup ? 2.0 * delta : delta;
}

// c * log(num / den) with the conventions 0 * log(.) = 0 and log(0/0) = 0.
double weighted_log_ratio(double c, double num, double den) {
  if (c == 0.0) return 0.0;
  if (num == 0.0 && den == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return c * std::log(num / den);
}

}  // namespace

CurvePoint curve_at_parameter(double t) {
  if (!(t > 0.0)) throw std::domain_error("curve parameter must be positive");
  if (t > kMaxCurveParameter) {
    throw std::domain_error("curve parameter " + std::to_string(t) + " exceeds the supported maximum " +
                            std::to_string(kMaxCurveParameter));
  }
  return CurvePoint{t, curve_delta(t), static_cast<double>(curve_l_value_ext(t))};
}

double max_curve_delta() {
  static const double value = curve_delta(kMaxCurveParameter);
  return value;
}

bool curve_is_monotone() {
  static const bool monotone = [] {
    const double log_ratio = std::log(kMaxCurveParameter / kMonotoneTMin);
    double previous = 0.0;
    for (int i = 0; i < kMonotoneSamples; ++i) {
      const double t = i + 1 == kMonotoneSamples
                           ? kMaxCurveParameter
                           : kMonotoneTMin * std::exp(log_ratio * i / (kMonotoneSamples - 1));
      const double delta = curve_delta(t);
      if (!(delta > previous)) return false;
      previous = delta;
    }
    return true;
  }();
  return monotone;
}

CurvePoint invert_curve(double delta, TvConvention conv) {
  require_monotone_curve();
  const double target = to_variational(delta, conv);
  if (target == 0.0) return CurvePoint{0.0, 0.0, 0.0};
  if (target >= max_curve_delta()) {
    throw std::domain_error("variational TV " + std::to_string(target) +
                            " is at or beyond the numerically invertible range (the lower bound "
                            "diverges as TV -> 2; limit is " +
                            std::to_string(max_curve_delta()) + ")");
  }
  const Extended t = detail::bisect_increasing(curve_delta_ext, static_cast<Extended>(target), Extended{0},
                                               static_cast<Extended>(kMaxCurveParameter), Extended{0});
  return CurvePoint{static_cast<double>(t), static_cast<double>(curve_delta_ext(t)),
                    static_cast<double>(curve_l_value_ext(t))};
}

double vajda_lower_bound(double delta, TvConvention conv) { return invert_curve(delta, conv).l_value; }

double reid_objective(double delta, double gamma) {
  if (gamma < delta - 2.0 || gamma > 2.0 - delta) {
    throw std::domain_error("gamma outside [delta - 2, 2 - delta]");
  }
  const double first =
      weighted_log_ratio((delta + 2.0 - gamma) / 4.0, gamma - 2.0 - delta, gamma - 2.0 + delta);
  const double second =
      weighted_log_ratio((gamma + 2.0 - delta) / 4.0, gamma + 2.0 - delta, gamma + 2.0 + delta);
  return first + second;
}

GammaSearchResult reid_lower_bound(double delta, TvConvention conv) {
  const double d = to_variational(delta, conv);
  if (d >= 2.0) throw std::domain_error("variational TV must be below 2");
  const double lo = d - 2.0;
  const double hi = 2.0 - d;
  const double clamp = kGammaEndpointClamp * (hi - lo);
  const auto best = detail::golden_section_minimize([d](double g) { return reid_objective(d, g); },
                                                    lo + clamp, hi - clamp, kGammaTolerance);
  return GammaSearchResult{best.x, std::max(best.fx, 0.0)};
}

double poly_lower_bound(double delta) {
  if (!std::isfinite(delta) || delta < 0.0) {
    throw std::domain_error("polynomial bound needs a finite non-negative delta");
  }
  // Extended precision keeps the result within rounding of the exact polynomial.
  const Extended u = static_cast<Extended>(delta) * delta;
  return static_cast<double>((((221.0L / 340200 * u + 1.0L / 270) * u + 1.0L / 36) * u + 0.5L) * u);
}

double invert_poly_bound(double xi) {
  if (!std::isfinite(xi) || xi < 0.0) throw std::domain_error("xi must be finite and non-negative");
  if (xi == 0.0) return 0.0;
  // poly(delta) >= delta^2 / 2, so the root lies below sqrt(2 xi).
  const double hi = std::sqrt(2.0 * xi);
  return detail::bisect_increasing(poly_lower_bound, xi, 0.0, hi, 0.0);
}

std::vector<CurvePoint> emit_curve(double t_min, double t_max, int n_points) {
  if (!(t_min > 0.0) || !(t_min < t_max) || t_max > kMaxCurveParameter) {
    throw std::invalid_argument("curve grid needs 0 < t_min < t_max <= " + std::to_string(kMaxCurveParameter));
  }
  if (n_points < 2) throw std::invalid_argument("curve grid needs at least two points");

  std::vector<CurvePoint> points;
  points.reserve(static_cast<std::size_t>(n_points));
  const double log_ratio = std::log(t_max / t_min);
  for (int i = 0; i < n_points; ++i) {
    const double t = i + 1 == n_points ? t_max : t_min * std::exp(log_ratio * i / (n_points - 1));
    points.push_back(curve_at_parameter(t));
    if (points.size() > 1 && !(points.back().delta > points[points.size() - 2].delta)) {
      throw std::logic_error("curve grid is too fine for double precision: delta not increasing at t = " +
                             std::to_string(t));
    }
  }
  return points;
}

}  // namespace pinsker
