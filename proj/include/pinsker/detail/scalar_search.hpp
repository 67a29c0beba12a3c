#pragma once

#include <cmath>
#include <stdexcept>

namespace pinsker::detail {

struct ScalarMinimum {
  double x;
  double fx;
};

/// Golden-section search for the minimum of a unimodal f on [a, b]. Stops once
/// the bracket is narrower than `tol`.
template <typename F>
ScalarMinimum golden_section_minimize(F&& f, double a, double b, double tol) {
  if (!(a <= b)) throw std::invalid_argument("golden-section bracket is inverted");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 500 && (b - a) > tol; ++iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

/// Bisection for x in [lo, hi] with f(x) = target, f strictly increasing.
/// Terminates when |f(x) - target| <= f_tol or the bracket stops shrinking.
template <typename T, typename F>
T bisect_increasing(F&& f, T target, T lo, T hi, T f_tol) {
  T mid = (lo + hi) / 2;
  for (int iter = 0; iter < 2000; ++iter) {
    mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    const T fm = f(mid);
    if (std::abs(fm - target) <= f_tol) break;
    if (fm < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace pinsker::detail
