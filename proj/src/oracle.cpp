#include "pinsker/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>

#include "pinsker/augmented.hpp"

namespace pinsker::oracle {

namespace {

constexpr double kResolutionStep = 1e-3;

long grid_points(double step) {
  const double inv = 1.0 / step;
  const long n = std::lround(inv);
  if (std::abs(inv - static_cast<double>(n)) > 1e-9 * inv) {
    throw std::invalid_argument("oracle grid step must divide 1");
  }
  return n;
}

double kl_term(double p, double q) {
  if (p == 0.0) return 0.0;
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return p * std::log(p / q);
}

// Integer L1 distances |i - j| that can satisfy |2 k / n - delta| <= tol for
// binary pairs, clipped to [0, n].
std::vector<long> feasible_binary_gaps(long n, double delta, double tol) {
  std::vector<long> gaps;
  const long lo = std::max(0L, static_cast<long>(std::floor((delta - tol) * n / 2.0)) - 1);
  const long hi = std::min(n, static_cast<long>(std::ceil((delta + tol) * n / 2.0)) + 1);
  for (long k = lo; k <= hi; ++k) {
    if (std::abs(2.0 * static_cast<double>(k) / static_cast<double>(n) - delta) <= tol) gaps.push_back(k);
  }
  return gaps;
}

double min_kl_binary(long n, double delta, double tol) {
  double best = std::numeric_limits<double>::infinity();
  bool feasible = false;
  const double dn = static_cast<double>(n);
  for (long k : feasible_binary_gaps(n, delta, tol)) {
    for (long i = 0; i <= n; ++i) {
      for (long j : {i - k, i + k}) {
        if (j < 0 || j > n) continue;
        feasible = true;
        const double p = i / dn;
        const double q = j / dn;
        best = std::min(best, kl_term(p, q) + kl_term((n - i) / dn, (n - j) / dn));
        if (k == 0) break;
      }
    }
  }
  if (!feasible) throw std::invalid_argument("no grid pair meets the TV constraint");
  return best;
}

double min_kl_ternary(long n, double delta, double tol) {
  struct Point {
    long a, b, c;
  };
  std::vector<Point> points;
  for (long a = 0; a <= n; ++a) {
    for (long b = 0; a + b <= n; ++b) points.push_back({a, b, n - a - b});
  }
  const double dn = static_cast<double>(n);
  double best = std::numeric_limits<double>::infinity();
  bool feasible = false;
  for (const Point& p : points) {
    for (const Point& q : points) {
      const long l1 = std::labs(p.a - q.a) + std::labs(p.b - q.b) + std::labs(p.c - q.c);
      if (std::abs(static_cast<double>(l1) / dn - delta) > tol) continue;
      feasible = true;
      const double kl = kl_term(p.a / dn, q.a / dn) + kl_term(p.b / dn, q.b / dn) + kl_term(p.c / dn, q.c / dn);
      best = std::min(best, kl);
    }
  }
  if (!feasible) throw std::invalid_argument("no grid pair meets the TV constraint");
  return best;
}

std::vector<double> random_simplex_point(std::size_t size, std::mt19937_64& rng) {
  std::exponential_distribution<double> exponential(1.0);
  std::vector<double> v(size);
  double total = 0.0;
  for (double& x : v) {
    // Exponential draws are positive with probability one; guard against an exact 0.
    do {
      x = exponential(rng);
    } while (x == 0.0);
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

}  // namespace

void OracleGridSpec::validate() const {
  if (support_size != 2 && support_size != 3) throw std::invalid_argument("oracle support size must be 2 or 3");
  if (!(step > 0.0 && step <= 0.5)) throw std::invalid_argument("oracle step must lie in (0, 0.5]");
  if (!(constraint_tol >= step)) throw std::invalid_argument("oracle constraint tolerance must be at least the step");
  grid_points(step);
}

double min_kl_at_tv(const OracleGridSpec& spec) {
  spec.validate();
  if (!spec.constraint_delta) throw std::invalid_argument("min_kl_at_tv needs a constraint delta");
  const long n = grid_points(spec.step);
  const double delta = *spec.constraint_delta;
  return spec.support_size == 2 ? min_kl_binary(n, delta, spec.constraint_tol)
                                : min_kl_ternary(n, delta, spec.constraint_tol);
}

FuzzReport fuzz_sandwich(int n_trials, int max_support, std::uint64_t seed) {
  if (n_trials < 1) throw std::invalid_argument("fuzz_sandwich needs at least one trial");
  if (max_support < 2) throw std::invalid_argument("fuzz_sandwich needs max_support >= 2");
  FuzzReport report;
  report.n_trials = n_trials;
  report.seed = seed;
  for (int trial = 0; trial < n_trials; ++trial) {
    std::mt19937_64 rng(detail::sub_seed(seed, static_cast<std::uint64_t>(trial)));
    std::uniform_int_distribution<int> support(2, max_support);
    const auto size = static_cast<std::size_t>(support(rng));
    std::vector<double> p = random_simplex_point(size, rng);
    std::vector<double> q = random_simplex_point(size, rng);
    const SandwichReport r = check_sandwich_same_dim(DiscreteDistribution(p), DiscreteDistribution(q));
    if (!r.all_hold) report.violations.push_back({trial, std::move(p), std::move(q), r});
  }
  return report;
}

double max_reverse_pinsker_excess(TvConvention conv, double step) {
  const long n = grid_points(step);
  const double dn = static_cast<double>(n);
  double worst = -std::numeric_limits<double>::infinity();
  for (long i = 1; i < n; ++i) {
    for (long j = 1; j < n; ++j) {
      if (i == j) continue;
      const DiscreteDistribution p({i / dn, (n - i) / dn});
      const DiscreteDistribution q({j / dn, (n - j) / dn});
      const double kl = kl_discrete(p, q);
      const double upper = tv_discrete(p, q, conv) * reverse_pinsker_slope(density_bounds_discrete(p, q));
      // Relative slack for rounding in the two evaluations.
      worst = std::max(worst, kl - upper - 1e-12 * std::max(1.0, kl));
    }
  }
  return worst;
}

TvConvention resolve_tv_convention() {
  for (TvConvention conv : {TvConvention::Sup, TvConvention::Variational}) {
    if (max_reverse_pinsker_excess(conv, kResolutionStep) <= 0.0) return conv;
  }
  throw std::logic_error("reverse Pinsker bound fails on the binary grid under both TV conventions");
}

}  // namespace pinsker::oracle
