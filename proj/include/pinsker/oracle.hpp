#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pinsker/measures.hpp"
#include "pinsker/pinsker_bounds.hpp"

namespace pinsker::oracle {

/// Grid of distribution pairs on a 2- or 3-point support. Probabilities are
/// multiples of `step`, which must divide 1.
struct OracleGridSpec {
  int support_size = 2;
  double step = 1e-3;
  /// Target variational TV for min_kl_at_tv.
  std::optional<double> constraint_delta;
  double constraint_tol = 1e-3;

  void validate() const;
};

/// Minimum of KL(p || q) over all grid pairs whose variational TV lies within
/// constraint_tol of constraint_delta. Throws if no pair qualifies.
double min_kl_at_tv(const OracleGridSpec& spec);

struct SandwichViolation {
  int trial;
  std::vector<double> p;
  std::vector<double> q;
  SandwichReport report;
};

struct FuzzReport {
  int n_trials = 0;
  std::uint64_t seed = 0;
  std::vector<SandwichViolation> violations;
};

/// Random strictly positive pairs on supports of size 2..max_support, each run
/// through check_sandwich_same_dim. Trial i draws from its own sub-seed, so the
/// report depends only on (n_trials, max_support, seed).
FuzzReport fuzz_sandwich(int n_trials, int max_support, std::uint64_t seed);

/// Largest KL(p || q) - delta_conv(p, q) * slope(m, M) over strictly positive
/// binary pairs on a grid of the given step, with delta read in `conv`.
/// Non-positive means the reverse-Pinsker bound holds everywhere on the grid.
double max_reverse_pinsker_excess(TvConvention conv, double step);

/// Decides which TV convention makes the reverse-Pinsker bound valid on the
/// binary grid with step 1e-3, trying Sup first. Throws if neither does.
TvConvention resolve_tv_convention();

}  // namespace pinsker::oracle
