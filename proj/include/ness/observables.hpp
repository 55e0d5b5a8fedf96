#pragma once

#include <vector>

#include "ness/tns.hpp"

namespace ness {

// All observables are ratios against the vacuum coefficient: for an ordered
// Majorana string t with ones at the given positions,
// tr(t rho) = z0 * coefficient(t), since tr(rho) = 1 fixes the vacuum entry.

struct ObservableReport {
  double eec = 0;
  std::vector<double> occupancy;
  Complex vacuum_coeff{0, 0};
  int max_bond = 0;
  double fold_residual = 0;
};

/// 2 |<c_1 c_N^dag + c_N c_1^dag>|. Requires N >= 2.
double end_to_end_correlation(const TensorState& state);

/// <n_j> for 1 <= j <= N. Throws ClosureViolation if the underlying
/// expectation is not real to 1e-10 or the result leaves [-1e-8, 1 + 1e-8].
double site_occupancy(const TensorState& state, int site);

std::vector<double> occupancy_profile(const TensorState& state);

/// Expectation of the ordered string g_odd (i g_even) (or (i g_even) g_odd when
/// even < odd); 1-based Majorana labels.
Complex majorana_pair_expectation(const TensorState& state, int odd, int even);

struct LogLinearFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // max |fit - y| / y over the fitted points
  int points = 0;
};

/// Least-squares fit of log(y) against x over the points with y > floor.
/// Fewer than two usable points give points < 2 and zero slope.
LogLinearFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& y,
                            double floor = 1e-12);

}  // namespace ness
