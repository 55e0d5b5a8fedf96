#include "ness/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ness/errors.hpp"

namespace ness {
namespace {

Complex require_z0(const TensorState& state) {
  if (!state.z0()) throw std::logic_error("state must be vacuum-normalized first");
  return *state.z0();
}

int chain_length(const TensorState& state) { return state.sites() / 2; }

}  // namespace

double end_to_end_correlation(const TensorState& state) {
  const int n = chain_length(state);
  if (n < 2) throw std::invalid_argument("end-to-end correlations need N >= 2");
  const Complex z0 = require_z0(state);
  // Majorana positions 2 and 2N-1, then 1 and 2N (0-based sites below).
  const Complex inner = state.coefficient_at({1, 2 * n - 2});
  const Complex outer = state.coefficient_at({0, 2 * n - 1});
  return 2.0 * std::abs(z0 * (inner + outer));
}

Complex majorana_pair_expectation(const TensorState& state, int odd, int even) {
  const int n = chain_length(state);
  if (odd < 1 || odd > 2 * n || even < 1 || even > 2 * n)
    throw std::out_of_range("Majorana index out of range");
  if (odd % 2 != 1 || even % 2 != 0)
    throw std::invalid_argument("expected an odd and an even Majorana index");
  return require_z0(state) * state.coefficient_at({odd - 1, even - 1});
}

double site_occupancy(const TensorState& state, int site) {
  const int n = chain_length(state);
  if (site < 1 || site > n) throw std::out_of_range("site out of range");
  const Complex pair = majorana_pair_expectation(state, 2 * site - 1, 2 * site);
  if (std::abs(pair.imag()) > 1e-10) {
    std::ostringstream msg;
    msg << "occupancy of site " << site << " has imaginary part " << pair.imag();
    throw ClosureViolation(msg.str());
  }
  const double occ = 0.5 * (1.0 + pair.real());
  if (occ < -1e-8 || occ > 1.0 + 1e-8) {
    std::ostringstream msg;
    msg << "occupancy of site " << site << " is " << occ;
    throw ClosureViolation(msg.str());
  }
  return occ;
}

std::vector<double> occupancy_profile(const TensorState& state) {
  std::vector<double> out;
  for (int j = 1; j <= chain_length(state); ++j) out.push_back(site_occupancy(state, j));
  return out;
}

LogLinearFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& y,
                            double floor) {
  if (x.size() != y.size()) throw std::invalid_argument("fit needs matching x and y");
  std::vector<double> xs, ls;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (y[k] > floor) {
      xs.push_back(x[k]);
      ls.push_back(std::log(y[k]));
    }
  LogLinearFit fit;
  fit.points = static_cast<int>(xs.size());
  if (fit.points < 2) return fit;
  const double n = fit.points;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ls[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ls[k];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double model = std::exp(fit.intercept + fit.slope * xs[k]);
    const double data = std::exp(ls[k]);
    fit.residual = std::max(fit.residual, std::abs(model - data) / data);
  }
  return fit;
}

}  // namespace ness
