#pragma once

#include <stdexcept>
#include <vector>

#include "ness/model.hpp"

namespace ness {

/// Second-space Liouvillian sum_{jk} L(j,k) G_j G_k over the 4N doubled
/// Majoranas G. `generator` is the antisymmetrized coefficient matrix with a
/// zero diagonal; `raw_diagonal` keeps what antisymmetrization removed.
/// `scalar` is the eigenvalue of the totally occupied state.
template <typename Real>
struct LiouvillianCoeffs {
  int sites = 0;
  ComplexMatrix<Real> generator;
  Real scalar = 0;
  ComplexVector<Real> raw_diagonal;
};

template <typename Real>
Real scalar_eigenvalue(const std::vector<BathChannel<Real>>& baths) {
  Real sum = 0;
  for (const auto& b : baths) sum += b.coeffs.squaredNorm();
  return Real(-4) * sum;
}

/// Coefficients before antisymmetrization, term by term from the expansion of
/// the Hamiltonian and bath parts in doubled Majoranas. Indices below are the
/// 1-based Majorana labels; `add` shifts them to storage.
template <typename Real>
ComplexMatrix<Real> raw_liouvillian_coefficients(const MajoranaHamiltonian<Real>& h,
                                                 const std::vector<BathChannel<Real>>& baths) {
  h.validate();
  const int n = h.sites;
  for (const auto& b : baths)
    if (b.coeffs.size() != 2 * n)
      throw std::invalid_argument("bath channel size does not match the chain length");

  using C = std::complex<Real>;
  ComplexMatrix<Real> raw = ComplexMatrix<Real>::Zero(4 * n, 4 * n);
  auto add = [&raw](int r, int c, C v) { raw(r - 1, c - 1) += v; };
  const C i(0, 1);

  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      const Real a = h.coupling(2 * j - 2, 2 * k - 1);
      if (a == Real(0)) continue;
      add(4 * k, 4 * j - 3, a / Real(2));
      add(4 * j - 2, 4 * k - 1, a / Real(2));
    }

  for (const auto& ch : baths) {
    auto odd = [&ch](int j) { return ch.coeffs(2 * j - 2); };   // B_{2j-1}
    auto even = [&ch](int j) { return ch.coeffs(2 * j - 1); };  // B_{2j}
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        const Real ee = even(j) * even(k);
        const Real oo = odd(j) * odd(k);
        const Real oe = odd(j) * even(k);
        const Real eo = even(j) * odd(k);
        add(4 * j, 4 * k, -ee);
        add(4 * j - 1, 4 * k - 1, -ee);
        add(4 * j - 2, 4 * k - 2, -oo);
        add(4 * j - 3, 4 * k - 3, -oo);
        add(4 * j - 3, 4 * k, Real(2) * i * oe);
        add(4 * j - 2, 4 * k - 1, Real(2) * i * oe);
        add(4 * j - 2, 4 * k - 3, Real(2) * i * oo);
        add(4 * j, 4 * k - 1, Real(2) * i * ee);
        add(4 * j - 2, 4 * k, C(Real(2) * oe));
        add(4 * j - 1, 4 * k - 3, C(Real(2) * eo));
      }
  }
  return raw;
}

template <typename Real>
LiouvillianCoeffs<Real> build_liouvillian(const MajoranaHamiltonian<Real>& h,
                                          const std::vector<BathChannel<Real>>& baths) {
  const ComplexMatrix<Real> raw = raw_liouvillian_coefficients(h, baths);
  LiouvillianCoeffs<Real> out;
  out.sites = h.sites;
  // G_j G_k = -G_k G_j for j != k and G_j^2 = 1.
  out.generator = (raw - raw.transpose()) / Real(2);
  out.generator.diagonal().setZero();
  out.raw_diagonal = raw.diagonal();
  out.scalar = scalar_eigenvalue(baths);
  return out;
}

template <typename Real>
Real antisymmetry_residual(const ComplexMatrix<Real>& m) {
  return (m + m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace ness
