#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ness/errors.hpp"
#include "ness/liouvillian.hpp"

namespace ness {

/// Eigendecomposition of the mode-evolution matrix -4 L. Columns of
/// `vectors` are right eigenvectors; `stable` lists the indices with
/// Re z > threshold (the modes that survive the long-time limit).
template <typename Real>
struct ModeSpectrum {
  int sites = 0;
  ComplexVector<Real> values;
  ComplexMatrix<Real> vectors;
  ComplexMatrix<Real> inverse;
  std::vector<Eigen::Index> stable;
  Real threshold = 0;
  Real rcond = 0;
};

/// Rows are the coefficients of the NESS-building operators over the 4N
/// doubled Majoranas.
template <typename Real>
struct TransferStack {
  int sites = 0;
  ComplexMatrix<Real> coeffs;
};

/// `rel_tol` is scaled by the largest |Re z|. Throws NonUniqueNess when the
/// stable set is not exactly half the spectrum or some Re z sits inside the
/// tolerance band, SingularEigenbasis when the eigenvector matrix has a
/// reciprocal condition below `rel_tol`.
template <typename Real>
ModeSpectrum<Real> decompose(const LiouvillianCoeffs<Real>& l, Real rel_tol = Real(1e-8)) {
  const Eigen::Index dim = l.generator.rows();
  if (dim != 4 * l.sites || l.generator.cols() != dim)
    throw std::invalid_argument("Liouvillian generator must be 4N x 4N");

  const ComplexMatrix<Real> evolution = Real(-4) * l.generator;
  Eigen::ComplexEigenSolver<ComplexMatrix<Real>> solver(evolution, true);
  if (solver.info() != Eigen::Success) throw SingularEigenbasis("eigensolver did not converge");

  // Sort by (Re desc, Im asc) so runs are reproducible.
  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&ev](Eigen::Index a, Eigen::Index b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() > ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });

  ModeSpectrum<Real> out;
  out.sites = l.sites;
  out.values.resize(dim);
  out.vectors.resize(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    out.values(k) = ev(order[k]);
    out.vectors.col(k) = solver.eigenvectors().col(order[k]);
  }

  const Real max_re = out.values.real().cwiseAbs().maxCoeff();
  out.threshold = rel_tol * max_re;
  Eigen::Index marginal = 0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Real re = out.values(k).real();
    if (std::abs(re) <= out.threshold) ++marginal;
    if (re > out.threshold) out.stable.push_back(k);
  }
  if (max_re == Real(0) || marginal > 0 ||
      static_cast<Eigen::Index>(out.stable.size()) != 2 * l.sites) {
    std::ostringstream msg;
    msg << "stationary state not unique: " << out.stable.size() << " stable modes of " << dim
        << ", " << marginal << " with |Re z| <= " << out.threshold;
    throw NonUniqueNess(msg.str());
  }

  Eigen::PartialPivLU<ComplexMatrix<Real>> lu(out.vectors);
  out.rcond = lu.rcond();
  if (!(out.rcond > rel_tol)) {
    std::ostringstream msg;
    msg << "eigenvector matrix is numerically singular (rcond " << out.rcond << ")";
    throw SingularEigenbasis(msg.str());
  }
  out.inverse = lu.solve(ComplexMatrix<Real>::Identity(dim, dim));
  return out;
}

/// Spectral projector onto the stable modes: S = Z P Z^{-1}.
template <typename Real>
ComplexMatrix<Real> stable_projector(const ModeSpectrum<Real>& spec) {
  const Eigen::Index dim = spec.vectors.rows();
  if (static_cast<Eigen::Index>(spec.stable.size()) != 2 * spec.sites)
    throw NonUniqueNess("stable mode set must contain exactly 2N modes");
  ComplexMatrix<Real> left(dim, spec.stable.size());
  ComplexMatrix<Real> right(spec.stable.size(), dim);
  for (std::size_t k = 0; k < spec.stable.size(); ++k) {
    left.col(k) = spec.vectors.col(spec.stable[k]);
    right.row(k) = spec.inverse.row(spec.stable[k]);
  }
  return left * right;
}

/// Row j combines projector rows 2j-1 and 2j as (S_{2j-1} + i S_{2j}) / 2.
template <typename Real>
TransferStack<Real> build_stack(const ComplexMatrix<Real>& projector, int sites) {
  if (projector.rows() != 4 * sites || projector.cols() != 4 * sites)
    throw std::invalid_argument("projector must be 4N x 4N");
  const std::complex<Real> i(0, 1);
  TransferStack<Real> out;
  out.sites = sites;
  out.coeffs.resize(2 * sites, 4 * sites);
  for (int j = 0; j < 2 * sites; ++j)
    out.coeffs.row(j) = (projector.row(2 * j) + i * projector.row(2 * j + 1)) / Real(2);
  return out;
}

/// max |sum_l R(j,l) R(k,l)| over all row pairs, without conjugation.
template <typename Derived>
typename Derived::RealScalar bilinear_residual(const Eigen::MatrixBase<Derived>& r) {
  if (r.rows() == 0) return 0;
  return (r * r.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace ness
