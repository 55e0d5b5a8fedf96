#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "ness/errors.hpp"
#include "ness/spectral.hpp"

namespace ness {

// Folding reduces the transfer stack row by row with real-angle rotations of
// neighbouring column pairs. Column pair m (1-based, 2 <= m <= 4N) mixes the
// doubled Majoranas G_{m-1} and G_m; the matching operator is
// exp((theta/2) G_{m-1} G_m).

enum class RotationKind { U, V };

template <typename Real>
struct Rotation {
  int pair = 2;
  Real angle = 0;
  RotationKind kind = RotationKind::U;
};

template <typename Real>
struct FoldResult {
  int sites = 0;
  /// Application order of the bundled transformation.
  std::vector<Rotation<Real>> rotations;
  /// Coefficient at column 2j of row j after closure; real for every row but
  /// the last, which is never phase-stripped.
  ComplexVector<Real> diagonal;
  /// +1 when row j closed as 2i r c_j^dag, -1 when it closed onto c_j.
  std::vector<int> signs;
  Real residual = 0;
  Real ortho_before = 0;
  Real ortho_after = 0;
  ComplexMatrix<Real> folded;

  bool all_positive() const {
    for (int s : signs)
      if (s < 0) return false;
    return true;
  }
};

/// col(m-1) <- c col(m-1) + s col(m);  col(m) <- c col(m) - s col(m-1).
template <typename Derived>
void rotate_columns(Eigen::MatrixBase<Derived>& r, int pair,
                    typename Derived::RealScalar angle) {
  using Real = typename Derived::RealScalar;
  if (pair < 2 || pair > r.cols()) throw std::out_of_range("rotation pair out of range");
  const Real c = std::cos(angle);
  const Real s = std::sin(angle);
  for (Eigen::Index j = 0; j < r.rows(); ++j) {
    const auto a = r(j, pair - 2);
    const auto b = r(j, pair - 1);
    r(j, pair - 2) = a * c + b * s;
    r(j, pair - 1) = b * c - a * s;
  }
}

template <typename Derived>
void rotate_columns(Eigen::MatrixBase<Derived>&& r, int pair,
                    typename Derived::RealScalar angle) {
  rotate_columns(r, pair, angle);
}

/// Make row `row` (1-based) real on columns 2l..4N. Only column 2l-1 may stay
/// complex; its imaginary part ends up non-negative.
template <typename Real>
std::vector<Rotation<Real>> strip_phases_row(ComplexMatrix<Real>& r, int row) {
  const int width = static_cast<int>(r.cols());
  std::vector<Rotation<Real>> out;
  out.reserve(width - 2 * row + 1);
  for (int m = width; m >= 2 * row; --m) {
    const Real angle = std::atan2(r(row - 1, m - 1).imag(), r(row - 1, m - 2).imag());
    rotate_columns(r, m, angle);
    out.push_back({m, angle, RotationKind::U});
  }
  return out;
}

/// Rotate the real tail of row `row` into column 2l; afterwards the row is
/// supported on columns 2l-1 and 2l only.
template <typename Real>
std::vector<Rotation<Real>> eliminate_row(ComplexMatrix<Real>& r, int row) {
  const int width = static_cast<int>(r.cols());
  std::vector<Rotation<Real>> out;
  out.reserve(width - 2 * row);
  for (int m = width; m >= 2 * row + 1; --m) {
    const Real angle = std::atan2(r(row - 1, m - 1).real(), r(row - 1, m - 2).real());
    rotate_columns(r, m, angle);
    out.push_back({m, angle, RotationKind::V});
  }
  return out;
}

/// Checks that the surviving pair of row `row` reads (s i r, r) and clears the
/// pair columns in every later row. The tolerance is relative to the pair
/// magnitude when that exceeds one.
template <typename Real>
int close_row(ComplexMatrix<Real>& r, int row, Real tol) {
  const std::complex<Real> i(0, 1);
  const auto a = r(row - 1, 2 * row - 2);
  const auto b = r(row - 1, 2 * row - 1);
  const Real plus = std::abs(a - i * b);
  const Real minus = std::abs(a + i * b);
  const int sign = plus <= minus ? 1 : -1;
  const Real scale = std::max<Real>(Real(1), std::abs(b));
  if (std::min(plus, minus) > tol * scale) {
    std::ostringstream msg;
    msg << "row " << row << " does not close: |a -+ i b| = " << std::min(plus, minus);
    throw ClosureViolation(msg.str());
  }
  const Eigen::Index below = r.rows() - row;
  if (below > 0) r.block(row, 2 * row - 2, below, 2).setZero();
  return sign;
}

template <typename Real>
FoldResult<Real> fold(const TransferStack<Real>& stack, Real tol = Real(1e-10)) {
  const int rows = 2 * stack.sites;
  if (stack.coeffs.rows() != rows || stack.coeffs.cols() != 2 * rows)
    throw std::invalid_argument("transfer stack must be 2N x 4N");

  FoldResult<Real> out;
  out.sites = stack.sites;
  out.ortho_before = bilinear_residual(stack.coeffs);
  ComplexMatrix<Real> w = stack.coeffs;
  out.rotations.reserve(static_cast<std::size_t>(rows) * (2 * rows));
  for (int l = 1; l <= rows; ++l) {
    if (l < rows) {
      auto u = strip_phases_row(w, l);
      auto v = eliminate_row(w, l);
      out.rotations.insert(out.rotations.end(), u.begin(), u.end());
      out.rotations.insert(out.rotations.end(), v.begin(), v.end());
    }
    out.signs.push_back(close_row(w, l, tol));
  }

  out.diagonal.resize(rows);
  const std::complex<Real> i(0, 1);
  Real residual = 0;
  for (int l = 1; l <= rows; ++l) {
    const auto b = w(l - 1, 2 * l - 1);
    out.diagonal(l - 1) = b;
    if (std::abs(b) < tol) {
      std::ostringstream msg;
      msg << "folded row " << l << " vanishes";
      throw StackDegenerate(msg.str());
    }
    residual = std::max(residual,
                        std::abs(w(l - 1, 2 * l - 2) - Real(out.signs[l - 1]) * i * b));
    for (int c = 1; c <= 2 * rows; ++c)
      if (c != 2 * l - 1 && c != 2 * l) residual = std::max(residual, std::abs(w(l - 1, c - 1)));
  }
  out.residual = residual;
  out.ortho_after = bilinear_residual(w);
  out.folded = std::move(w);
  return out;
}

/// Replays rotations on a copy of `r` without the closure step.
template <typename Real>
ComplexMatrix<Real> apply_rotations(ComplexMatrix<Real> r,
                                    const std::vector<Rotation<Real>>& rotations) {
  for (const auto& rot : rotations) rotate_columns(r, rot.pair, rot.angle);
  return r;
}

}  // namespace ness
