#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ness/folding.hpp"
#include "ness/oracle.hpp"
#include "ness/pipeline.hpp"
#include "ness/tns.hpp"

namespace testing {

using ness::Complex;
using ness::MatrixXc;
using ness::VectorXc;

inline const ness::EndBathParams<double> kGain{0.0, 1.0, 0.0, 1.0};
inline const ness::EndBathParams<double> kMixed{1.3, 2.2, 3.4, 4.1};

inline double max_abs(const MatrixXc& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Projector onto the Re z > 0 eigenspace of m via the Newton iteration for
/// the matrix sign function, X <- (X + X^{-1}) / 2.
inline MatrixXc sign_projector(const MatrixXc& m) {
  MatrixXc x = m;
  for (int it = 0; it < 100; ++it) {
    const MatrixXc next = 0.5 * (x + x.inverse());
    const double change = max_abs(next - x);
    x = next;
    if (change < 1e-15 * std::max(1.0, max_abs(x))) break;
  }
  return 0.5 * (MatrixXc::Identity(m.rows(), m.cols()) + x);
}

/// Applies a gate to a dense second-space vector (site 0 most significant).
inline VectorXc apply_dense(const VectorXc& v, const ness::Gate& g, int sites) {
  VectorXc out = v;
  const int shift = sites - g.site - g.span;
  const long block = 1L << g.span;
  for (long idx = 0; idx < v.size(); ++idx) {
    const long local = (idx >> shift) & (block - 1);
    const long base = idx - (local << shift);
    Complex acc = 0;
    for (long s = 0; s < block; ++s) acc += g.matrix(local, s) * v(base + (s << shift));
    out(idx) = acc;
  }
  return out;
}

/// Dense |b> in the lexicographic order used by TensorState::to_dense.
inline VectorXc dense_product(const std::vector<int>& bits) {
  const int sites = static_cast<int>(bits.size());
  long idx = 0;
  for (int b : bits) idx = 2 * idx + b;
  VectorXc v = VectorXc::Zero(1L << sites);
  v(idx) = 1;
  return v;
}

/// Untruncated dense replay of the inverse sequence from the closure state.
inline VectorXc dense_reconstruction(const ness::FoldResult<double>& fold) {
  const int sites = 2 * fold.sites;
  VectorXc v = dense_product(ness::closure_occupations(fold));
  for (auto it = fold.rotations.rbegin(); it != fold.rotations.rend(); ++it)
    v = apply_dense(v, ness::rotation_gate(*it, true), sites);
  return v;
}

/// Rows (e_{2j-1} s_j i + e_{2j}) r_j times exp(K) for a random complex
/// antisymmetric K. Bilinear orthogonality holds exactly in exact arithmetic.
inline MatrixXc random_orthogonal_stack(int sites, std::mt19937_64& rng, double spread,
                                        const std::vector<int>& signs = {}) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int width = 4 * sites;
  MatrixXc r0 = MatrixXc::Zero(2 * sites, width);
  for (int j = 0; j < 2 * sites; ++j) {
    const double s = signs.empty() ? 1.0 : signs[j];
    r0(j, 2 * j) = Complex(0, s * 0.5);
    r0(j, 2 * j + 1) = 0.5;
  }
  MatrixXc k = MatrixXc::Zero(width, width);
  for (int a = 0; a < width; ++a)
    for (int b = a + 1; b < width; ++b) {
      k(a, b) = spread * Complex(gauss(rng), gauss(rng));
      k(b, a) = -k(a, b);
    }
  return r0 * k.exp();
}

/// Dense matrix of sum_c row(c) G_c over the second-space Majoranas.
inline MatrixXc stack_operator(const Eigen::RowVectorXcd& row,
                               const std::vector<MatrixXc>& majoranas) {
  MatrixXc f = MatrixXc::Zero(majoranas[0].rows(), majoranas[0].cols());
  for (Eigen::Index c = 0; c < row.size(); ++c) f += row(c) * majoranas[c];
  return f;
}

inline int bit(int modes, int position) { return 1 << (modes - position); }

}  // namespace testing
