#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ness/folding.hpp"

namespace ness {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Gate on one or two adjacent second-space sites. Two-site matrices use the
/// basis index 2 * n_left + n_right, with n = 0 empty and n = 1 occupied.
struct Gate {
  int site = 0;  // leftmost site, 0-based
  int span = 1;
  MatrixXc matrix;
};

/// Realizes exp((angle/2) G_{m-1} G_m) (or its inverse when `negate`) on the
/// occupation basis of the second-space modes. With the Jordan-Wigner
/// convention G_{2l-1} = Zs X_l, G_{2l} = Zs Y_l the same-site generator is
/// iZ and the cross-site one i X (x) X.
Gate rotation_gate(const Rotation<double>& rot, bool negate);

/// Generator G_{m-1} G_m on the occupation basis of the sites it touches.
MatrixXc pair_generator(int pair);

struct TruncationStats {
  double discarded_weight = 0;  // sum over splits of discarded s^2 / total s^2
  double max_discarded = 0;
  long splits = 0;
};

/// Matrix-product state over `sites` two-level sites. Each site holds one
/// (left bond x right bond) matrix per physical index. The state is kept in
/// mixed canonical form around `center()`.
class TensorState {
 public:
  /// Product state; bits[k] = 1 means site k occupied.
  static TensorState product(std::span<const int> bits, double trunc_tol = 1e-12,
                             std::optional<int> max_chi = std::nullopt);
  /// |11...1) on an even number of sites.
  static TensorState occupied(int sites, double trunc_tol = 1e-12,
                              std::optional<int> max_chi = std::nullopt);

  int sites() const { return static_cast<int>(tensors_.size()); }
  int center() const { return center_; }
  std::vector<int> bond_dims() const;  // sites + 1 entries, boundaries are 1
  int max_bond() const;
  int peak_bond() const { return peak_bond_; }
  const TruncationStats& truncation() const { return stats_; }
  double trunc_tol() const { return trunc_tol_; }
  std::optional<int> max_chi() const { return max_chi_; }

  void apply(const Gate& gate);

  Complex coefficient(std::span<const int> bits) const;
  Complex coefficient_at(std::initializer_list<int> occupied_sites) const;
  double norm() const;
  /// Dense vector in lexicographic order (site 0 most significant).
  VectorXc to_dense() const;

  /// Stores z0 = 1 / coefficient(00...0). Tensors are not rescaled.
  Complex normalize_vacuum();
  std::optional<Complex> z0() const { return z0_; }

  /// Singular values across every bond (empty at the boundaries).
  std::vector<Eigen::VectorXd> bond_spectra() const;

  void scale(Complex factor);

 private:
  using SiteTensor = std::array<MatrixXc, 2>;

  void move_center(int target);
  void shift_right(int k);
  void shift_left(int k);
  void apply_two_site(int k, const MatrixXc& g);

  std::vector<SiteTensor> tensors_;
  int center_ = 0;
  double trunc_tol_ = 1e-12;
  std::optional<int> max_chi_;
  std::optional<Complex> z0_;
  TruncationStats stats_;
  int peak_bond_ = 1;
};

/// Replays the fold rotations in reverse with negated angles.
void apply_inverse_sequence(TensorState& state, const FoldResult<double>& fold);

/// Initial occupations implied by the closure signs: +1 leaves mode j to be
/// created (occupied start), -1 to be annihilated (empty start).
std::vector<int> closure_occupations(const FoldResult<double>& fold);

}  // namespace ness
