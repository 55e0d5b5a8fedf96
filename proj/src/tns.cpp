#include "ness/tns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "ness/errors.hpp"

namespace ness {
namespace {

struct Split {
  MatrixXc u;
  Eigen::VectorXd values;
  MatrixXc v;
};

// Eigen 3.4's divide-and-conquer SVD returns factors that do not reproduce the
// input on some of the highly degenerate matrices met here (reconstruction
// errors up to 1e-2). Small splits go straight to Jacobi; large ones are
// checked and redone with Jacobi when the check fails.
Split split_svd(const MatrixXc& m) {
  constexpr Eigen::Index kJacobiBelow = 48;
  constexpr double kReconstructionTol = 1e-11;
  const int options = Eigen::ComputeThinU | Eigen::ComputeThinV;
  if (std::min(m.rows(), m.cols()) >= kJacobiBelow) {
    Eigen::BDCSVD<MatrixXc> svd(m, options);
    Split s{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    const double scale = m.norm();
    const double err =
        (s.u * s.values.cast<Complex>().asDiagonal() * s.v.adjoint() - m).norm();
    if (s.values.allFinite() && err <= kReconstructionTol * scale) return s;
  }
  Eigen::JacobiSVD<MatrixXc> svd(m, options);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace

MatrixXc pair_generator(int pair) {
  if (pair < 2) throw std::out_of_range("rotation pair must be >= 2");
  const Complex i(0, 1);
  if (pair % 2 == 0) {
    MatrixXc g = MatrixXc::Zero(2, 2);
    g(0, 0) = i;
    g(1, 1) = -i;
    return g;
  }
  // i X (x) X
  MatrixXc g = MatrixXc::Zero(4, 4);
  g(0, 3) = g(3, 0) = g(1, 2) = g(2, 1) = i;
  return g;
}

Gate rotation_gate(const Rotation<double>& rot, bool negate) {
  const double half = 0.5 * (negate ? -rot.angle : rot.angle);
  const MatrixXc gen = pair_generator(rot.pair);
  Gate g;
  g.span = static_cast<int>(gen.rows()) / 2;
  g.site = rot.pair % 2 == 0 ? rot.pair / 2 - 1 : (rot.pair - 1) / 2 - 1;
  if (g.span == 1) {
    // diagonal generator, so use the exact exponential
    g.matrix = MatrixXc::Zero(2, 2);
    g.matrix(0, 0) = std::exp(Complex(0, half));
    g.matrix(1, 1) = std::exp(Complex(0, -half));
  } else {
    g.matrix = std::cos(half) * MatrixXc::Identity(4, 4) + std::sin(half) * gen;
  }
  return g;
}

TensorState TensorState::product(std::span<const int> bits, double trunc_tol,
                                 std::optional<int> max_chi) {
  if (bits.empty()) throw std::invalid_argument("tensor state needs at least one site");
  if (trunc_tol < 0) throw std::invalid_argument("truncation tolerance must be >= 0");
  if (max_chi && *max_chi < 1) throw std::invalid_argument("max bond dimension must be >= 1");
  TensorState s;
  s.trunc_tol_ = trunc_tol;
  s.max_chi_ = max_chi;
  s.tensors_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("occupations must be 0 or 1");
    SiteTensor t{MatrixXc::Zero(1, 1), MatrixXc::Zero(1, 1)};
    t[b](0, 0) = 1;
    s.tensors_.push_back(std::move(t));
  }
  return s;
}

TensorState TensorState::occupied(int sites, double trunc_tol, std::optional<int> max_chi) {
  if (sites < 2 || sites % 2 != 0)
    throw std::invalid_argument("second-space site count must be even and >= 2");
  std::vector<int> ones(sites, 1);
  return product(ones, trunc_tol, max_chi);
}

std::vector<int> TensorState::bond_dims() const {
  std::vector<int> dims;
  dims.reserve(tensors_.size() + 1);
  dims.push_back(static_cast<int>(tensors_.front()[0].rows()));
  for (const auto& t : tensors_) dims.push_back(static_cast<int>(t[0].cols()));
  return dims;
}

int TensorState::max_bond() const {
  const auto dims = bond_dims();
  return *std::max_element(dims.begin(), dims.end());
}

void TensorState::shift_right(int k) {
  auto& t = tensors_[k];
  const Eigen::Index dl = t[0].rows();
  const Eigen::Index dr = t[0].cols();
  MatrixXc stacked(2 * dl, dr);
  stacked << t[0], t[1];
  Eigen::HouseholderQR<MatrixXc> qr(stacked);
  const Eigen::Index r = std::min(2 * dl, dr);
  const MatrixXc q = qr.householderQ() * MatrixXc::Identity(2 * dl, r);
  const MatrixXc upper = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  t[0] = q.topRows(dl);
  t[1] = q.bottomRows(dl);
  auto& next = tensors_[k + 1];
  next[0] = upper * next[0];
  next[1] = upper * next[1];
}

void TensorState::shift_left(int k) {
  auto& t = tensors_[k];
  const Eigen::Index dl = t[0].rows();
  const Eigen::Index dr = t[0].cols();
  MatrixXc wide(dl, 2 * dr);
  wide << t[0], t[1];
  Eigen::HouseholderQR<MatrixXc> qr(wide.adjoint());
  const Eigen::Index r = std::min(dl, 2 * dr);
  const MatrixXc q = qr.householderQ() * MatrixXc::Identity(2 * dr, r);
  const MatrixXc upper = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const MatrixXc qa = q.adjoint();
  t[0] = qa.leftCols(dr);
  t[1] = qa.rightCols(dr);
  auto& prev = tensors_[k - 1];
  const MatrixXc ra = upper.adjoint();
  prev[0] = prev[0] * ra;
  prev[1] = prev[1] * ra;
}

void TensorState::move_center(int target) {
  while (center_ < target) shift_right(center_++);
  while (center_ > target) shift_left(center_--);
}

void TensorState::apply_two_site(int k, const MatrixXc& g) {
  move_center(k);
  auto& a = tensors_[k];
  auto& b = tensors_[k + 1];
  const Eigen::Index dl = a[0].rows();
  const Eigen::Index dr = b[0].cols();

  std::array<MatrixXc, 4> theta;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) theta[2 * s1 + s2] = a[s1] * b[s2];

  MatrixXc m(2 * dl, 2 * dr);
  for (int t1 = 0; t1 < 2; ++t1)
    for (int t2 = 0; t2 < 2; ++t2) {
      MatrixXc block = MatrixXc::Zero(dl, dr);
      for (int s = 0; s < 4; ++s) {
        const Complex c = g(2 * t1 + t2, s);
        if (c != Complex(0)) block += c * theta[s];
      }
      m.block(t1 * dl, t2 * dr, dl, dr) = block;
    }

  const Split split = split_svd(m);
  const Eigen::VectorXd& sv = split.values;
  const double total = sv.squaredNorm();
  Eigen::Index keep = 0;
  const double cutoff = trunc_tol_ * (sv.size() > 0 ? sv(0) : 0.0);
  while (keep < sv.size() && sv(keep) > cutoff) ++keep;
  if (max_chi_) keep = std::min<Eigen::Index>(keep, *max_chi_);
  keep = std::max<Eigen::Index>(keep, 1);

  if (keep < sv.size() && total > 0) {
    const double dropped = sv.tail(sv.size() - keep).squaredNorm() / total;
    stats_.discarded_weight += dropped;
    stats_.max_discarded = std::max(stats_.max_discarded, dropped);
  }
  ++stats_.splits;

  const MatrixXc u = split.u.leftCols(keep);
  const MatrixXc sv_adj =
      sv.head(keep).cast<Complex>().asDiagonal() * split.v.leftCols(keep).adjoint();
  a[0] = u.topRows(dl);
  a[1] = u.bottomRows(dl);
  b[0] = sv_adj.leftCols(dr);
  b[1] = sv_adj.rightCols(dr);
  center_ = k + 1;
  peak_bond_ = std::max(peak_bond_, static_cast<int>(keep));
}

void TensorState::apply(const Gate& gate) {
  if (gate.site < 0 || gate.site + gate.span > sites())
    throw std::out_of_range("gate outside the tensor state");
  if (gate.span == 1) {
    if (gate.matrix.rows() != 2 || gate.matrix.cols() != 2)
      throw std::invalid_argument("single-site gate must be 2x2");
    auto& t = tensors_[gate.site];
    const MatrixXc n0 = gate.matrix(0, 0) * t[0] + gate.matrix(0, 1) * t[1];
    const MatrixXc n1 = gate.matrix(1, 0) * t[0] + gate.matrix(1, 1) * t[1];
    t[0] = n0;
    t[1] = n1;
    return;
  }
  if (gate.span != 2)
    throw std::invalid_argument("only single-site and adjacent two-site gates are supported");
  if (gate.matrix.rows() != 4 || gate.matrix.cols() != 4)
    throw std::invalid_argument("two-site gate must be 4x4");
  apply_two_site(gate.site, gate.matrix);
}

Complex TensorState::coefficient(std::span<const int> bits) const {
  if (static_cast<int>(bits.size()) != sites())
    throw std::invalid_argument("bitstring length does not match the number of sites");
  Eigen::RowVectorXcd acc = tensors_[0][bits[0] != 0].row(0);
  for (int k = 1; k < sites(); ++k) acc = acc * tensors_[k][bits[k] != 0];
  return acc(0);
}

Complex TensorState::coefficient_at(std::initializer_list<int> occupied_sites) const {
  std::vector<int> bits(sites(), 0);
  for (int k : occupied_sites) {
    if (k < 0 || k >= sites()) throw std::out_of_range("site index out of range");
    bits[k] = 1;
  }
  return coefficient(bits);
}

double TensorState::norm() const {
  const auto& t = tensors_[center_];
  return std::sqrt(t[0].squaredNorm() + t[1].squaredNorm());
}

VectorXc TensorState::to_dense() const {
  if (sites() > 24) throw std::invalid_argument("dense reconstruction limited to 24 sites");
  // Left-to-right contraction keeping one row vector per prefix.
  std::vector<Eigen::RowVectorXcd> prefixes{tensors_[0][0].row(0), tensors_[0][1].row(0)};
  for (int k = 1; k < sites(); ++k) {
    std::vector<Eigen::RowVectorXcd> next;
    next.reserve(prefixes.size() * 2);
    for (const auto& p : prefixes) {
      next.push_back(p * tensors_[k][0]);
      next.push_back(p * tensors_[k][1]);
    }
    prefixes = std::move(next);
  }
  VectorXc out(prefixes.size());
  for (std::size_t i = 0; i < prefixes.size(); ++i) out(i) = prefixes[i](0);
  return out;
}

Complex TensorState::normalize_vacuum() {
  std::vector<int> zeros(sites(), 0);
  const Complex vac = coefficient(zeros);
  if (std::abs(vac) < 1e-13)
    throw VacuumVanishes("coefficient of the empty configuration vanishes");
  z0_ = Complex(1) / vac;
  return *z0_;
}

std::vector<Eigen::VectorXd> TensorState::bond_spectra() const {
  TensorState copy = *this;
  copy.move_center(0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(sites() - 1);
  for (int k = 0; k + 1 < sites(); ++k) {
    const auto& t = copy.tensors_[k];
    MatrixXc stacked(2 * t[0].rows(), t[0].cols());
    stacked << t[0], t[1];
    Eigen::BDCSVD<MatrixXc> svd(stacked);
    out.push_back(svd.singularValues());
    copy.shift_right(k);
    copy.center_ = k + 1;
  }
  return out;
}

void TensorState::scale(Complex factor) {
  auto& t = tensors_[center_];
  t[0] *= factor;
  t[1] *= factor;
  if (z0_) *z0_ /= factor;
}

std::vector<int> closure_occupations(const FoldResult<double>& fold) {
  std::vector<int> bits;
  bits.reserve(fold.signs.size());
  for (int s : fold.signs) bits.push_back(s > 0 ? 1 : 0);
  return bits;
}

void apply_inverse_sequence(TensorState& state, const FoldResult<double>& fold) {
  if (state.sites() != 2 * fold.sites)
    throw std::invalid_argument("state size does not match the folded stack");
  for (auto it = fold.rotations.rbegin(); it != fold.rotations.rend(); ++it) {
    if (it->angle == 0.0) continue;  // exact identity
    state.apply(rotation_gate(*it, true));
  }
}

}  // namespace ness
