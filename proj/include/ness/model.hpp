#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ness {

template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Kitaev chain parameters: hopping `w`, chemical potential `mu` and the
/// (real) superconducting pairing `delta` on a chain of `sites` fermions.
template <typename Real>
struct KitaevParams {
  int sites = 1;
  Real w = 0;
  Real mu = 0;
  Real delta = 0;

  void validate() const {
    if (sites < 1) throw std::invalid_argument("chain length must be >= 1");
    if (!std::isfinite(w) || !std::isfinite(mu) || !std::isfinite(delta))
      throw std::invalid_argument("Kitaev parameters must be finite");
  }
};

/// Only real pairings are supported; a complex phase would have to be gauged
/// away by the caller.
template <typename Real>
Real real_pairing(std::complex<Real> delta) {
  if (delta.imag() != Real(0))
    throw std::invalid_argument("complex pairing amplitude is not supported");
  return delta.real();
}

/// Quadratic Hamiltonian H = (1/2) sum A(r,c) g_r (i g_c) over Majorana
/// operators g_1..g_2N. Stored 0-based: `coupling(r, c)` may be nonzero only
/// when r is an odd Majorana (even 0-based index) and c an even one.
template <typename Real>
struct MajoranaHamiltonian {
  int sites = 0;
  RealMatrix<Real> coupling;

  explicit MajoranaHamiltonian(int n = 0)
      : sites(n), coupling(RealMatrix<Real>::Zero(2 * n, 2 * n)) {}

  /// 1-based accessor matching the Majorana labels (odd row, even column).
  Real& at(int odd, int even) {
    check_pair(odd, even);
    return coupling(odd - 1, even - 1);
  }
  Real at(int odd, int even) const {
    check_pair(odd, even);
    return coupling(odd - 1, even - 1);
  }

  void validate() const {
    if (coupling.rows() != 2 * sites || coupling.cols() != 2 * sites)
      throw std::invalid_argument("coupling matrix must be 2N x 2N");
    for (Eigen::Index r = 0; r < coupling.rows(); ++r)
      for (Eigen::Index c = 0; c < coupling.cols(); ++c) {
        const Real v = coupling(r, c);
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite coupling");
        if (v != Real(0) && (r % 2 != 0 || c % 2 != 1))
          throw std::invalid_argument("coupling only allowed at (odd, even) Majorana pairs");
      }
  }

 private:
  void check_pair(int odd, int even) const {
    if (odd < 1 || odd > 2 * sites || even < 1 || even > 2 * sites || odd % 2 != 1 ||
        even % 2 != 0)
      throw std::out_of_range("Majorana pair must be (odd, even) within 1..2N");
  }
};

/// Linear bath operator L = sum_j B_{2j-1} g_{2j-1} + B_{2j} (i g_{2j}).
template <typename Real>
struct BathChannel {
  RealVector<Real> coeffs;

  int sites() const { return static_cast<int>(coeffs.size() / 2); }
};

enum class BathKind { Annihilation, Creation };

/// Rates of the four end baths: gamma11 c_1, gamma21 c_1^dag, gamma12 c_N and
/// gamma22 c_N^dag.
template <typename Real>
struct EndBathParams {
  Real gamma11 = 0;
  Real gamma21 = 0;
  Real gamma12 = 0;
  Real gamma22 = 0;

  void validate() const {
    for (Real g : {gamma11, gamma21, gamma12, gamma22})
      if (!(g >= Real(0)) || !std::isfinite(g))
        throw std::invalid_argument("bath rates must be finite and non-negative");
  }
};

template <typename Real>
MajoranaHamiltonian<Real> build_kitaev(const KitaevParams<Real>& p) {
  p.validate();
  MajoranaHamiltonian<Real> h(p.sites);
  const Real pair = std::abs(p.delta);
  for (int j = 1; j <= p.sites; ++j) {
    h.at(2 * j - 1, 2 * j) = -p.mu;
    if (j < p.sites) {
      h.at(2 * j - 1, 2 * j + 2) = pair - p.w;
      // g_{2j} g_{2j+1} = -g_{2j+1} g_{2j}: stored below the diagonal.
      h.at(2 * j + 1, 2 * j) = -(pair + p.w);
    }
  }
  return h;
}

template <typename Real>
BathChannel<Real> single_site_bath(int sites, int site, BathKind kind, Real rate) {
  if (sites < 1) throw std::invalid_argument("chain length must be >= 1");
  if (site < 1 || site > sites) throw std::out_of_range("bath site out of range");
  if (!(rate >= Real(0)) || !std::isfinite(rate))
    throw std::invalid_argument("bath rate must be finite and non-negative");
  BathChannel<Real> b{RealVector<Real>::Zero(2 * sites)};
  const Real amp = std::sqrt(rate) / Real(2);
  b.coeffs(2 * site - 2) = amp;
  b.coeffs(2 * site - 1) = kind == BathKind::Annihilation ? amp : -amp;
  return b;
}

/// Channels with a zero rate are dropped.
template <typename Real>
std::vector<BathChannel<Real>> end_baths(int sites, const EndBathParams<Real>& p) {
  if (sites < 1) throw std::invalid_argument("chain length must be >= 1");
  p.validate();
  std::vector<BathChannel<Real>> out;
  const struct {
    Real rate;
    int site;
    BathKind kind;
  } specs[] = {{p.gamma11, 1, BathKind::Annihilation},
               {p.gamma21, 1, BathKind::Creation},
               {p.gamma12, sites, BathKind::Annihilation},
               {p.gamma22, sites, BathKind::Creation}};
  for (const auto& s : specs)
    if (s.rate > Real(0)) out.push_back(single_site_bath(sites, s.site, s.kind, s.rate));
  return out;
}

}  // namespace ness
