#include "ness/oracle.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ness/errors.hpp"

namespace ness::oracle {
namespace {

const Complex kI(0, 1);

MatrixXc pauli_x() { return (MatrixXc(2, 2) << 0, 1, 1, 0).finished(); }
MatrixXc pauli_y() { return (MatrixXc(2, 2) << 0, -kI, kI, 0).finished(); }
MatrixXc pauli_z() { return (MatrixXc(2, 2) << 1, 0, 0, -1).finished(); }

MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
  MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// One ladder operator on the second-space modes (1-based).
struct Ladder {
  int mode;
  bool dagger;
  Complex coeff;
};
using LadderSum = std::vector<Ladder>;

// Applies a ladder operator to a basis bitstring with the Jordan-Wigner sign
// (-1)^(occupied modes before `mode`). Returns false when annihilated.
bool apply_ladder(int modes, const Ladder& op, unsigned& state, double& sign) {
  const unsigned bit = 1u << (modes - op.mode);
  const bool occupied = (state & bit) != 0;
  if (occupied == op.dagger) return false;
  const unsigned before = state >> (modes - op.mode + 1);
  if (std::popcount(before) % 2 != 0) sign = -sign;
  state ^= bit;
  return true;
}

// Accumulates coeff * (sum left) (sum right) into `m` over the given basis.
void add_product(MatrixXc& m, int modes, const std::vector<int>& basis,
                 const std::vector<int>& position, Complex coeff, const LadderSum& left,
                 const LadderSum& right) {
  for (std::size_t col = 0; col < basis.size(); ++col)
    for (const auto& r : right)
      for (const auto& l : left) {
        unsigned state = static_cast<unsigned>(basis[col]);
        double sign = 1;
        if (!apply_ladder(modes, r, state, sign)) continue;
        if (!apply_ladder(modes, l, state, sign)) continue;
        const int row = position[state];
        if (row < 0) throw std::logic_error("term leaves the chosen parity sector");
        m(row, col) += coeff * sign * l.coeff * r.coeff;
      }
}

}  // namespace

std::vector<MatrixXc> first_space_majoranas(int sites) {
  if (sites < 1 || sites > 10) throw std::invalid_argument("dense Majoranas need 1 <= N <= 10");
  std::vector<MatrixXc> out;
  for (int j = 0; j < sites; ++j)
    for (const MatrixXc& p : {pauli_x(), pauli_y()}) {
      MatrixXc op = MatrixXc::Identity(1, 1);
      for (int k = 0; k < sites; ++k)
        op = kron(op, k < j ? pauli_z() : (k == j ? p : MatrixXc::Identity(2, 2)));
      out.push_back(std::move(op));
    }
  return out;
}

MatrixXc dense_hamiltonian(const Hamiltonian& h) {
  h.validate();
  const auto g = first_space_majoranas(h.sites);
  const Eigen::Index dim = Eigen::Index{1} << h.sites;
  MatrixXc out = MatrixXc::Zero(dim, dim);
  for (int r = 0; r < 2 * h.sites; ++r)
    for (int c = 0; c < 2 * h.sites; ++c)
      if (h.coupling(r, c) != 0.0) out += 0.5 * kI * h.coupling(r, c) * g[r] * g[c];
  return out;
}

MatrixXc ladder_kitaev_hamiltonian(const KitaevParams<double>& p) {
  p.validate();
  const auto g = first_space_majoranas(p.sites);
  std::vector<MatrixXc> c;
  for (int j = 0; j < p.sites; ++j) c.push_back(0.5 * (g[2 * j] + kI * g[2 * j + 1]));
  const Eigen::Index dim = Eigen::Index{1} << p.sites;
  const MatrixXc id = MatrixXc::Identity(dim, dim);
  MatrixXc h = MatrixXc::Zero(dim, dim);
  for (int j = 0; j < p.sites; ++j) {
    h += -p.mu * (c[j].adjoint() * c[j] - 0.5 * id);
    if (j + 1 < p.sites) {
      h += -p.w * (c[j].adjoint() * c[j + 1] + c[j + 1].adjoint() * c[j]);
      h += p.delta * c[j] * c[j + 1] + p.delta * c[j + 1].adjoint() * c[j].adjoint();
    }
  }
  return h;
}

MatrixXc bath_operator(const BathChannel<double>& b) {
  const int n = b.sites();
  const auto g = first_space_majoranas(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  MatrixXc out = MatrixXc::Zero(dim, dim);
  for (int j = 0; j < n; ++j) out += b.coeffs(2 * j) * g[2 * j] + b.coeffs(2 * j + 1) * kI * g[2 * j + 1];
  return out;
}

MatrixXc lindblad_superoperator(const Hamiltonian& h, const Baths& baths) {
  const MatrixXc ham = dense_hamiltonian(h);
  const Eigen::Index dim = ham.rows();
  const MatrixXc id = MatrixXc::Identity(dim, dim);
  // Row-major vec: vec(A X B) = (A (x) B^T) vec(X).
  MatrixXc s = -kI * (kron(ham, id) - kron(id, ham.transpose()));
  for (const auto& b : baths) {
    if (b.sites() != h.sites) throw std::invalid_argument("bath size mismatch");
    const MatrixXc l = bath_operator(b);
    const MatrixXc ldl = l.adjoint() * l;
    s += 2.0 * kron(l, l.conjugate()) - kron(ldl, id) - kron(id, ldl.transpose());
  }
  return s;
}

KernelResult kernel_vector(const MatrixXc& m) {
  Eigen::ComplexEigenSolver<MatrixXc> solver(m, true);
  if (solver.info() != Eigen::Success) throw NonUniqueNess("kernel eigensolver failed");
  const auto& ev = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < ev.size(); ++k)
    if (std::abs(ev(k)) < std::abs(ev(best))) best = k;
  double next = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (k != best) next = std::min(next, std::abs(ev(k)));

  KernelResult out;
  out.eigenvalue = std::abs(ev(best));
  out.gap = next;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (out.eigenvalue > 1e-10 * scale || next < 1e-6) {
    std::ostringstream msg;
    msg << "kernel not one-dimensional: |lambda0| = " << out.eigenvalue
        << ", |lambda1| = " << next;
    throw NonUniqueNess(msg.str());
  }
  out.vector = solver.eigenvectors().col(best);
  return out;
}

DenseFirstSpaceNess dense_first_space_ness(const Hamiltonian& h, const Baths& baths) {
  if (h.sites < 1 || h.sites > 3) throw std::invalid_argument("first-space oracle needs 1 <= N <= 3");
  const auto kernel = kernel_vector(lindblad_superoperator(h, baths));
  const Eigen::Index dim = Eigen::Index{1} << h.sites;
  MatrixXc rho(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) rho(r, c) = kernel.vector(r * dim + c);
  // Fix the global phase through the trace before symmetrizing.
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  return {rho, kernel.eigenvalue, kernel.gap};
}

std::vector<int> even_parity_indices(int modes) {
  std::vector<int> out;
  for (int s = 0; s < (1 << modes); ++s)
    if (std::popcount(static_cast<unsigned>(s)) % 2 == 0) out.push_back(s);
  return out;
}

MatrixXc second_space_liouvillian(const Hamiltonian& h, const Baths& baths, bool even_only) {
  h.validate();
  const int n = h.sites;
  const int modes = 2 * n;
  if (n < 1 || n > 6) throw std::invalid_argument("second-space oracle needs 1 <= N <= 6");
  std::vector<int> basis;
  if (even_only) {
    basis = even_parity_indices(modes);
  } else {
    for (int s = 0; s < (1 << modes); ++s) basis.push_back(s);
  }
  std::vector<int> position(1 << modes, -1);
  for (std::size_t k = 0; k < basis.size(); ++k) position[basis[k]] = static_cast<int>(k);

  MatrixXc m = MatrixXc::Zero(basis.size(), basis.size());
  const Complex one(1);
  // Unitary part: i A_{2j-1,2k} (c~dag_{2k} c~_{2j-1} + c~dag_{2j-1} c~_{2k}).
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      const double a = h.coupling(2 * j - 2, 2 * k - 1);
      if (a == 0.0) continue;
      add_product(m, modes, basis, position, kI * a, {{2 * k, true, one}},
                  {{2 * j - 1, false, one}});
      add_product(m, modes, basis, position, kI * a, {{2 * j - 1, true, one}},
                  {{2 * k, false, one}});
    }

  for (const auto& ch : baths) {
    if (ch.sites() != n) throw std::invalid_argument("bath size mismatch");
    LadderSum p1, q1, p2, q2;
    for (int j = 1; j <= n; ++j) {
      const double bo = ch.coeffs(2 * j - 2);
      const double be = ch.coeffs(2 * j - 1);
      const int o = 2 * j - 1;
      const int e = 2 * j;
      p1.push_back({o, true, -bo});
      p1.push_back({e, true, be});
      q1.push_back({o, false, bo});
      q1.push_back({o, true, bo});
      q1.push_back({e, false, -be});
      q1.push_back({e, true, be});
      p2.push_back({o, true, bo});
      p2.push_back({e, true, be});
      q2.push_back({o, false, -bo});
      q2.push_back({o, true, bo});
      q2.push_back({e, false, -be});
      q2.push_back({e, true, -be});
    }
    add_product(m, modes, basis, position, 2.0, p1, q1);
    add_product(m, modes, basis, position, 2.0, p2, q2);
  }
  return m;
}

DenseSecondSpaceNess dense_second_space_ness(const Hamiltonian& h, const Baths& baths) {
  const int modes = 2 * h.sites;
  const auto kernel = kernel_vector(second_space_liouvillian(h, baths, true));
  const auto basis = even_parity_indices(modes);
  DenseSecondSpaceNess out;
  out.vec = VectorXc::Zero(Eigen::Index{1} << modes);
  for (std::size_t k = 0; k < basis.size(); ++k) out.vec(basis[k]) = kernel.vector(k);
  if (std::abs(out.vec(0)) == 0.0) throw VacuumVanishes("oracle kernel has no vacuum component");
  out.vec /= out.vec(0);
  out.kernel_eigenvalue = kernel.eigenvalue;
  out.spectral_gap = kernel.gap;
  return out;
}

MatrixXc majorana_string(int sites, int bitstring) {
  const auto g = first_space_majoranas(sites);
  const int modes = 2 * sites;
  const Eigen::Index dim = Eigen::Index{1} << sites;
  MatrixXc t = MatrixXc::Identity(dim, dim);
  for (int k = 1; k <= modes; ++k)
    if (bitstring & (1 << (modes - k))) t = t * (k % 2 == 1 ? g[k - 1] : (kI * g[k - 1]).eval());
  return t;
}

VectorXc rho_to_second_space(const MatrixXc& rho, bool normalize) {
  const int sites = static_cast<int>(std::lround(std::log2(static_cast<double>(rho.rows()))));
  if (rho.rows() != rho.cols() || (Eigen::Index{1} << sites) != rho.rows() || sites > 3)
    throw std::invalid_argument("rho must be 2^N x 2^N with N <= 3");
  const int count = 1 << (2 * sites);
  VectorXc q(count);
  const double norm = std::ldexp(1.0, -sites);
  for (int s = 0; s < count; ++s) q(s) = norm * (majorana_string(sites, s).adjoint() * rho).trace();
  if (normalize) q /= q(0);
  return q;
}

MatrixXc second_space_to_rho(const VectorXc& q) {
  const int modes = static_cast<int>(std::lround(std::log2(static_cast<double>(q.size()))));
  if ((Eigen::Index{1} << modes) != q.size() || modes % 2 != 0)
    throw std::invalid_argument("coefficient vector must have length 4^N");
  const int sites = modes / 2;
  const Eigen::Index dim = Eigen::Index{1} << sites;
  MatrixXc rho = MatrixXc::Zero(dim, dim);
  for (Eigen::Index s = 0; s < q.size(); ++s)
    if (q(s) != Complex(0)) rho += q(s) * majorana_string(sites, static_cast<int>(s));
  return rho / rho.trace();
}

VectorXc analytic_n1(double gamma_loss, double gamma_gain) {
  if (gamma_loss < 0 || gamma_gain < 0) throw std::invalid_argument("rates must be >= 0");
  if (gamma_loss + gamma_gain <= 0) throw std::invalid_argument("at least one rate must be positive");
  VectorXc v = VectorXc::Zero(4);
  v(0) = 1;
  v(3) = (gamma_gain - gamma_loss) / (gamma_gain + gamma_loss);
  return v;
}

double error_metric(const VectorXc& a, const VectorXc& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vectors differ in length");
  const double ref = b.norm();
  if (ref == 0.0) throw std::invalid_argument("reference vector is zero");
  return (a - b).norm() / ref;
}

}  // namespace ness::oracle
