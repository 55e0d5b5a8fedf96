#pragma once

#include <vector>

#include "ness/model.hpp"
#include "ness/tns.hpp"

// Brute-force references. Everything here is dense and exponential in N and
// shares no code with the spectral/folding/tensor path it validates.
//
// First-space Jordan-Wigner convention: g_{2j-1} = Z..Z X_j, g_{2j} = Z..Z Y_j
// with site 1 the most significant bit and basis {empty, occupied}.
// Second-space basis: bitstring n_1..n_2N (n_1 most significant) labels the
// ordered string g_1^{n_1} (i g_2)^{n_2} ... (i g_2N)^{n_2N}.

namespace ness::oracle {

using Hamiltonian = MajoranaHamiltonian<double>;
using Baths = std::vector<BathChannel<double>>;

std::vector<MatrixXc> first_space_majoranas(int sites);

/// (i/2) sum A(r,c) g_r g_c as a dense 2^N x 2^N matrix.
MatrixXc dense_hamiltonian(const Hamiltonian& h);

/// Kitaev Hamiltonian assembled directly from ladder operators, including the
/// -mu/2 offset per site. Uses the signed real pairing.
MatrixXc ladder_kitaev_hamiltonian(const KitaevParams<double>& p);

MatrixXc bath_operator(const BathChannel<double>& b);

/// Row-major vectorized Lindblad generator with the 2 L rho L^dag convention.
MatrixXc lindblad_superoperator(const Hamiltonian& h, const Baths& baths);

struct DenseFirstSpaceNess {
  MatrixXc rho;
  double kernel_eigenvalue = 0;
  double spectral_gap = 0;
};

/// N <= 3. Throws NonUniqueNess if the kernel is not one-dimensional.
DenseFirstSpaceNess dense_first_space_ness(const Hamiltonian& h, const Baths& baths);

/// Second-space Liouvillian written with the tilde ladder operators, valid on
/// the even sector. `even_only` restricts rows/columns to even-parity
/// bitstrings (in increasing bitstring order).
MatrixXc second_space_liouvillian(const Hamiltonian& h, const Baths& baths, bool even_only);

std::vector<int> even_parity_indices(int modes);

struct DenseSecondSpaceNess {
  VectorXc vec;  // full 2^{2N} length, vacuum-normalized
  double kernel_eigenvalue = 0;
  double spectral_gap = 0;
};

/// N <= 6. Kernel of the even-sector Liouvillian.
DenseSecondSpaceNess dense_second_space_ness(const Hamiltonian& h, const Baths& baths);

/// Ordered Majorana string for a second-space bitstring index.
MatrixXc majorana_string(int sites, int bitstring);

/// q = 2^{-N} tr(t^dag rho) for every string; divided by q(0) when `normalize`.
VectorXc rho_to_second_space(const MatrixXc& rho, bool normalize = true);

/// Inverse expansion, trace-normalized.
MatrixXc second_space_to_rho(const VectorXc& q);

/// |00) + ((g2 - g1) / (g2 + g1)) |11) for one site with rates g1 (loss) and
/// g2 (gain).
VectorXc analytic_n1(double gamma_loss, double gamma_gain);

/// ||a - b|| / ||b||.
double error_metric(const VectorXc& a, const VectorXc& b);

struct KernelResult {
  VectorXc vector;
  double eigenvalue = 0;  // |lambda| of the kernel eigenvalue
  double gap = 0;         // |lambda| of the next one
};

/// Eigenvector of the eigenvalue closest to zero. Requires that eigenvalue
/// below 1e-10 (scaled by max(1, max |m_ij|)) and the next above 1e-6.
KernelResult kernel_vector(const MatrixXc& m);

}  // namespace ness::oracle
