#pragma once

#include <optional>
#include <vector>

#include "ness/folding.hpp"
#include "ness/liouvillian.hpp"
#include "ness/model.hpp"
#include "ness/spectral.hpp"
#include "ness/tns.hpp"

namespace ness {

struct SolverOptions {
  double eps_z = 1e-8;      // relative to the largest |Re z|
  double eps_fold = 1e-10;  // absolute on O(1) stack entries
  double trunc_tol = 1e-12; // relative to the largest singular value per split
  std::optional<int> max_chi;
};

/// Everything the pipeline produces for one parameter point. `state` is
/// vacuum-normalized.
struct NessSolution {
  LiouvillianCoeffs<double> liouvillian;
  ModeSpectrum<double> spectrum;
  TransferStack<double> stack;
  FoldResult<double> fold;
  TensorState state;
};

/// model -> Liouvillian -> stable projection -> stack -> fold -> tensor state.
/// Throws SolverError subclasses on physical or numerical degeneracy.
NessSolution solve_ness(const MajoranaHamiltonian<double>& h,
                        const std::vector<BathChannel<double>>& baths,
                        const SolverOptions& options = {});

NessSolution solve_kitaev(const KitaevParams<double>& params, const EndBathParams<double>& baths,
                          const SolverOptions& options = {});

}  // namespace ness
