#include "ness/pipeline.hpp"

namespace ness {

NessSolution solve_ness(const MajoranaHamiltonian<double>& h,
                        const std::vector<BathChannel<double>>& baths,
                        const SolverOptions& options) {
  auto liouvillian = build_liouvillian(h, baths);
  auto spectrum = decompose(liouvillian, options.eps_z);
  auto stack = build_stack(stable_projector(spectrum), h.sites);
  auto folded = fold(stack, options.eps_fold);
  auto state =
      TensorState::product(closure_occupations(folded), options.trunc_tol, options.max_chi);
  apply_inverse_sequence(state, folded);
  state.normalize_vacuum();
  return NessSolution{std::move(liouvillian), std::move(spectrum), std::move(stack),
                      std::move(folded), std::move(state)};
}

NessSolution solve_kitaev(const KitaevParams<double>& params, const EndBathParams<double>& baths,
                          const SolverOptions& options) {
  return solve_ness(build_kitaev(params), end_baths(params.sites, baths), options);
}

}  // namespace ness
