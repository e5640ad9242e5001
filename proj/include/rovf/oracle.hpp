#pragma once

#include <optional>
#include <vector>

#include "rovf/samplers.hpp"
#include "rovf/types.hpp"

namespace rovf {

/// The conditioning recursion of the scheme as a completely positive map
///   Phi(X) = sum_i p_i (I - T_i) X (I - T_i),
/// so that E[R_n^T X R_n] = Phi^n(X) exactly for discrete samplers.
struct TransferMap {
  std::vector<Matrixd> factors;        // I - T_i
  std::vector<double> probabilities;
  Matrixd term_second_moment;          // Q = sum_i p_i T_i^2
  Index dim = 0;
};

/// Discrete specs only; random_spectral has no finite atom list.
TransferMap make_transfer_map(const SamplerSpec& spec);

Matrixd apply_transfer(const TransferMap& map, const Matrixd& x);

/// E||R_k x||^2 = <x, Phi^k(I) x> for k = 0..n (exact, no sampling).
std::vector<double> expected_residual_sq_curve(const SamplerSpec& spec, const Vectord& x,
                                               int n);
double expected_residual_sq(const SamplerSpec& spec, const Vectord& x, int n);

/// Cumulative expected frame energy sum_{j<=k} E||t_j||^2 for k = 0..n,
/// with E||t_j||^2 = <x, Phi^{j-1}(Q) x>.
std::vector<double> expected_frame_energy_curve(const SamplerSpec& spec, const Vectord& x,
                                                int n);
double expected_frame_energy(const SamplerSpec& spec, const Vectord& x, int n);

struct PathExpectations {
  double residual_sq = 0.0;
  double frame_energy = 0.0;
};

/// Independent oracle: enumerate every length-n atom sequence, weight by its
/// probability, and run the deterministic recursion. Exponential in n; the
/// budget caps |atoms|^n.
PathExpectations brute_force_paths(const SamplerSpec& spec, const Vectord& x, int n,
                                   long budget = 1000000);

/// sum_{k<=n} Phi^{k-1}(Q) = E[ sum_{k<=n} T_k^* T_k ] where T_k denotes the
/// k-th frame operator of the scheme. Converges to I for projection-valued
/// specs with positive coercivity.
Matrixd expectation_identity_partial_sum(const SamplerSpec& spec, int n);

/// Frobenius distance of the partial sum above from the identity.
double expectation_identity_defect(const SamplerSpec& spec, int n);

/// Smallest n with E||R_n x||^2 <= tol_rel * ||x||^2, or nullopt if not
/// reached within max_steps.
std::optional<int> steps_until_residual_below(const SamplerSpec& spec, const Vectord& x,
                                              double tol_rel, int max_steps);

}  // namespace rovf
