#pragma once

#include <cstdint>
#include <vector>

#include "rovf/samplers.hpp"
#include "rovf/types.hpp"

namespace rovf {

struct StoppingRule {
  int max_steps = 0;                // required, >= 1
  double residual_tol = 0.0;        // stop once ||r_k|| <= residual_tol * ||x0||
};

inline constexpr int kDefaultTermCap = 10000;

/// One realized trajectory of the scheme
///   t_k = Psi_k r_{k-1},   r_k = r_{k-1} - t_k,   r_0 = x0.
/// Only operator-vector products are formed; the residual operator product
/// is never materialized. Term vectors are kept up to `term_cap` steps,
/// norms always.
struct IterationPath {
  Vectord x0;
  std::vector<Vectord> terms;          // t_1 .. t_min(n, cap)
  std::vector<double> term_norms;      // ||t_1|| .. ||t_n||
  std::vector<double> residual_norms;  // ||r_0|| .. ||r_n||
  Vectord final_residual;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
  int step_count = 0;

  bool all_terms_stored() const {
    return terms.size() == static_cast<std::size_t>(step_count);
  }
};

IterationPath run_path(const SamplerSpec& spec, const Vectord& x, const StoppingRule& stop,
                       RngStream rng, int term_cap = kDefaultTermCap);

/// sum_k ||t_k||^2
double frame_energy(const IterationPath& path);

/// | sum_k ||t_k||^2 + ||r_n||^2 - ||x0||^2 |. Vanishes pathwise when every
/// sampled operator is a projection; strictly positive otherwise.
double parseval_defect(const IterationPath& path);

/// ||x0 - sum_k t_k - r_n||, the defect of the exact splitting of x0.
/// Requires all term vectors stored.
double telescoping_defect(const IterationPath& path);

struct PathViolations {
  int monotonicity = 0;       // ||r_k|| > ||r_{k-1}|| beyond tolerance
  int energy_certificate = 0; // ||t_k||^2 + ||r_k||^2 > ||r_{k-1}||^2 beyond tolerance
  int telescoping = 0;
  int total() const { return monotonicity + energy_certificate + telescoping; }
};

PathViolations check_path_invariants(const IterationPath& path);

}  // namespace rovf
