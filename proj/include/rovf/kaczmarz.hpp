#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rovf/rng.hpp"
#include "rovf/samplers.hpp"
#include "rovf/types.hpp"

namespace rovf {

struct LinearSystem {
  Matrixd matrix;  // m x d, no zero rows
  Vectord rhs;
  std::optional<Vectord> known_solution;
};

/// Validates shape, zero rows, and (when given) that known_solution solves
/// the system to within 1e-10 relative.
LinearSystem make_linear_system(Matrixd matrix, Vectord rhs,
                                std::optional<Vectord> known_solution = {});

/// The stored solution, or a least-squares solve accepted only when its
/// residual certifies consistency (<= 1e-8 relative). Throws otherwise.
Vectord consistent_solution(const LinearSystem& system);

enum class RowSampling { SquaredNorm, Uniform };

struct RkHistory {
  std::vector<double> error_norms;  // ||x_k - x_star||, k = 0..steps
  std::vector<Vectord> iterates;    // kept only on request
  Vectord final_iterate;
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

/// Randomized row-projection solver: x_k = x_{k-1} + (b_i - <a_i, x_{k-1}>)
/// a_i / ||a_i||^2 with row i drawn by `sampling`. Requires a consistent
/// system.
RkHistory solve_rk(const LinearSystem& system, const Vectord& x0, int steps, RngStream rng,
                   RowSampling sampling = RowSampling::SquaredNorm,
                   bool keep_iterates = false);

struct RateResult {
  double value = 0.0;
  bool coercive = false;  // false when the matrix is column-rank deficient
};

/// Convergence rate constant of the solver: lambda_min(A^T A) / ||A||_F^2
/// under squared-norm sampling, lambda_min(sum P_i / m) under uniform.
RateResult rate(const LinearSystem& system, RowSampling sampling = RowSampling::SquaredNorm);

/// Sampler whose draws are the row projections of the system with the same
/// probabilities and stream consumption as solve_rk.
SamplerSpec row_projection_sampler(const LinearSystem& system,
                                   RowSampling sampling = RowSampling::SquaredNorm);

/// Runs solve_rk and the contraction iteration on x0 - x_star with identical
/// streams and returns max_k ||(x_k - x_star) - r_k||. The two recursions are
/// algebraically identical, so this should sit at rounding level.
double error_process_equivalence(const LinearSystem& system, const Vectord& x0, int steps,
                                 RngStream rng,
                                 RowSampling sampling = RowSampling::SquaredNorm);

}  // namespace rovf
