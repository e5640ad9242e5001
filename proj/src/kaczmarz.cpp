#include "rovf/kaczmarz.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rovf/iteration.hpp"
#include "rovf/linalg.hpp"

namespace rovf {

namespace {

// Must reproduce the sampler factories' probability arithmetic exactly so
// that solve_rk and a row-projection sampler sharing a stream draw the same
// row indices.
std::vector<double> row_cumulative(const Matrixd& a, RowSampling sampling) {
  std::size_t m = static_cast<std::size_t>(a.rows());
  std::vector<double> probabilities(m);
  if (sampling == RowSampling::SquaredNorm) {
    double total = a.squaredNorm();
    for (Index i = 0; i < a.rows(); ++i)
      probabilities[static_cast<std::size_t>(i)] = a.row(i).squaredNorm() / total;
  } else {
    double uniform = 1.0 / static_cast<double>(a.rows());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += uniform;
    for (std::size_t i = 0; i < m; ++i) probabilities[i] = uniform / sum;
  }
  std::vector<double> cumulative(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += probabilities[i];
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;
  return cumulative;
}

double consistency_scale(const LinearSystem& system, const Vectord& candidate) {
  return system.matrix.norm() * candidate.norm() + system.rhs.norm();
}

}  // namespace

LinearSystem make_linear_system(Matrixd matrix, Vectord rhs,
                                std::optional<Vectord> known_solution) {
  if (matrix.rows() == 0 || matrix.cols() == 0)
    throw std::invalid_argument("linear_system: empty matrix");
  if (rhs.size() != matrix.rows())
    throw std::invalid_argument("linear_system: rhs length does not match row count");
  if (!has_finite_entries(matrix) || !rhs.allFinite())
    throw std::invalid_argument("linear_system: non-finite entries");
  for (Index i = 0; i < matrix.rows(); ++i) {
    if (matrix.row(i).squaredNorm() == 0.0) {
      std::ostringstream msg;
      msg << "linear_system: row " << i << " is zero";
      throw std::invalid_argument(msg.str());
    }
  }
  LinearSystem system{std::move(matrix), std::move(rhs), std::move(known_solution)};
  if (system.known_solution) {
    if (system.known_solution->size() != system.matrix.cols())
      throw std::invalid_argument("linear_system: solution length does not match column count");
    double residual = (system.matrix * *system.known_solution - system.rhs).norm();
    double scale = std::max(1.0, consistency_scale(system, *system.known_solution));
    if (residual > 1e-10 * scale)
      throw std::invalid_argument("linear_system: known solution does not solve the system");
  }
  return system;
}

Vectord consistent_solution(const LinearSystem& system) {
  if (system.known_solution) return *system.known_solution;
  Vectord candidate =
      system.matrix.completeOrthogonalDecomposition().solve(system.rhs);
  double residual = (system.matrix * candidate - system.rhs).norm();
  double scale = std::max(1.0, consistency_scale(system, candidate));
  if (residual > 1e-8 * scale)
    throw std::invalid_argument(
        "consistent_solution: system is inconsistent (least-squares residual too large)");
  return candidate;
}

RkHistory solve_rk(const LinearSystem& system, const Vectord& x0, int steps, RngStream rng,
                   RowSampling sampling, bool keep_iterates) {
  if (steps < 1) throw std::invalid_argument("solve_rk: need steps >= 1");
  if (x0.size() != system.matrix.cols())
    throw std::invalid_argument("solve_rk: x0 length does not match column count");
  Vectord x_star = consistent_solution(system);

  RkHistory history;
  history.seed = rng.seed();
  history.stream_index = rng.stream_index();
  history.error_norms.reserve(static_cast<std::size_t>(steps) + 1);
  history.error_norms.push_back((x0 - x_star).norm());
  if (keep_iterates) history.iterates.push_back(x0);

  std::vector<double> cumulative = row_cumulative(system.matrix, sampling);
  Vectord x = x0;
  for (int k = 1; k <= steps; ++k) {
    Index row = rng.discrete(cumulative);
    auto a = system.matrix.row(row);
    double correction = (system.rhs[row] - a.dot(x)) / a.squaredNorm();
    x += correction * a.transpose();
    history.error_norms.push_back((x - x_star).norm());
    if (keep_iterates) history.iterates.push_back(x);
  }
  history.final_iterate = std::move(x);
  return history;
}

RateResult rate(const LinearSystem& system, RowSampling sampling) {
  const Matrixd& a = system.matrix;
  Matrixd moment;
  if (sampling == RowSampling::SquaredNorm) {
    moment = symmetric_part(a.transpose() * a) / a.squaredNorm();
  } else {
    moment = Matrixd::Zero(a.cols(), a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
      Vectord row = a.row(i).transpose();
      moment += row * row.transpose() / row.squaredNorm();
    }
    moment = symmetric_part(moment / static_cast<double>(a.rows()));
  }
  auto decomp = spectral(moment);
  double lambda_min = decomp.eigenvalues[0];
  double lambda_max = decomp.eigenvalues[decomp.eigenvalues.size() - 1];
  RateResult result;
  result.coercive = lambda_min > 1e-12 * std::max(1.0, lambda_max);
  result.value = result.coercive ? lambda_min : 0.0;
  return result;
}

SamplerSpec row_projection_sampler(const LinearSystem& system, RowSampling sampling) {
  if (sampling == RowSampling::SquaredNorm) return make_kaczmarz_rows(system.matrix);
  std::vector<Matrixd> atoms;
  std::vector<double> probabilities;
  atoms.reserve(static_cast<std::size_t>(system.matrix.rows()));
  for (Index i = 0; i < system.matrix.rows(); ++i) {
    Vectord row = system.matrix.row(i).transpose();
    atoms.push_back(Matrixd(row * row.transpose() / row.squaredNorm()));
    probabilities.push_back(1.0 / static_cast<double>(system.matrix.rows()));
  }
  return make_discrete_mixture(std::move(atoms), std::move(probabilities));
}

double error_process_equivalence(const LinearSystem& system, const Vectord& x0, int steps,
                                 RngStream rng, RowSampling sampling) {
  Vectord x_star = consistent_solution(system);
  RkHistory history = solve_rk(system, x0, steps, rng, sampling, /*keep_iterates=*/true);
  SamplerSpec spec = row_projection_sampler(system, sampling);
  IterationPath path =
      run_path(spec, Vectord(x0 - x_star), StoppingRule{steps, 0.0}, rng, steps);

  double max_deviation = 0.0;
  Vectord residual = x0 - x_star;
  // Rebuild the residual sequence from the stored terms; both runs consumed
  // the stream identically, so step k of each refers to the same row draw.
  for (int k = 0; k <= steps; ++k) {
    if (k > 0 && k <= path.step_count)
      residual -= path.terms[static_cast<std::size_t>(k - 1)];
    else if (k > path.step_count)
      residual.setZero();
    Vectord error = history.iterates[static_cast<std::size_t>(k)] - x_star;
    max_deviation = std::max(max_deviation, (error - residual).norm());
  }
  return max_deviation;
}

}  // namespace rovf
