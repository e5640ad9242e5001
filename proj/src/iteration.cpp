#include "rovf/iteration.hpp"

#include <cmath>
#include <stdexcept>

namespace rovf {

IterationPath run_path(const SamplerSpec& spec, const Vectord& x, const StoppingRule& stop,
                       RngStream rng, int term_cap) {
  if (stop.max_steps < 1) throw std::invalid_argument("run_path: max_steps must be >= 1");
  if (!(stop.residual_tol >= 0.0) || !std::isfinite(stop.residual_tol))
    throw std::invalid_argument("run_path: residual_tol must be finite and >= 0");
  if (term_cap < 0) throw std::invalid_argument("run_path: negative term cap");
  if (x.size() != dimension(spec)) throw std::invalid_argument("run_path: dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("run_path: x has non-finite entries");

  IterationPath path;
  path.x0 = x;
  path.seed = rng.seed();
  path.stream_index = rng.stream_index();

  double x_norm = x.norm();
  path.residual_norms.push_back(x_norm);
  if (x_norm == 0.0) {
    path.final_residual = x;
    return path;
  }

  double stop_norm = stop.residual_tol * x_norm;
  Vectord residual = x;
  for (int k = 1; k <= stop.max_steps; ++k) {
    Matrixd op = sample(spec, rng);
    Vectord term = op * residual;
    residual -= term;
    path.term_norms.push_back(term.norm());
    if (k <= term_cap) path.terms.push_back(std::move(term));
    double r_norm = residual.norm();
    path.residual_norms.push_back(r_norm);
    path.step_count = k;
    if (r_norm <= stop_norm) break;
  }
  path.final_residual = residual;
  return path;
}

double frame_energy(const IterationPath& path) {
  double energy = 0.0;
  for (double t : path.term_norms) energy += t * t;
  return energy;
}

double parseval_defect(const IterationPath& path) {
  double r_final = path.residual_norms.back();
  return std::abs(frame_energy(path) + r_final * r_final - path.x0.squaredNorm());
}

double telescoping_defect(const IterationPath& path) {
  if (!path.all_terms_stored())
    throw std::logic_error("telescoping_defect: term vectors beyond the cap were dropped");
  Vectord acc = path.x0 - path.final_residual;
  for (const Vectord& term : path.terms) acc -= term;
  return acc.norm();
}

PathViolations check_path_invariants(const IterationPath& path) {
  PathViolations violations;
  double x_norm = path.x0.norm();
  double x_norm_sq = path.x0.squaredNorm();
  for (int k = 1; k <= path.step_count; ++k) {
    double prev = path.residual_norms[static_cast<std::size_t>(k - 1)];
    double cur = path.residual_norms[static_cast<std::size_t>(k)];
    double term = path.term_norms[static_cast<std::size_t>(k - 1)];
    if (cur > prev + 1e-12 * x_norm) ++violations.monotonicity;
    if (term * term + cur * cur > prev * prev + 1e-9 * x_norm_sq)
      ++violations.energy_certificate;
  }
  if (path.all_terms_stored() && telescoping_defect(path) > 1e-12 * x_norm)
    ++violations.telescoping;
  return violations;
}

}  // namespace rovf
