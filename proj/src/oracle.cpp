#include "rovf/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace rovf {

TransferMap make_transfer_map(const SamplerSpec& spec) {
  AtomView view = discrete_atoms(spec);  // throws for random_spectral
  TransferMap map;
  map.dim = view.atoms[0].rows();
  map.probabilities = view.probabilities;
  map.factors.reserve(view.atoms.size());
  Matrixd identity = Matrixd::Identity(map.dim, map.dim);
  map.term_second_moment = Matrixd::Zero(map.dim, map.dim);
  for (std::size_t i = 0; i < view.atoms.size(); ++i) {
    map.factors.push_back(identity - view.atoms[i]);
    map.term_second_moment += view.probabilities[i] * (view.atoms[i] * view.atoms[i]);
  }
  map.term_second_moment = symmetric_part(map.term_second_moment);
  return map;
}

Matrixd apply_transfer(const TransferMap& map, const Matrixd& x) {
  if (x.rows() != map.dim || x.cols() != map.dim)
    throw std::invalid_argument("apply_transfer: dimension mismatch");
  if (!is_symmetric(x)) throw std::invalid_argument("apply_transfer: X is not symmetric");
  Matrixd out = Matrixd::Zero(map.dim, map.dim);
  for (std::size_t i = 0; i < map.factors.size(); ++i)
    out += map.probabilities[i] * (map.factors[i] * x * map.factors[i]);
  return symmetric_part(out);
}

std::vector<double> expected_residual_sq_curve(const SamplerSpec& spec, const Vectord& x,
                                               int n) {
  if (n < 0) throw std::invalid_argument("expected_residual_sq_curve: negative step count");
  TransferMap map = make_transfer_map(spec);
  if (x.size() != map.dim)
    throw std::invalid_argument("expected_residual_sq_curve: dimension mismatch");
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n) + 1);
  Matrixd state = Matrixd::Identity(map.dim, map.dim);
  curve.push_back(x.dot(state * x));
  for (int k = 1; k <= n; ++k) {
    state = apply_transfer(map, state);
    curve.push_back(x.dot(state * x));
  }
  return curve;
}

double expected_residual_sq(const SamplerSpec& spec, const Vectord& x, int n) {
  return expected_residual_sq_curve(spec, x, n).back();
}

std::vector<double> expected_frame_energy_curve(const SamplerSpec& spec, const Vectord& x,
                                                int n) {
  if (n < 0) throw std::invalid_argument("expected_frame_energy_curve: negative step count");
  TransferMap map = make_transfer_map(spec);
  if (x.size() != map.dim)
    throw std::invalid_argument("expected_frame_energy_curve: dimension mismatch");
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(n) + 1);
  curve.push_back(0.0);
  Matrixd state = map.term_second_moment;  // Phi^{k-1}(Q) at step k
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    acc += x.dot(state * x);
    curve.push_back(acc);
    if (k < n) state = apply_transfer(map, state);
  }
  return curve;
}

double expected_frame_energy(const SamplerSpec& spec, const Vectord& x, int n) {
  if (n < 1) throw std::invalid_argument("expected_frame_energy: need n >= 1");
  return expected_frame_energy_curve(spec, x, n).back();
}

namespace {

void enumerate_paths(const std::vector<Matrixd>& atoms, const std::vector<double>& probs,
                     const Vectord& residual, double weight, double energy, int remaining,
                     PathExpectations& out) {
  if (remaining == 0) {
    out.residual_sq += weight * residual.squaredNorm();
    out.frame_energy += weight * energy;
    return;
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    Vectord term = atoms[i] * residual;
    enumerate_paths(atoms, probs, Vectord(residual - term), weight * probs[i],
                    energy + term.squaredNorm(), remaining - 1, out);
  }
}

}  // namespace

PathExpectations brute_force_paths(const SamplerSpec& spec, const Vectord& x, int n,
                                   long budget) {
  if (n < 0) throw std::invalid_argument("brute_force_paths: negative step count");
  AtomView view = discrete_atoms(spec);
  double total = std::pow(static_cast<double>(view.atoms.size()), n);
  if (total > static_cast<double>(budget))
    throw std::invalid_argument("brute_force_paths: enumeration budget exceeded");
  if (x.size() != view.atoms[0].rows())
    throw std::invalid_argument("brute_force_paths: dimension mismatch");
  PathExpectations out;
  enumerate_paths(view.atoms, view.probabilities, x, 1.0, 0.0, n, out);
  return out;
}

Matrixd expectation_identity_partial_sum(const SamplerSpec& spec, int n) {
  if (n < 0) throw std::invalid_argument("expectation_identity_partial_sum: negative n");
  TransferMap map = make_transfer_map(spec);
  Matrixd total = Matrixd::Zero(map.dim, map.dim);
  if (n == 0) return total;
  Matrixd state = map.term_second_moment;
  total = state;
  for (int k = 2; k <= n; ++k) {
    state = apply_transfer(map, state);
    total += state;
  }
  return total;
}

double expectation_identity_defect(const SamplerSpec& spec, int n) {
  Matrixd partial = expectation_identity_partial_sum(spec, n);
  Index dim = partial.rows();
  return (partial - Matrixd::Identity(dim, dim)).norm();
}

std::optional<int> steps_until_residual_below(const SamplerSpec& spec, const Vectord& x,
                                              double tol_rel, int max_steps) {
  TransferMap map = make_transfer_map(spec);
  if (x.size() != map.dim)
    throw std::invalid_argument("steps_until_residual_below: dimension mismatch");
  double target = tol_rel * x.squaredNorm();
  Matrixd state = Matrixd::Identity(map.dim, map.dim);
  if (x.dot(state * x) <= target) return 0;
  for (int k = 1; k <= max_steps; ++k) {
    state = apply_transfer(map, state);
    if (x.dot(state * x) <= target) return k;
  }
  return std::nullopt;
}

}  // namespace rovf
