#include "rovf/analysis.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "rovf/iteration.hpp"
#include "rovf/oracle.hpp"
#include "rovf/parallel.hpp"
#include "rovf/stats.hpp"

namespace rovf {

namespace {

constexpr double kAbsAgreementFloor = 1e-12;

}  // namespace

TrialSummary run_trials(const SamplerSpec& spec, const Vectord& x, int n_steps,
                        long n_trials, std::uint64_t master_seed, double delta,
                        int n_threads) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: need n_trials >= 1");
  if (n_steps < 1) throw std::invalid_argument("run_trials: need n_steps >= 1");
  if (!(delta >= 0.0)) throw std::invalid_argument("run_trials: delta must be >= 0");

  const std::size_t columns = static_cast<std::size_t>(n_steps) + 1;
  // Column-major per-step matrices of per-trial values: entry [k][t].
  std::vector<std::vector<double>> residual_sq(columns,
                                               std::vector<double>(static_cast<std::size_t>(n_trials)));
  std::vector<std::vector<double>> energy_cum(columns,
                                              std::vector<double>(static_cast<std::size_t>(n_trials)));
  std::vector<std::vector<unsigned char>> exceed(columns,
                                                 std::vector<unsigned char>(static_cast<std::size_t>(n_trials)));
  std::vector<long> violations(static_cast<std::size_t>(n_trials), 0);

  StoppingRule stop{n_steps, 0.0};
  auto work = [&](long begin, long end) {
    for (long t = begin; t < end; ++t) {
      IterationPath path =
          run_path(spec, x, stop, RngStream(master_seed, static_cast<std::uint64_t>(t)));
      violations[static_cast<std::size_t>(t)] = check_path_invariants(path).total();
      double energy = 0.0;
      for (int k = 0; k <= n_steps; ++k) {
        // Paths that hit an exact zero residual stop early; the tail is
        // constant zero, so padding reproduces the full-horizon path.
        double r = k <= path.step_count
                       ? path.residual_norms[static_cast<std::size_t>(k)]
                       : 0.0;
        if (k >= 1 && k <= path.step_count) {
          double term = path.term_norms[static_cast<std::size_t>(k - 1)];
          energy += term * term;
        }
        residual_sq[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)] = r * r;
        energy_cum[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)] = energy;
        exceed[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)] = r > delta ? 1 : 0;
      }
    }
  };
  parallel_chunks(n_trials, n_threads, work);

  TrialSummary summary;
  summary.spec_description = describe(spec);
  summary.x = x;
  summary.x_norm_sq = x.squaredNorm();
  summary.n_steps = n_steps;
  summary.n_trials = n_trials;
  summary.delta = delta;
  summary.mean_residual_sq.resize(columns);
  summary.stderr_residual_sq.resize(columns);
  summary.mean_frame_energy.resize(columns);
  summary.stderr_frame_energy.resize(columns);
  summary.exceedance_freq.resize(columns);
  for (std::size_t k = 0; k < columns; ++k) {
    summary.mean_residual_sq[k] =
        compensated_total(residual_sq[k].data(), n_trials) / static_cast<double>(n_trials);
    summary.stderr_residual_sq[k] = jackknife_stderr(residual_sq[k].data(), n_trials);
    summary.mean_frame_energy[k] =
        compensated_total(energy_cum[k].data(), n_trials) / static_cast<double>(n_trials);
    summary.stderr_frame_energy[k] = jackknife_stderr(energy_cum[k].data(), n_trials);
    long count = 0;
    for (unsigned char e : exceed[k]) count += e;
    summary.exceedance_freq[k] = static_cast<double>(count) / static_cast<double>(n_trials);
  }
  for (long v : violations) summary.violation_count += v;
  return summary;
}

CheckReport check_mean_square_bound(const TrialSummary& summary, double coercivity) {
  if (!(coercivity > 0.0) || coercivity > 1.0)
    throw std::invalid_argument(
        "check_mean_square_bound: coercivity constant must lie in (0, 1]");
  CheckReport report;
  report.name = "mean_square_bound";
  report.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= summary.n_steps; ++k) {
    double mean = summary.mean_residual_sq[static_cast<std::size_t>(k)];
    double band = 4.0 * summary.stderr_residual_sq[static_cast<std::size_t>(k)];
    double bound = std::pow(1.0 - coercivity, k) * summary.x_norm_sq + band +
                   kAbsAgreementFloor * std::max(1.0, summary.x_norm_sq);
    bool pass = mean <= bound;
    report.steps.push_back({k, mean, bound, pass});
    if (bound - mean < report.margin) {
      report.margin = bound - mean;
      report.measured = mean;
      report.bound = bound;
    }
    report.pass = report.pass && pass;
  }
  return report;
}

CheckReport check_frame_bounds(const TrialSummary& summary, double coercivity) {
  CheckReport report;
  report.name = "frame_bounds";
  std::size_t last = static_cast<std::size_t>(summary.n_steps);
  double energy = summary.mean_frame_energy[last];
  double slack = 4.0 * summary.stderr_frame_energy[last] +
                 kAbsAgreementFloor * std::max(1.0, summary.x_norm_sq);
  double lower = coercivity * summary.x_norm_sq - slack;
  double upper = summary.x_norm_sq + slack;
  report.measured = energy;
  report.pass = energy >= lower && energy <= upper;
  report.bound = upper;
  report.margin = std::min(upper - energy, energy - lower);
  return report;
}

CheckReport check_frame_bounds_oracle(const SamplerSpec& spec, const Vectord& x,
                                      double coercivity, double residual_tol,
                                      int max_steps) {
  auto horizon = steps_until_residual_below(spec, x, residual_tol, max_steps);
  if (!horizon)
    throw std::runtime_error(
        "check_frame_bounds_oracle: residual did not reach the requested tolerance");
  int n = std::max(1, *horizon);
  double energy = expected_frame_energy(spec, x, n);
  double epsilon_n = expected_residual_sq(spec, x, n);
  double x_norm_sq = x.squaredNorm();
  double slack = 1e-9 * std::max(1.0, x_norm_sq) + epsilon_n;
  CheckReport report;
  report.name = "frame_bounds_oracle";
  report.measured = energy;
  double lower = coercivity * x_norm_sq - slack;
  double upper = x_norm_sq + slack;
  report.bound = upper;
  report.pass = energy >= lower && energy <= upper;
  report.margin = std::min(upper - energy, energy - lower);
  return report;
}

std::vector<double> borel_cantelli_partial_sums(const TrialSummary& summary) {
  std::vector<double> sums(summary.exceedance_freq.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < sums.size(); ++k) {
    acc += summary.exceedance_freq[k];
    sums[k] = acc;
  }
  return sums;
}

CheckReport check_borel_cantelli(const TrialSummary& summary, double coercivity) {
  if (!(coercivity > 0.0) || coercivity > 1.0)
    throw std::invalid_argument("check_borel_cantelli: coercivity constant must lie in (0, 1]");
  if (!(summary.delta > 0.0))
    throw std::invalid_argument("check_borel_cantelli: delta must be positive");
  CheckReport report;
  report.name = "borel_cantelli_tail";
  double tail = borel_cantelli_partial_sums(summary).back();
  double variance = 0.0;
  for (double f : summary.exceedance_freq) variance += f * (1.0 - f);
  double slack = 4.0 * std::sqrt(variance / static_cast<double>(summary.n_trials));
  report.measured = tail;
  report.bound =
      summary.x_norm_sq / (coercivity * summary.delta * summary.delta) + slack;
  report.margin = report.bound - report.measured;
  report.pass = report.margin >= 0.0;
  return report;
}

CheckReport check_oracle_agreement(const TrialSummary& summary,
                                   const std::vector<double>& oracle_residual_sq) {
  if (oracle_residual_sq.size() != summary.mean_residual_sq.size())
    throw std::invalid_argument("check_oracle_agreement: curve length mismatch");
  CheckReport report;
  report.name = "oracle_agreement";
  report.margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= summary.n_steps; ++k) {
    auto idx = static_cast<std::size_t>(k);
    double deviation = std::abs(summary.mean_residual_sq[idx] - oracle_residual_sq[idx]);
    // Deep in the tail every sampled path may sit at exactly zero, which
    // collapses the empirical stderr while the exact mean is still positive.
    // 0 <= ||r||^2 <= ||x||^2 gives Var <= ||x||^2 * E[..], a model-side
    // standard error that stays valid there.
    double model_stderr = std::sqrt(summary.x_norm_sq * oracle_residual_sq[idx] /
                                    static_cast<double>(summary.n_trials));
    double allowed = 4.0 * std::max(summary.stderr_residual_sq[idx], model_stderr) +
                     kAbsAgreementFloor * std::max(1.0, summary.x_norm_sq);
    bool pass = deviation <= allowed;
    report.steps.push_back({k, deviation, allowed, pass});
    if (allowed - deviation < report.margin) {
      report.margin = allowed - deviation;
      report.measured = deviation;
      report.bound = allowed;
    }
    report.pass = report.pass && pass;
  }
  return report;
}

bool residual_plateau(const TrialSummary& summary) {
  std::size_t last = static_cast<std::size_t>(summary.n_steps);
  std::size_t half = last / 2;
  double at_half = summary.mean_residual_sq[half];
  double at_end = summary.mean_residual_sq[last];
  bool stalled = at_end >= (1.0 - 1e-3) * at_half;
  bool away_from_zero = at_end > 1e-12 * std::max(1.0, summary.x_norm_sq);
  return stalled && away_from_zero;
}

OperatorIdentityReport verify_operator_identity(const SamplerSpec& spec, int n_steps,
                                                long n_trials, std::uint64_t master_seed,
                                                int n_threads) {
  Index dim = dimension(spec);
  if (dim > 64)
    throw std::invalid_argument("verify_operator_identity: basis sweep limited to d <= 64");
  double coercivity = coercivity_constant(spec);
  if (!(coercivity > 0.0))
    throw std::invalid_argument("verify_operator_identity: coercivity constant must be positive");

  OperatorIdentityReport report;
  report.bound = std::pow(1.0 - coercivity, n_steps);
  StoppingRule stop{n_steps, 0.0};
  for (Index j = 0; j < dim; ++j) {
    Vectord basis_vector = Vectord::Zero(dim);
    basis_vector[j] = 1.0;
    std::vector<double> errors(static_cast<std::size_t>(n_trials));
    auto work = [&](long begin, long end) {
      for (long t = begin; t < end; ++t) {
        // Streams are offset per basis vector so trials stay independent.
        RngStream rng(master_seed,
                      static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(n_trials) +
                          static_cast<std::uint64_t>(t));
        IterationPath path = run_path(spec, basis_vector, stop, rng);
        Vectord reconstruction = Vectord::Zero(dim);
        for (const Vectord& term : path.terms) reconstruction += term;
        errors[static_cast<std::size_t>(t)] = (basis_vector - reconstruction).squaredNorm();
      }
    };
    parallel_chunks(n_trials, n_threads, work);
    double mean = compensated_total(errors.data(), n_trials) / static_cast<double>(n_trials);
    double std_error = jackknife_stderr(errors.data(), n_trials);
    report.mean_error_sq.push_back(mean);
    report.std_errors.push_back(std_error);
    report.max_error_sq = std::max(report.max_error_sq, mean);
    if (mean > report.bound + 4.0 * std_error + kAbsAgreementFloor) report.pass = false;
  }
  return report;
}

}  // namespace rovf
