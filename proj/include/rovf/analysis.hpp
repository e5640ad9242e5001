#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rovf/samplers.hpp"
#include "rovf/types.hpp"

namespace rovf {

/// Aggregated statistics over independent trajectories. Per-step arrays are
/// indexed 0..n_steps (step 0 is the initial state). Means and standard
/// errors are folded in trial order with compensated summation, so the
/// summary is bitwise identical for a given master seed regardless of the
/// worker count.
struct TrialSummary {
  std::string spec_description;
  Vectord x;
  double x_norm_sq = 0.0;
  int n_steps = 0;
  long n_trials = 0;
  double delta = 0.0;  // absolute exceedance threshold

  std::vector<double> mean_residual_sq;
  std::vector<double> stderr_residual_sq;
  std::vector<double> mean_frame_energy;  // cumulative sum of E||t_k||^2
  std::vector<double> stderr_frame_energy;
  std::vector<double> exceedance_freq;    // freq(||r_k|| > delta)
  long violation_count = 0;               // per-path invariant failures, must be 0
};

TrialSummary run_trials(const SamplerSpec& spec, const Vectord& x, int n_steps,
                        long n_trials, std::uint64_t master_seed, double delta,
                        int n_threads = 1);

struct StepCheck {
  int step = 0;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct CheckReport {
  std::string name;
  bool pass = true;
  double measured = 0.0;  // worst-case measured value
  double bound = 0.0;     // bound it is compared against (slack included)
  double margin = 0.0;    // bound - measured at the worst step
  std::vector<StepCheck> steps;
};

/// Mean-square decay: mean ||r_n||^2 <= (1-C)^n ||x||^2 + 4 stderr at every
/// step. Rejects C outside (0, 1].
CheckReport check_mean_square_bound(const TrialSummary& summary, double coercivity);

/// Two-sided frame bounds on the accumulated energy at the final step:
/// C||x||^2 - slack <= E[sum ||t_k||^2] <= ||x||^2 + slack, slack = 4 stderr.
CheckReport check_frame_bounds(const TrialSummary& summary, double coercivity);

/// Oracle variant of the frame-bound check: runs the exact recursion out to
/// the step where E||r_n||^2 <= residual_tol * ||x||^2 and uses slack
/// 1e-9 + epsilon_n instead of a Monte Carlo band.
CheckReport check_frame_bounds_oracle(const SamplerSpec& spec, const Vectord& x,
                                      double coercivity, double residual_tol = 1e-8,
                                      int max_steps = 100000);

/// Partial sums over n of freq(||r_n|| > delta).
std::vector<double> borel_cantelli_partial_sums(const TrialSummary& summary);

/// Tail-sum bound: the final partial sum must stay below
/// ||x||^2 / (C delta^2) plus a 4-sigma Monte Carlo slack.
CheckReport check_borel_cantelli(const TrialSummary& summary, double coercivity);

/// Agreement of Monte Carlo means with an exact per-step reference within
/// 4 stderr (plus a tiny absolute floor for exactly reproduced values).
CheckReport check_oracle_agreement(const TrialSummary& summary,
                                   const std::vector<double>& oracle_residual_sq);

/// Flags a residual curve that has stopped decreasing while still far from
/// zero; the signature of a sampler with no coercivity.
bool residual_plateau(const TrialSummary& summary);

struct OperatorIdentityReport {
  std::vector<double> mean_error_sq;  // per canonical basis vector
  std::vector<double> std_errors;
  double max_error_sq = 0.0;
  double bound = 0.0;  // (1-C)^n, before the per-basis 4-sigma slack
  bool pass = true;
};

/// Reconstruction check of the identity through its action on the canonical
/// basis: for each e_j, the trial mean of ||e_j - sum_k t_k||^2 must decay
/// like (1-C)^n. Discrete specs, d <= 64.
OperatorIdentityReport verify_operator_identity(const SamplerSpec& spec, int n_steps,
                                                long n_trials, std::uint64_t master_seed,
                                                int n_threads = 1);

}  // namespace rovf
