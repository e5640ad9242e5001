#include "rovf/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "rovf/analysis.hpp"
#include "rovf/iteration.hpp"
#include "rovf/matrix_market.hpp"
#include "rovf/oracle.hpp"
#include "rovf/parallel.hpp"
#include "rovf/stats.hpp"

namespace rovf {

namespace fs = std::filesystem;

namespace {

// Streams 0..n_trials-1 belong to trial paths; auxiliary draws live in a
// disjoint high range.
constexpr std::uint64_t kStreamX = 0x8000000000000001ULL;
constexpr std::uint64_t kStreamMc = 0x8000000000000002ULL;
constexpr std::uint64_t kStreamEquivBase = 0x8000000000001000ULL;
constexpr std::uint64_t kStreamSuccessBase = 0x4000000000000000ULL;

constexpr double kAbsFloor = 1e-12;

std::string csv_field(double value) { return format_double(value); }
std::string csv_field(long value) { return std::to_string(value); }
std::string csv_field(int value) { return std::to_string(value); }
std::string csv_field(const char* value) { return value; }

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file " + path.string());
    out_ << header << "\n";
  }
  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, out_ << csv_field(fields)), ...);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

VerdictCheck upper_check(std::string name, std::string claim, double measured,
                         double bound) {
  VerdictCheck check{std::move(name), std::move(claim), measured, bound,
                     bound - measured, measured <= bound};
  return check;
}

VerdictCheck lower_check(std::string name, std::string claim, double measured,
                         double bound) {
  VerdictCheck check{std::move(name), std::move(claim), measured, bound,
                     measured - bound, measured >= bound};
  return check;
}

VerdictCheck positivity_check(std::string name, std::string claim, double measured) {
  VerdictCheck check{std::move(name), std::move(claim), measured, 0.0, measured,
                     measured > 0.0};
  return check;
}

VerdictCheck from_report(const CheckReport& report, std::string claim) {
  return VerdictCheck{report.name, std::move(claim), report.measured, report.bound,
                      report.margin, report.pass};
}

Vectord resolve_x(const ExperimentConfig& config, Index dim) {
  const VectorChoice& choice = *config.x;
  switch (choice.mode) {
    case VectorChoice::Mode::Explicit:
      if (choice.entries.size() != dim)
        throw std::invalid_argument("x: explicit entries do not match the sampler dimension");
      return choice.entries;
    case VectorChoice::Mode::RandomUnit: {
      RngStream rng(config.seed, kStreamX);
      return random_unit_vector(dim, rng);
    }
    default:
      throw std::logic_error("resolve_x: basis-sweep is handled by the experiment");
  }
}

/// Exact coercivity constant where available; the closed-form spectral
/// moment for the random-spectral law. Clamped into [*, 1] against rounding.
double reference_coercivity(const SamplerSpec& spec) {
  double c;
  if (const auto* rs = std::get_if<RandomSpectral>(&spec))
    c = uniform_spectral_second_moment(rs->lo, rs->hi);
  else
    c = coercivity_constant(spec);
  return std::min(c, 1.0);
}

void write_curve_csv(const fs::path& dir, const TrialSummary& summary, double coercivity) {
  CsvFile csv(dir / "curve.csv", "step,mean_res_sq,stderr,bound,mean_energy,exceed_freq");
  double base = std::max(coercivity, 0.0);
  for (int k = 0; k <= summary.n_steps; ++k) {
    auto i = static_cast<std::size_t>(k);
    double bound = std::pow(1.0 - base, k) * summary.x_norm_sq;
    csv.row(k, summary.mean_residual_sq[i], summary.stderr_residual_sq[i], bound,
            summary.mean_frame_energy[i], summary.exceedance_freq[i]);
  }
}

void write_oracle_csv(const fs::path& dir, const SamplerSpec& spec, const Vectord& x,
                      int n_steps, double coercivity) {
  auto residual = expected_residual_sq_curve(spec, x, n_steps);
  auto energy = expected_frame_energy_curve(spec, x, n_steps);
  CsvFile csv(dir / "oracle.csv", "step,exp_residual_sq,exp_frame_energy,bound");
  double base = std::max(coercivity, 0.0);
  double x_norm_sq = x.squaredNorm();
  for (int k = 0; k <= n_steps; ++k) {
    auto i = static_cast<std::size_t>(k);
    csv.row(k, residual[i], energy[i], std::pow(1.0 - base, k) * x_norm_sq);
  }
}

void write_paths_json(const fs::path& dir, const ExperimentConfig& config,
                      const SamplerSpec& spec, const Vectord& x) {
  long limit = std::min<long>(config.trials, 1000);
  Json paths = Json::array();
  for (long t = 0; t < limit; ++t) {
    IterationPath path = run_path(spec, x, StoppingRule{config.steps, 0.0},
                                  RngStream(config.seed, static_cast<std::uint64_t>(t)));
    paths.push_back(path_to_json(path, /*with_vectors=*/true));
  }
  std::ofstream out(dir / "paths.json");
  out << paths.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// lemma2-sweep: randomized verification of the contraction energy split.

VerdictDocument run_energy_gap_sweep(const ExperimentConfig& config, const fs::path& dir) {
  VerdictDocument verdict;
  verdict.experiment = kind_token(config.kind);
  CsvFile csv(dir / "gap_sweep.csv", "index,dim,variant,gap_rel");
  int span = config.max_dim - config.min_dim + 1;
  double min_contraction_gap = std::numeric_limits<double>::infinity();
  double max_projection_gap = 0.0;
  for (int i = 0; i < config.pairs; ++i) {
    Index dim = config.min_dim + (i % span);
    RngStream rng(config.seed, static_cast<std::uint64_t>(i));

    Matrixd contraction = random_contraction(dim, rng);
    Vectord x = gaussian_vector(dim, rng);
    double gap = energy_gap(contraction, x) / x.squaredNorm();
    min_contraction_gap = std::min(min_contraction_gap, gap);
    csv.row(i, static_cast<long>(dim), "contraction", gap);

    Index rank = 1 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(dim));
    Matrixd projection = random_projection(dim, rank, rng);
    Vectord y = gaussian_vector(dim, rng);
    double projection_gap = energy_gap(projection, y) / y.squaredNorm();
    max_projection_gap = std::max(max_projection_gap, std::abs(projection_gap));
    csv.row(i, static_cast<long>(dim), "projection", projection_gap);
  }
  verdict.checks.push_back(lower_check(
      "contraction_gap_nonnegative",
      "||Tx||^2 + ||x-Tx||^2 <= ||x||^2 for every positive contraction 0 <= T <= I",
      min_contraction_gap, -1e-9));
  verdict.checks.push_back(upper_check(
      "projection_gap_equality",
      "the energy split is an equality when T is an orthogonal projection",
      max_projection_gap, 1e-10));
  return verdict;
}

// ---------------------------------------------------------------------------
// dilation-check: block-dilation certificates for random contractions.

VerdictDocument run_dilation_check(const ExperimentConfig& config, const fs::path& dir) {
  VerdictDocument verdict;
  verdict.experiment = kind_token(config.kind);
  CsvFile csv(dir / "dilation_cases.csv",
              "index,dim,isometry_residual,idempotency_residual,compression_residual,"
              "split_defect,eigenvalue_clamp");
  int span = config.max_dim - config.min_dim + 1;
  double max_isometry = 0.0, max_idempotency = 0.0, max_compression = 0.0, max_split = 0.0;
  Json reports = Json::array();
  for (int i = 0; i < config.cases; ++i) {
    Index dim = config.min_dim + (i % span);
    RngStream rng(config.seed, static_cast<std::uint64_t>(i));
    Matrixd contraction = random_contraction(dim, rng);
    Dilation<double> dilation = halmos_dilate(contraction);
    DilationReport<double> report = verify_dilation(contraction, dilation, 1e-10);

    Vectord x = gaussian_vector(dim, rng);
    Vectord embedded = dilation.isometry * x;
    Vectord projected = dilation.projection * embedded;
    double split = std::abs(projected.squaredNorm() + (embedded - projected).squaredNorm() -
                            x.squaredNorm()) /
                   x.squaredNorm();

    max_isometry = std::max(max_isometry, report.isometry_residual);
    max_idempotency = std::max(max_idempotency, report.idempotency_residual);
    max_compression = std::max(max_compression, report.compression_residual);
    max_split = std::max(max_split, split);
    csv.row(i, static_cast<long>(dim), report.isometry_residual,
            report.idempotency_residual, report.compression_residual, split,
            dilation.max_eigenvalue_clamp);
    Json entry = dilation_report_to_json(report);
    entry["index"] = i;
    entry["dim"] = dim;
    entry["eigenvalue_clamp"] = dilation.max_eigenvalue_clamp;
    reports.push_back(std::move(entry));
  }
  std::ofstream(dir / "reports.json") << reports.dump(2) << "\n";
  verdict.checks.push_back(upper_check("isometry_residual",
                                       "W^T W = I for the embedding W: x -> (x, 0)",
                                       max_isometry, 1e-12));
  verdict.checks.push_back(upper_check(
      "idempotency_residual", "P^2 = P for the block dilation projection", max_idempotency,
      1e-10));
  verdict.checks.push_back(upper_check("compression_residual",
                                       "W^T P W recovers the dilated contraction",
                                       max_compression, 1e-10));
  verdict.checks.push_back(upper_check(
      "orthogonal_split",
      "||PWx||^2 + ||(I-P)Wx||^2 = ||x||^2 for the isometric embedding", max_split, 1e-10));
  return verdict;
}

// ---------------------------------------------------------------------------
// convergence: Monte Carlo decay, frame bounds, exceedance tail, and oracle
// agreement for one sampler.

void append_trial_checks(VerdictDocument& verdict, const TrialSummary& summary,
                         double coercivity) {
  verdict.checks.push_back(upper_check(
      "path_invariants",
      "per-path telescoping, monotone residuals, and step energy certificates",
      static_cast<double>(summary.violation_count), 0.0));
  verdict.checks.push_back(positivity_check(
      "coercivity_positive", "E||Psi x||^2 >= C ||x||^2 with C = lambda_min(E[Psi^T Psi]) > 0",
      coercivity));
  if (coercivity > 0.0) {
    verdict.checks.push_back(
        from_report(check_mean_square_bound(summary, coercivity),
                    "mean-square decay E||r_n||^2 <= (1-C)^n ||x||^2"));
    verdict.checks.push_back(
        from_report(check_frame_bounds(summary, coercivity),
                    "frame bounds C||x||^2 <= E[sum_k ||t_k||^2] <= ||x||^2"));
  } else {
    bool plateau = residual_plateau(summary);
    VerdictCheck check{"residual_plateau_detected",
                       "a sampler without coercivity stalls at a positive residual",
                       summary.mean_residual_sq.back(), 0.0, 0.0, plateau};
    verdict.checks.push_back(check);
  }
}

VerdictDocument run_convergence(const ExperimentConfig& config, const fs::path& dir) {
  VerdictDocument verdict;
  verdict.experiment = kind_token(config.kind);
  const SamplerSpec& spec = *config.sampler;

  if (config.x->mode == VectorChoice::Mode::BasisSweep) {
    OperatorIdentityReport report = verify_operator_identity(
        spec, config.steps, config.trials, config.seed, config.threads);
    CsvFile csv(dir / "identity_errors.csv", "basis_index,mean_error_sq,stderr,bound");
    for (std::size_t j = 0; j < report.mean_error_sq.size(); ++j)
      csv.row(static_cast<long>(j), report.mean_error_sq[j], report.std_errors[j],
              report.bound);
    VerdictCheck check{"operator_identity",
                       "sum_k t_k reconstructs every canonical basis vector at rate (1-C)^n",
                       report.max_error_sq, report.bound, report.bound - report.max_error_sq,
                       report.pass};
    verdict.checks.push_back(check);
    return verdict;
  }

  Vectord x = resolve_x(config, dimension(spec));
  double coercivity = reference_coercivity(spec);
  double delta_abs = config.delta * x.norm();
  TrialSummary summary = run_trials(spec, x, config.steps, config.trials, config.seed,
                                    delta_abs, config.threads);
  append_trial_checks(verdict, summary, coercivity);
  if (coercivity > 0.0)
    verdict.checks.push_back(
        from_report(check_borel_cantelli(summary, coercivity),
                    "exceedance tail sum_n P(||r_n|| > delta) <= ||x||^2 / (C delta^2)"));
  if (is_discrete(spec)) {
    verdict.checks.push_back(from_report(
        check_oracle_agreement(summary, expected_residual_sq_curve(spec, x, config.steps)),
        "Monte Carlo means match the exact conditional-expectation recursion"));
    write_oracle_csv(dir, spec, x, config.steps, coercivity);
  }
  write_curve_csv(dir, summary, coercivity);
  if (config.full_paths) write_paths_json(dir, config, spec, x);
  return verdict;
}

// ---------------------------------------------------------------------------
// parseval: per-path identity for projection-valued samplers.

VerdictDocument run_parseval(const ExperimentConfig& config, const fs::path& dir) {
  VerdictDocument verdict;
  verdict.experiment = kind_token(config.kind);
  const SamplerSpec& spec = *config.sampler;
  Vectord x = resolve_x(config, dimension(spec));
  double x_norm_sq = x.squaredNorm();

  CsvFile csv(dir / "path_defects.csv", "trial,steps,defect_rel");
  double max_defect = 0.0;
  long violations = 0;
  for (long t = 0; t < config.trials; ++t) {
    IterationPath path = run_path(spec, x, StoppingRule{config.steps, 0.0},
                                  RngStream(config.seed, static_cast<std::uint64_t>(t)));
    double defect = parseval_defect(path) / x_norm_sq;
    violations += check_path_invariants(path).total();
    max_defect = std::max(max_defect, defect);
    csv.row(t, path.step_count, defect);
  }
  verdict.checks.push_back(upper_check(
      "parseval_identity",
      "sum_k ||t_k||^2 + ||r_n||^2 = ||x0||^2 along every projection-valued path",
      max_defect, 1e-9));
  verdict.checks.push_back(upper_check(
      "path_invariants",
      "per-path telescoping, monotone residuals, and step energy certificates",
      static_cast<double>(violations), 0.0));
  return verdict;
}

// ---------------------------------------------------------------------------
// fusion: subspace frame bounds, the induced sampler's convergence battery,
// and the expectation identity sum_k E[T_k^T T_k] -> I.

VerdictDocument run_fusion(const ExperimentConfig& config, const fs::path& dir) {
  VerdictDocument verdict;
  verdict.experiment = kind_token(config.kind);
  const SamplerSpec& spec = *config.sampler;
  const auto& fusion = std::get<FusionFrameProjection>(spec);

  FrameBounds bounds = fusion_frame_bounds(fusion);
  double coercivity = std::min(coercivity_constant(spec), 1.0);
  verdict.checks.push_back(positivity_check("fusion_lower_bound_positive",
                                            "lambda_min(sum_i w_i P_i) > 0: the subspaces span",
                                            bounds.lower));
  verdict.checks.push_back(upper_check(
      "coercivity_matches_lower_bound",
      "the coercivity constant equals the lower subspace frame bound",
      std::abs(coercivity_constant(spec) - bounds.lower), 1e-12));

  Vectord x = resolve_x(config, dimension(spec));
  double delta_abs = config.delta * x.norm();
  TrialSummary summary = run_trials(spec, x, config.steps, config.trials, config.seed,
                                    delta_abs, config.threads);
  append_trial_checks(verdict, summary, coercivity);
  if (coercivity > 0.0) {
    verdict.checks.push_back(from_report(
        check_oracle_agreement(summary, expected_residual_sq_curve(spec, x, config.steps)),
        "Monte Carlo means match the exact conditional-expectation recursion"));
    write_oracle_csv(dir, spec, x, config.steps, coercivity);
  }
  write_curve_csv(dir, summary, coercivity);

  // Per-path Parseval identity along the trial paths.
  double max_defect = 0.0;
  double x_norm_sq = x.squaredNorm();
  {
    CsvFile csv(dir / "path_defects.csv", "trial,steps,defect_rel");
    for (long t = 0; t < config.trials; ++t) {
      IterationPath path = run_path(spec, x, StoppingRule{config.steps, 0.0},
                                    RngStream(config.seed, static_cast<std::uint64_t>(t)));
      double defect = parseval_defect(path) / x_norm_sq;
      max_defect = std::max(max_defect, defect);
      csv.row(t, path.step_count, defect);
    }
  }
  verdict.checks.push_back(upper_check(
      "parseval_identity",
      "sum_k ||t_k||^2 + ||r_n||^2 = ||x0||^2 along every projection-valued path",
      max_defect, 1e-9));

  // Partial sums of E[T_k^T T_k] walk to the identity operator.
  if (coercivity > 0.0) {
    TransferMap map = make_transfer_map(spec);
    Matrixd identity = Matrixd::Identity(map.dim, map.dim);
    Matrixd state = map.term_second_moment;
    Matrixd partial = state;
    CsvFile csv(dir / "identity_defect.csv", "step,frobenius_defect");
    double defect = (partial - identity).norm();
    csv.row(1, defect);
    int step = 1;
    constexpr int kMaxIdentitySteps = 20000;
    while (defect > 1e-6 && step < kMaxIdentitySteps) {
      state = apply_transfer(map, state);
      partial += state;
      ++step;
      defect = (partial - identity).norm();
      csv.row(step, defect);
    }
    verdict.checks.push_back(upper_check(
        "expectation_identity",
        "partial sums of E[T_k^T T_k] reach the identity in Frobenius norm", defect, 1e-6));
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// kaczmarz: the row-projection solver realized as the contraction scheme.

VerdictDocument run_kaczmarz(const ExperimentConfig& config, const fs::path& dir) {
  VerdictDocument verdict;
  verdict.experiment = kind_token(config.kind);
  const SystemConfig& sys_config = *config.system;
  Matrixd a = sys_config.matrix ? *sys_config.matrix
                                : read_matrix_market_file(*sys_config.matrix_file);
  if (a.rows() != sys_config.rhs.size())
    throw std::invalid_argument("kaczmarz: rhs length does not match the matrix row count");
  LinearSystem system = make_linear_system(a, sys_config.rhs, sys_config.solution);
  Vectord x_star = consistent_solution(system);

  Vectord x0;
  if (config.x) {
    const VectorChoice& choice = *config.x;
    if (choice.mode == VectorChoice::Mode::Explicit) {
      if (choice.entries.size() != a.cols())
        throw std::invalid_argument("kaczmarz: x0 length does not match the column count");
      x0 = choice.entries;
    } else {
      RngStream rng(config.seed, kStreamX);
      x0 = random_unit_vector(a.cols(), rng);
    }
  } else {
    x0 = Vectord::Zero(a.cols());
  }
  Vectord e0 = x0 - x_star;
  double e0_norm_sq = e0.squaredNorm();

  RateResult rk_rate = rate(system, sys_config.sampling);
  verdict.checks.push_back(positivity_check(
      "rate_positive", "lambda_min(A^T A) / ||A||_F^2 > 0: full column rank",
      rk_rate.value));

  // Solver iterates and the abstract residual process agree draw for draw.
  SamplerSpec row_spec = row_projection_sampler(system, sys_config.sampling);
  double max_deviation = 0.0;
  double max_parseval = 0.0;
  {
    CsvFile csv(dir / "equivalence.csv", "run,max_deviation,parseval_defect_rel");
    for (int run = 0; run < sys_config.equivalence_runs; ++run) {
      RngStream rng(config.seed, kStreamEquivBase + static_cast<std::uint64_t>(run));
      double deviation =
          error_process_equivalence(system, x0, config.steps, rng, sys_config.sampling);
      IterationPath path =
          run_path(row_spec, e0, StoppingRule{config.steps, 0.0}, rng, config.steps);
      double defect = e0_norm_sq > 0.0 ? parseval_defect(path) / e0_norm_sq : 0.0;
      max_deviation = std::max(max_deviation, deviation);
      max_parseval = std::max(max_parseval, defect);
      csv.row(run, deviation, defect);
    }
  }
  verdict.checks.push_back(upper_check(
      "error_process_equivalence",
      "solver errors x_k - x_star coincide with the residual process r_k", max_deviation,
      1e-10 * std::max(1.0, std::sqrt(e0_norm_sq))));
  verdict.checks.push_back(upper_check(
      "parseval_identity",
      "sum_k ||t_k||^2 + ||e_n||^2 = ||e_0||^2 for the row-projection paths", max_parseval,
      1e-9));

  if (rk_rate.value > 0.0 && e0_norm_sq > 0.0) {
    // Mean squared error over independent trials against the (1-C)^n rate.
    const std::size_t columns = static_cast<std::size_t>(config.steps) + 1;
    std::vector<std::vector<double>> err_sq(columns,
                                            std::vector<double>(static_cast<std::size_t>(config.trials)));
    auto work = [&](long begin, long end) {
      for (long t = begin; t < end; ++t) {
        RkHistory history = solve_rk(system, x0, config.steps,
                                     RngStream(config.seed, static_cast<std::uint64_t>(t)),
                                     sys_config.sampling);
        for (std::size_t k = 0; k < columns; ++k) {
          double e = history.error_norms[k];
          err_sq[k][static_cast<std::size_t>(t)] = e * e;
        }
      }
    };
    parallel_chunks(config.trials, config.threads, work);

    bool rate_ok = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_measured = 0.0, worst_bound = 0.0;
    CsvFile csv(dir / "error_curve.csv", "step,mean_err_sq,stderr,bound");
    for (std::size_t k = 0; k < columns; ++k) {
      double mean = compensated_mean(err_sq[k].data(), config.trials);
      double band = jackknife_stderr(err_sq[k].data(), config.trials);
      double bound = std::pow(1.0 - rk_rate.value, static_cast<double>(k)) * e0_norm_sq;
      double allowed = bound + 4.0 * band + kAbsFloor * std::max(1.0, e0_norm_sq);
      csv.row(static_cast<long>(k), mean, band, bound);
      if (mean > allowed) rate_ok = false;
      if (allowed - mean < worst_margin) {
        worst_margin = allowed - mean;
        worst_measured = mean;
        worst_bound = allowed;
      }
    }
    VerdictCheck rate_check{"mean_square_rate",
                            "mean ||x_n - x_star||^2 <= (1-C)^n ||x_0 - x_star||^2",
                            worst_measured, worst_bound, worst_margin, rate_ok};
    verdict.checks.push_back(rate_check);

    // Step count predicted for a 1e-10 mean-square reduction.
    int settle_steps = static_cast<int>(
        std::ceil(std::log(1e-10) / std::log1p(-rk_rate.value)));
    long successes = 0;
    std::vector<unsigned char> success(static_cast<std::size_t>(config.trials));
    auto success_work = [&](long begin, long end) {
      for (long t = begin; t < end; ++t) {
        RkHistory history =
            solve_rk(system, x0, settle_steps,
                     RngStream(config.seed, kStreamSuccessBase + static_cast<std::uint64_t>(t)),
                     sys_config.sampling);
        success[static_cast<std::size_t>(t)] =
            history.error_norms.back() <= 1e-4 ? 1 : 0;
      }
    };
    parallel_chunks(config.trials, config.threads, success_work);
    for (unsigned char s : success) successes += s;
    double success_rate =
        static_cast<double>(successes) / static_cast<double>(config.trials);
    verdict.checks.push_back(lower_check(
        "final_accuracy",
        "after ceil(ln 1e-10 / ln(1-C)) steps the iterate is within 1e-4 of the solution",
        success_rate, 0.95));
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// coercivity: Monte Carlo estimate of lambda_min(E[Psi^T Psi]) vs reference.

VerdictDocument run_coercivity(const ExperimentConfig& config, const fs::path& dir) {
  VerdictDocument verdict;
  verdict.experiment = kind_token(config.kind);
  const SamplerSpec& spec = *config.sampler;
  double reference = reference_coercivity(spec);
  RngStream rng(config.seed, kStreamMc);
  CoercivityEstimate estimate = estimate_coercivity_mc(spec, config.mc_samples, rng);
  CsvFile csv(dir / "coercivity.csv", "n_samples,estimate,std_error,reference");
  csv.row(config.mc_samples, estimate.estimate, estimate.std_error, reference);
  verdict.checks.push_back(upper_check(
      "coercivity_estimate",
      "lambda_min of the empirical second moment matches the reference constant",
      std::abs(estimate.estimate - reference), 4.0 * estimate.std_error + kAbsFloor));
  return verdict;
}

}  // namespace

std::string kind_token(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::EnergyGapSweep: return "lemma2-sweep";
    case ExperimentKind::DilationCheck: return "dilation-check";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::Parseval: return "parseval";
    case ExperimentKind::Fusion: return "fusion";
    case ExperimentKind::Kaczmarz: return "kaczmarz";
    case ExperimentKind::Coercivity: return "coercivity";
  }
  return "unknown";
}

std::optional<ExperimentKind> kind_from_token(const std::string& token) {
  for (ExperimentKind kind :
       {ExperimentKind::EnergyGapSweep, ExperimentKind::DilationCheck,
        ExperimentKind::Convergence, ExperimentKind::Parseval, ExperimentKind::Fusion,
        ExperimentKind::Kaczmarz, ExperimentKind::Coercivity}) {
    if (kind_token(kind) == token) return kind;
  }
  return std::nullopt;
}

Json verdict_to_json(const VerdictDocument& verdict) {
  Json checks = Json::array();
  for (const VerdictCheck& check : verdict.checks) {
    checks.push_back(Json{{"name", check.name},
                          {"claim", check.claim},
                          {"measured", check.measured},
                          {"bound", check.bound},
                          {"margin", check.margin},
                          {"pass", check.pass}});
  }
  return Json{{"experiment", verdict.experiment},
              {"overall_pass", verdict.overall_pass},
              {"checks", std::move(checks)}};
}

VerdictDocument run_experiment(const ExperimentConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  VerdictDocument verdict;
  switch (config.kind) {
    case ExperimentKind::EnergyGapSweep: verdict = run_energy_gap_sweep(config, dir); break;
    case ExperimentKind::DilationCheck: verdict = run_dilation_check(config, dir); break;
    case ExperimentKind::Convergence: verdict = run_convergence(config, dir); break;
    case ExperimentKind::Parseval: verdict = run_parseval(config, dir); break;
    case ExperimentKind::Fusion: verdict = run_fusion(config, dir); break;
    case ExperimentKind::Kaczmarz: verdict = run_kaczmarz(config, dir); break;
    case ExperimentKind::Coercivity: verdict = run_coercivity(config, dir); break;
  }
  verdict.overall_pass = true;
  for (const VerdictCheck& check : verdict.checks)
    verdict.overall_pass = verdict.overall_pass && check.pass;
  std::ofstream out(dir / "verdict.json");
  out << verdict_to_json(verdict).dump(2) << "\n";
  return verdict;
}

}  // namespace rovf
