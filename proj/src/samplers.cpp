#include "rovf/samplers.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rovf {

namespace {

constexpr double kWeightSumTol = 1e-9;

void require_contraction_atom(const Matrixd& op, const char* what) {
  if (!has_finite_entries(op)) throw std::invalid_argument(std::string(what) + ": non-finite entries");
  if (!is_symmetric(op)) throw std::invalid_argument(std::string(what) + ": atom is not symmetric");
  auto cert = is_positive_contraction(op);
  if (!cert.positive_contraction) {
    std::ostringstream msg;
    msg << what << ": atom is not a positive contraction (spectrum [" << cert.lambda_min
        << ", " << cert.lambda_max << "])";
    throw std::invalid_argument(msg.str());
  }
}

/// Normalizes weights in place. Sums off by more than kWeightSumTol are
/// rejected rather than silently rescaled.
std::vector<double> normalized_weights(std::vector<double> weights, const char* what) {
  if (weights.empty()) throw std::invalid_argument(std::string(what) + ": no atoms");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument(std::string(what) + ": weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    std::ostringstream msg;
    msg << what << ": weights sum to " << sum
        << "; they must sum to 1 within 1e-9 (exact renormalization is then applied)";
    throw std::invalid_argument(msg.str());
  }
  for (double& w : weights) w /= sum;
  return weights;
}

std::vector<double> cumulative_of(const std::vector<double>& probabilities) {
  std::vector<double> cumulative(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;
  return cumulative;
}

Matrixd row_projection(const Matrixd& a, Index row) {
  Vectord r = a.row(row).transpose();
  return Matrixd(r * r.transpose() / r.squaredNorm());
}

}  // namespace

SamplerSpec make_deterministic(Matrixd op) {
  require_contraction_atom(op, "deterministic");
  return Deterministic{std::move(op)};
}

SamplerSpec make_discrete_mixture(std::vector<Matrixd> atoms,
                                  std::vector<double> probabilities) {
  if (atoms.size() != probabilities.size())
    throw std::invalid_argument("discrete_mixture: atom/probability count mismatch");
  probabilities = normalized_weights(std::move(probabilities), "discrete_mixture");
  if (atoms.empty()) throw std::invalid_argument("discrete_mixture: no atoms");
  Index dim = atoms[0].rows();
  for (const Matrixd& atom : atoms) {
    if (atom.rows() != dim || atom.cols() != dim)
      throw std::invalid_argument("discrete_mixture: atoms differ in dimension");
    require_contraction_atom(atom, "discrete_mixture");
  }
  auto cumulative = cumulative_of(probabilities);
  return DiscreteMixture{std::move(atoms), std::move(probabilities), std::move(cumulative)};
}

SamplerSpec make_fusion_frame(std::vector<std::vector<Vectord>> bases,
                              std::vector<double> weights) {
  if (bases.size() != weights.size())
    throw std::invalid_argument("fusion_frame: subspace/weight count mismatch");
  weights = normalized_weights(std::move(weights), "fusion_frame");
  if (bases.empty()) throw std::invalid_argument("fusion_frame: no subspaces");
  std::vector<Matrixd> projections;
  projections.reserve(bases.size());
  Index dim = bases[0].empty() ? 0 : bases[0][0].size();
  for (const auto& basis : bases) {
    Matrixd p = make_projection(basis);  // rejects empty or dependent bases
    if (p.rows() != dim) throw std::invalid_argument("fusion_frame: subspaces differ in dimension");
    projections.push_back(std::move(p));
  }
  auto cumulative = cumulative_of(weights);
  return FusionFrameProjection{std::move(bases), std::move(weights), std::move(projections),
                               std::move(cumulative)};
}

SamplerSpec make_kaczmarz_rows(Matrixd matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0)
    throw std::invalid_argument("kaczmarz_rows: empty matrix");
  if (!has_finite_entries(matrix))
    throw std::invalid_argument("kaczmarz_rows: non-finite entries");
  double total = matrix.squaredNorm();
  std::vector<double> probabilities(static_cast<std::size_t>(matrix.rows()));
  for (Index i = 0; i < matrix.rows(); ++i) {
    double row_sq = matrix.row(i).squaredNorm();
    if (row_sq == 0.0) {
      std::ostringstream msg;
      msg << "kaczmarz_rows: row " << i << " is zero";
      throw std::invalid_argument(msg.str());
    }
    probabilities[static_cast<std::size_t>(i)] = row_sq / total;
  }
  auto cumulative = cumulative_of(probabilities);
  return KaczmarzRow{std::move(matrix), std::move(probabilities), std::move(cumulative)};
}

SamplerSpec make_random_spectral(Index dim, double lo, double hi) {
  if (dim < 1) throw std::invalid_argument("random_spectral: dimension must be positive");
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
    throw std::invalid_argument("random_spectral: need 0 <= lo <= hi <= 1");
  return RandomSpectral{dim, lo, hi};
}

Index dimension(const SamplerSpec& spec) {
  return std::visit(
      [](const auto& s) -> Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Deterministic>) return s.value.rows();
        else if constexpr (std::is_same_v<T, DiscreteMixture>) return s.atoms[0].rows();
        else if constexpr (std::is_same_v<T, FusionFrameProjection>) return s.projections[0].rows();
        else if constexpr (std::is_same_v<T, KaczmarzRow>) return s.matrix.cols();
        else return s.dim;
      },
      spec);
}

bool is_discrete(const SamplerSpec& spec) {
  return !std::holds_alternative<RandomSpectral>(spec);
}

bool is_projection_valued(const SamplerSpec& spec, double tol) {
  auto idempotent = [tol](const Matrixd& t) {
    return (t * t - t).norm() <= tol * std::max(1.0, t.norm());
  };
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Deterministic>) return idempotent(s.value);
        else if constexpr (std::is_same_v<T, DiscreteMixture>) {
          for (const auto& atom : s.atoms)
            if (!idempotent(atom)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, FusionFrameProjection>) return true;
        else if constexpr (std::is_same_v<T, KaczmarzRow>) return true;
        else return false;
      },
      spec);
}

std::string describe(const SamplerSpec& spec) {
  std::ostringstream out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Deterministic>)
          out << "deterministic(d=" << s.value.rows() << ")";
        else if constexpr (std::is_same_v<T, DiscreteMixture>)
          out << "discrete_mixture(atoms=" << s.atoms.size() << ", d=" << s.atoms[0].rows() << ")";
        else if constexpr (std::is_same_v<T, FusionFrameProjection>)
          out << "fusion_frame(subspaces=" << s.projections.size()
              << ", d=" << s.projections[0].rows() << ")";
        else if constexpr (std::is_same_v<T, KaczmarzRow>)
          out << "kaczmarz_rows(m=" << s.matrix.rows() << ", d=" << s.matrix.cols() << ")";
        else
          out << "random_spectral(d=" << s.dim << ", lo=" << s.lo << ", hi=" << s.hi << ")";
      },
      spec);
  return out.str();
}

AtomView discrete_atoms(const SamplerSpec& spec) {
  return std::visit(
      [](const auto& s) -> AtomView {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Deterministic>) {
          return {{s.value}, {1.0}};
        } else if constexpr (std::is_same_v<T, DiscreteMixture>) {
          return {s.atoms, s.probabilities};
        } else if constexpr (std::is_same_v<T, FusionFrameProjection>) {
          return {s.projections, s.weights};
        } else if constexpr (std::is_same_v<T, KaczmarzRow>) {
          AtomView view;
          view.probabilities = s.row_probabilities;
          view.atoms.reserve(static_cast<std::size_t>(s.matrix.rows()));
          for (Index i = 0; i < s.matrix.rows(); ++i)
            view.atoms.push_back(row_projection(s.matrix, i));
          return view;
        } else {
          throw std::invalid_argument("discrete_atoms: random_spectral has no atom list");
        }
      },
      spec);
}

Matrixd sample(const SamplerSpec& spec, RngStream& rng) {
  return std::visit(
      [&](const auto& s) -> Matrixd {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Deterministic>) {
          return s.value;
        } else if constexpr (std::is_same_v<T, DiscreteMixture>) {
          return s.atoms[static_cast<std::size_t>(rng.discrete(s.cumulative))];
        } else if constexpr (std::is_same_v<T, FusionFrameProjection>) {
          return s.projections[static_cast<std::size_t>(rng.discrete(s.cumulative))];
        } else if constexpr (std::is_same_v<T, KaczmarzRow>) {
          return row_projection(s.matrix, rng.discrete(s.cumulative));
        } else {
          return random_contraction(s.dim, rng, s.lo, s.hi);
        }
      },
      spec);
}

Matrixd second_moment(const SamplerSpec& spec) {
  return std::visit(
      [](const auto& s) -> Matrixd {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Deterministic>) {
          return Matrixd(s.value.transpose() * s.value);
        } else if constexpr (std::is_same_v<T, DiscreteMixture>) {
          Matrixd m = Matrixd::Zero(s.atoms[0].rows(), s.atoms[0].cols());
          for (std::size_t i = 0; i < s.atoms.size(); ++i)
            m += s.probabilities[i] * (s.atoms[i].transpose() * s.atoms[i]);
          return symmetric_part(m);
        } else if constexpr (std::is_same_v<T, FusionFrameProjection>) {
          // projections are idempotent, so E[P^T P] = sum w_i P_i
          Matrixd m = Matrixd::Zero(s.projections[0].rows(), s.projections[0].cols());
          for (std::size_t i = 0; i < s.projections.size(); ++i)
            m += s.weights[i] * s.projections[i];
          return symmetric_part(m);
        } else if constexpr (std::is_same_v<T, KaczmarzRow>) {
          return symmetric_part(s.matrix.transpose() * s.matrix / s.matrix.squaredNorm());
        } else {
          throw std::invalid_argument(
              "second_moment: random_spectral has no closed form; use estimate_coercivity_mc");
        }
      },
      spec);
}

double coercivity_constant(const SamplerSpec& spec) {
  auto decomp = spectral(second_moment(spec));
  return decomp.eigenvalues[0];
}

CoercivityEstimate estimate_coercivity_mc(const SamplerSpec& spec, long n_samples,
                                          RngStream& rng) {
  if (n_samples < 100)
    throw std::invalid_argument("estimate_coercivity_mc: need at least 100 samples");
  constexpr int kBlocks = 10;
  Index dim = dimension(spec);
  std::vector<Matrixd> block_sums(kBlocks, Matrixd::Zero(dim, dim));
  std::vector<long> block_counts(kBlocks, 0);
  for (long i = 0; i < n_samples; ++i) {
    int block = static_cast<int>((i * kBlocks) / n_samples);
    Matrixd draw = sample(spec, rng);
    block_sums[static_cast<std::size_t>(block)] += draw.transpose() * draw;
    ++block_counts[static_cast<std::size_t>(block)];
  }
  Matrixd total = Matrixd::Zero(dim, dim);
  for (const Matrixd& block : block_sums) total += block;

  auto lambda_min = [](const Matrixd& m) {
    return spectral(Matrixd(symmetric_part(m))).eigenvalues[0];
  };

  CoercivityEstimate result;
  result.estimate = lambda_min(total / static_cast<double>(n_samples));

  std::vector<double> leave_one_out(kBlocks);
  for (int b = 0; b < kBlocks; ++b) {
    Matrixd rest = total - block_sums[static_cast<std::size_t>(b)];
    long count = n_samples - block_counts[static_cast<std::size_t>(b)];
    leave_one_out[static_cast<std::size_t>(b)] = lambda_min(rest / static_cast<double>(count));
  }
  double mean = 0.0;
  for (double v : leave_one_out) mean += v;
  mean /= kBlocks;
  double ss = 0.0;
  for (double v : leave_one_out) ss += (v - mean) * (v - mean);
  result.std_error = std::sqrt((kBlocks - 1.0) / kBlocks * ss);
  return result;
}

FrameBounds fusion_frame_bounds(const FusionFrameProjection& spec) {
  Matrixd m = Matrixd::Zero(spec.projections[0].rows(), spec.projections[0].cols());
  for (std::size_t i = 0; i < spec.projections.size(); ++i)
    m += spec.weights[i] * spec.projections[i];
  auto decomp = spectral(Matrixd(symmetric_part(m)));
  return {decomp.eigenvalues[0], decomp.eigenvalues[decomp.eigenvalues.size() - 1]};
}

double uniform_spectral_second_moment(double lo, double hi) {
  if (lo == hi) return lo * lo;
  return (hi * hi * hi - lo * lo * lo) / (3.0 * (hi - lo));
}

Matrixd haar_orthogonal(Index dim, RngStream& rng) {
  Matrixd gaussian = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrixd> qr(gaussian);
  Matrixd q = qr.householderQ() * Matrixd::Identity(dim, dim);
  Vectord diag = qr.matrixQR().diagonal();
  for (Index i = 0; i < dim; ++i)
    if (diag[i] < 0.0) q.col(i) = -q.col(i);
  return q;
}

Matrixd random_contraction(Index dim, RngStream& rng, double lo, double hi) {
  Matrixd q = haar_orthogonal(dim, rng);
  Vectord eigenvalues(dim);
  for (Index i = 0; i < dim; ++i) eigenvalues[i] = rng.uniform(lo, hi);
  return symmetric_part(q * eigenvalues.asDiagonal() * q.transpose());
}

Matrixd random_projection(Index dim, Index rank, RngStream& rng) {
  if (rank < 1 || rank > dim)
    throw std::invalid_argument("random_projection: rank out of range");
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Vectord> basis;
    basis.reserve(static_cast<std::size_t>(rank));
    for (Index i = 0; i < rank; ++i) basis.push_back(gaussian_vector(dim, rng));
    try {
      return make_projection(basis);
    } catch (const std::invalid_argument&) {
      // Gaussian vectors were numerically dependent; redraw.
    }
  }
  throw std::runtime_error("random_projection: failed to draw an independent basis");
}

}  // namespace rovf
