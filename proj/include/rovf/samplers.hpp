#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rovf/linalg.hpp"
#include "rovf/rng.hpp"
#include "rovf/types.hpp"

namespace rovf {

// Distributions over positive contractions. Specs are immutable after the
// factory validates them; derived tables (projections, cumulative weights)
// are precomputed there.

struct Deterministic {
  Matrixd value;
};

struct DiscreteMixture {
  std::vector<Matrixd> atoms;
  std::vector<double> probabilities;  // normalized, sum exactly 1
  std::vector<double> cumulative;
};

struct FusionFrameProjection {
  std::vector<std::vector<Vectord>> bases;  // kept for serialization
  std::vector<double> weights;              // squared fusion weights, sum 1
  std::vector<Matrixd> projections;
  std::vector<double> cumulative;
};

struct KaczmarzRow {
  Matrixd matrix;  // m x d, no zero rows
  std::vector<double> row_probabilities;  // ||a_i||^2 / ||A||_F^2
  std::vector<double> cumulative;
};

struct RandomSpectral {
  Index dim = 0;
  double lo = 0.0;
  double hi = 1.0;
};

using SamplerSpec =
    std::variant<Deterministic, DiscreteMixture, FusionFrameProjection, KaczmarzRow,
                 RandomSpectral>;

SamplerSpec make_deterministic(Matrixd op);
SamplerSpec make_discrete_mixture(std::vector<Matrixd> atoms,
                                  std::vector<double> probabilities);
SamplerSpec make_fusion_frame(std::vector<std::vector<Vectord>> bases,
                              std::vector<double> weights);
SamplerSpec make_kaczmarz_rows(Matrixd matrix);
SamplerSpec make_random_spectral(Index dim, double lo, double hi);

Index dimension(const SamplerSpec& spec);
bool is_discrete(const SamplerSpec& spec);
bool is_projection_valued(const SamplerSpec& spec, double tol = kProjectionTol);
std::string describe(const SamplerSpec& spec);

/// Atoms and probabilities of a discrete spec (Kaczmarz rows expand to their
/// rank-one projections). Throws for random_spectral.
struct AtomView {
  std::vector<Matrixd> atoms;
  std::vector<double> probabilities;
};
AtomView discrete_atoms(const SamplerSpec& spec);

/// One draw from the spec's law. Every variant consumes the stream in a
/// fixed, documented pattern, so identical streams give identical draws.
Matrixd sample(const SamplerSpec& spec, RngStream& rng);

/// Exact second moment E[Psi^T Psi]. Not available for random_spectral.
Matrixd second_moment(const SamplerSpec& spec);

/// Smallest eigenvalue of the second moment: the largest C with
/// E||Psi x||^2 >= C ||x||^2 for all x.
double coercivity_constant(const SamplerSpec& spec);

struct CoercivityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of the coercivity constant, with a delete-one-block
/// jackknife standard error over 10 batches.
CoercivityEstimate estimate_coercivity_mc(const SamplerSpec& spec, long n_samples,
                                          RngStream& rng);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Extreme eigenvalues of sum_i w_i P_i, the two-sided subspace frame bounds.
FrameBounds fusion_frame_bounds(const FusionFrameProjection& spec);

/// E[lambda^2] for lambda uniform on [lo, hi]: the exact coercivity constant
/// of the random_spectral law.
double uniform_spectral_second_moment(double lo, double hi);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// sign ambiguity fixed by the diagonal of R.
Matrixd haar_orthogonal(Index dim, RngStream& rng);

/// Random positive contraction with spectrum i.i.d. uniform on [lo, hi],
/// conjugated by a Haar orthogonal matrix.
Matrixd random_contraction(Index dim, RngStream& rng, double lo = 0.0, double hi = 1.0);

/// Orthogonal projection onto the span of `rank` Gaussian vectors.
Matrixd random_projection(Index dim, Index rank, RngStream& rng);

}  // namespace rovf
