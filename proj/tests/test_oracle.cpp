#include <doctest.h>

#include <cmath>

#include "rovf/oracle.hpp"
#include "rovf/rng.hpp"

using namespace rovf;

namespace {

SamplerSpec two_axis_fusion() {
  Vectord e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  return make_fusion_frame({{e1}, {e2}}, {0.5, 0.5});
}

SamplerSpec half_identity(Index d) {
  return make_deterministic(Matrixd(0.5 * Matrixd::Identity(d, d)));
}

/// Random mixture of contractions, spectra bounded away from 0 and 1.
SamplerSpec random_mixture(Index d, int atoms, RngStream& rng) {
  std::vector<Matrixd> ops;
  std::vector<double> probs(static_cast<std::size_t>(atoms), 1.0 / atoms);
  for (int i = 0; i < atoms; ++i) ops.push_back(random_contraction(d, rng, 0.1, 0.9));
  return make_discrete_mixture(std::move(ops), std::move(probs));
}

}  // namespace

TEST_CASE("transfer map basics") {
  TransferMap two_axis = make_transfer_map(two_axis_fusion());
  Matrixd identity = Matrixd::Identity(2, 2);
  // (I - P_i) swaps to the other axis projection: Phi(I) = I/2
  CHECK((apply_transfer(two_axis, identity) - 0.5 * identity).norm() <= 1e-15);

  TransferMap half = make_transfer_map(half_identity(2));
  CHECK((apply_transfer(half, identity) - 0.25 * identity).norm() <= 1e-15);
  CHECK(apply_transfer(half, Matrixd::Zero(2, 2)).norm() == 0.0);

  CHECK_THROWS_AS(make_transfer_map(make_random_spectral(2, 0, 1)), std::invalid_argument);
  Matrixd asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK_THROWS_AS(apply_transfer(half, asym), std::invalid_argument);
}

TEST_CASE("transfer map is positivity preserving and dominated by I") {
  RngStream rng(51, 0);
  for (int rep = 0; rep < 20; ++rep) {
    SamplerSpec spec = random_mixture(4, 3, rng);
    TransferMap map = make_transfer_map(spec);
    Matrixd identity = Matrixd::Identity(4, 4);
    auto phi_of_identity = spectral(apply_transfer(map, identity));
    CHECK(phi_of_identity.eigenvalues[3] <= 1.0 + 1e-10);

    Matrixd g = gaussian_matrix(4, 4, rng);
    Matrixd psd = symmetric_part(g * g.transpose());
    auto image = spectral(apply_transfer(map, psd));
    CHECK(image.eigenvalues[0] >= -1e-12 * psd.norm());
  }
}

TEST_CASE("expected residual: exact closed forms") {
  Vectord x(2);
  x << 3, -4;
  // two-axis sampler: E||R_n x||^2 = 2^-n ||x||^2
  for (int n = 0; n <= 10; ++n) {
    double expected = std::ldexp(x.squaredNorm(), -n);
    CHECK(std::abs(expected_residual_sq(two_axis_fusion(), x, n) - expected) <= 1e-10);
  }
  // (1/2)I: E||R_n x||^2 = 4^-n ||x||^2
  for (int n = 0; n <= 8; ++n) {
    double expected = std::ldexp(x.squaredNorm(), -2 * n);
    CHECK(expected_residual_sq(half_identity(2), x, n) ==
          doctest::Approx(expected).epsilon(1e-13));
  }
  // n = 0 is the initial energy
  CHECK(expected_residual_sq(two_axis_fusion(), x, 0) == x.squaredNorm());
}

TEST_CASE("expected frame energy: closed forms and first step") {
  Vectord x(2);
  x << 1, 2;
  double x_sq = x.squaredNorm();
  // (1/2)I: sum 4^-k -> ||x||^2/3, inside [C||x||^2, ||x||^2] with C = 1/4
  double limit = expected_frame_energy(half_identity(2), x, 60);
  CHECK(limit == doctest::Approx(x_sq / 3.0).epsilon(1e-13));
  CHECK(limit >= 0.25 * x_sq);
  CHECK(limit <= x_sq);

  // two-axis sampler saturates the Parseval limit
  CHECK(expected_frame_energy(two_axis_fusion(), x, 60) ==
        doctest::Approx(x_sq).epsilon(1e-12));

  // n = 1 is <x, Q x> = E||Psi x||^2
  Matrixd q = second_moment(two_axis_fusion());
  CHECK(expected_frame_energy(two_axis_fusion(), x, 1) ==
        doctest::Approx(x.dot(q * x)).epsilon(1e-14));
  CHECK_THROWS_AS(expected_frame_energy(two_axis_fusion(), x, 0), std::invalid_argument);
}

TEST_CASE("brute force enumeration matches the transfer map") {
  RngStream rng(53, 0);
  for (int rep = 0; rep < 20; ++rep) {
    SamplerSpec spec = random_mixture(3, 3, rng);
    Vectord x = gaussian_vector(3, rng);
    for (int n : {1, 3, 6}) {
      PathExpectations brute = brute_force_paths(spec, x, n);
      CHECK(std::abs(brute.residual_sq - expected_residual_sq(spec, x, n)) <= 1e-10);
      CHECK(std::abs(brute.frame_energy - expected_frame_energy(spec, x, n)) <= 1e-10);
    }
  }
}

TEST_CASE("brute force: deterministic spec is a single path") {
  Vectord x(2);
  x << 1, 1;
  PathExpectations brute = brute_force_paths(half_identity(2), x, 5);
  CHECK(brute.residual_sq == doctest::Approx(std::ldexp(x.squaredNorm(), -10)).epsilon(1e-14));
  // two-axis sampler at n = 3: residual expectation 2^-3 ||x||^2 over 8 paths
  PathExpectations axes = brute_force_paths(two_axis_fusion(), x, 3);
  CHECK(axes.residual_sq == doctest::Approx(x.squaredNorm() / 8.0).epsilon(1e-14));
}

TEST_CASE("brute force respects the enumeration budget") {
  RngStream rng(54, 0);
  SamplerSpec spec = random_mixture(2, 3, rng);
  Vectord x(2);
  x << 1, 0;
  CHECK_THROWS_AS(brute_force_paths(spec, x, 20), std::invalid_argument);
}

TEST_CASE("geometric decay bound holds for coercive specs") {
  RngStream rng(55, 0);
  for (int rep = 0; rep < 10; ++rep) {
    SamplerSpec spec = random_mixture(3, 2, rng);
    double coercivity = coercivity_constant(spec);
    REQUIRE(coercivity > 0.0);
    Vectord x = gaussian_vector(3, rng);
    auto curve = expected_residual_sq_curve(spec, x, 50);
    for (int n = 0; n <= 50; ++n) {
      CHECK(curve[static_cast<std::size_t>(n)] <=
            std::pow(1.0 - coercivity, n) * x.squaredNorm() + 1e-9);
      if (n > 0) CHECK(curve[static_cast<std::size_t>(n)] <= curve[static_cast<std::size_t>(n - 1)] + 1e-12);
    }
  }
}

TEST_CASE("projection specs satisfy the exact energy split at every n") {
  Vectord x(2);
  x << -2, 5;
  auto residual = expected_residual_sq_curve(two_axis_fusion(), x, 30);
  auto energy = expected_frame_energy_curve(two_axis_fusion(), x, 30);
  for (int n = 1; n <= 30; ++n) {
    double total = energy[static_cast<std::size_t>(n)] + residual[static_cast<std::size_t>(n)];
    CHECK(std::abs(total - x.squaredNorm()) <= 1e-10);
  }
}

TEST_CASE("transfer map iterates are monotone in the positive order") {
  RngStream rng(57, 0);
  SamplerSpec spec = random_mixture(4, 3, rng);
  TransferMap map = make_transfer_map(spec);
  Matrixd state = Matrixd::Identity(4, 4);
  double previous_top = spectral(state).eigenvalues[3];
  for (int n = 1; n <= 30; ++n) {
    state = apply_transfer(map, state);
    double top = spectral(state).eigenvalues[3];
    CHECK(top <= previous_top + 1e-12);
    previous_top = top;
  }
}

TEST_CASE("expectation identity partial sums for projection specs") {
  // For projections, sum_{k<=n} Phi^{k-1}(Q) = I - Phi^n(I) exactly.
  SamplerSpec spec = two_axis_fusion();
  Matrixd partial = expectation_identity_partial_sum(spec, 24);
  double defect = (partial - Matrixd::Identity(2, 2)).norm();
  CHECK(defect <= 1e-6);
  CHECK(defect == doctest::Approx(std::ldexp(std::sqrt(2.0), -24)).epsilon(1e-6));
  CHECK(expectation_identity_defect(spec, 24) == defect);
}

TEST_CASE("steps_until_residual_below finds the decay horizon") {
  Vectord x(2);
  x << 1, 1;
  // 2^-n <= 1e-3 first at n = 10
  auto horizon = steps_until_residual_below(two_axis_fusion(), x, 1e-3, 100);
  REQUIRE(horizon.has_value());
  CHECK(*horizon == 10);
  CHECK_FALSE(steps_until_residual_below(two_axis_fusion(), x, 1e-30, 5).has_value());
}
