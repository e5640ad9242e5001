#include <doctest.h>

#include <cmath>

#include "rovf/linalg.hpp"
#include "rovf/rng.hpp"
#include "rovf/samplers.hpp"

using namespace rovf;

namespace {

Matrixd diag2(double a, double b) {
  Matrixd m = Matrixd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("apply: identity, zero, diagonal") {
  Vectord x(2);
  x << 3, 4;
  CHECK(apply<double>(Matrixd::Identity(2, 2), x).isApprox(x, 0.0));
  CHECK(apply<double>(Matrixd::Zero(2, 2), x).norm() == 0.0);

  Vectord y(2);
  y << 2, 4;
  Vectord expected(2);
  expected << 1, 1;
  CHECK(apply<double>(diag2(0.5, 0.25), y).isApprox(expected, 0.0));

  Vectord wrong(3);
  CHECK_THROWS_AS(apply<double>(Matrixd::Identity(2, 2), wrong), std::invalid_argument);
}

TEST_CASE("apply is linear") {
  RngStream rng(17, 0);
  for (int rep = 0; rep < 50; ++rep) {
    Index d = 1 + static_cast<Index>(rng.next_u64() % 8);
    Matrixd t = symmetric_part(gaussian_matrix(d, d, rng));
    Vectord x = gaussian_vector(d, rng), y = gaussian_vector(d, rng);
    double alpha = rng.normal(), beta = rng.normal();
    Vectord lhs = apply<double>(t, Vectord(alpha * x + beta * y));
    Vectord rhs = alpha * apply<double>(t, x) + beta * apply<double>(t, y);
    double tol = 1e-12 * (std::abs(alpha) * x.norm() + std::abs(beta) * y.norm()) * t.norm();
    CHECK((lhs - rhs).norm() <= tol);
  }
}

TEST_CASE("spectral: diagonal and identity") {
  auto decomp = spectral<double>(diag2(3, 1));
  CHECK(decomp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(decomp.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-14));

  auto id = spectral<double>(Matrixd::Identity(4, 4));
  for (Index i = 0; i < 4; ++i) CHECK(id.eigenvalues[i] == doctest::Approx(1.0));
}

TEST_CASE("spectral reconstruction and orthonormality on random input") {
  RngStream rng(5, 1);
  for (int rep = 0; rep < 25; ++rep) {
    Index d = 5;
    Matrixd t = symmetric_part(gaussian_matrix(d, d, rng));
    auto decomp = spectral<double>(t);
    Matrixd rebuilt =
        decomp.eigenvectors * decomp.eigenvalues.asDiagonal() * decomp.eigenvectors.transpose();
    CHECK((rebuilt - t).norm() <= 1e-10 * std::max(1.0, t.norm()));
    CHECK((decomp.eigenvectors.transpose() * decomp.eigenvectors - Matrixd::Identity(d, d))
              .norm() <= 1e-10);
    for (Index i = 1; i < d; ++i)
      CHECK(decomp.eigenvalues[i] >= decomp.eigenvalues[i - 1]);
  }
}

TEST_CASE("spectral rejects non-symmetric input") {
  Matrixd m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(spectral<double>(m), std::invalid_argument);
}

TEST_CASE("is_positive_contraction certificates") {
  auto proj = is_positive_contraction<double>(diag2(0, 1));
  CHECK(proj.positive_contraction);
  CHECK(proj.lambda_min == doctest::Approx(0.0));
  CHECK(proj.lambda_max == doctest::Approx(1.0));

  auto doubled = is_positive_contraction<double>(Matrixd(2.0 * Matrixd::Identity(2, 2)));
  CHECK_FALSE(doubled.positive_contraction);
  CHECK(doubled.lambda_min == doctest::Approx(2.0));
  CHECK(doubled.lambda_max == doctest::Approx(2.0));

  auto negative = is_positive_contraction<double>(diag2(-0.1, 0.5));
  CHECK_FALSE(negative.positive_contraction);
  CHECK(negative.lambda_min == doctest::Approx(-0.1));
  CHECK(negative.lambda_max == doctest::Approx(0.5));
}

TEST_CASE("energy gap: scalar case and projections") {
  Vectord unit(2);
  unit << 1, 0;
  // (1/2) I on a unit vector: 1 - 1/4 - 1/4 = 1/2.
  double gap = energy_gap<double>(Matrixd(0.5 * Matrixd::Identity(2, 2)), unit);
  CHECK(gap == doctest::Approx(0.5).epsilon(1e-14));

  RngStream rng(23, 0);
  for (int rep = 0; rep < 100; ++rep) {
    Index d = 2 + static_cast<Index>(rng.next_u64() % 7);
    Index rank = 1 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(d));
    Matrixd p = random_projection(d, rank, rng);
    Vectord x = gaussian_vector(d, rng);
    CHECK(std::abs(energy_gap<double>(p, x)) <= 1e-10 * x.squaredNorm());
  }
}

TEST_CASE("energy gap nonnegative over random contractions (property sweep)") {
  RngStream rng(29, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    Index d = 1 + static_cast<Index>(rng.next_u64() % 16);
    Matrixd t = random_contraction(d, rng);
    Vectord x = gaussian_vector(d, rng);
    CHECK(energy_gap<double>(t, x) >= -1e-9 * x.squaredNorm());
  }
}

TEST_CASE("dimension scaling up to d = 64") {
  RngStream rng(37, 0);
  for (Index d : {32, 64}) {
    Matrixd t = random_contraction(d, rng);
    auto decomp = spectral<double>(t);
    Matrixd rebuilt =
        decomp.eigenvectors * decomp.eigenvalues.asDiagonal() * decomp.eigenvectors.transpose();
    CHECK((rebuilt - t).norm() <= 1e-10 * std::max(1.0, t.norm()));
    Vectord x = gaussian_vector(d, rng);
    CHECK(energy_gap<double>(t, x) >= -1e-9 * x.squaredNorm());
    Matrixd p = random_projection(d, d / 2, rng);
    CHECK(std::abs(energy_gap<double>(p, x)) <= 1e-10 * x.squaredNorm());
  }
}

TEST_CASE("energy gap rejects non-contractions") {
  Vectord x(2);
  x << 1, 1;
  CHECK_THROWS_AS(energy_gap<double>(Matrixd(2.0 * Matrixd::Identity(2, 2)), x),
                  std::invalid_argument);
}

TEST_CASE("make_projection: axis, diagonal span, full span") {
  Vectord e1(2);
  e1 << 1, 0;
  CHECK((make_projection<double>({e1}) - diag2(1, 0)).norm() <= 1e-14);

  Vectord diag(2);
  diag << 1, 1;
  Matrixd expected(2, 2);
  expected << 0.5, 0.5, 0.5, 0.5;
  CHECK((make_projection<double>({diag}) - expected).norm() <= 1e-14);

  std::vector<Vectord> full;
  for (Index i = 0; i < 3; ++i) {
    Vectord e = Vectord::Zero(3);
    e[i] = 1.0;
    full.push_back(e);
  }
  CHECK((make_projection<double>(full) - Matrixd::Identity(3, 3)).norm() <= 1e-14);
}

TEST_CASE("make_projection properties: idempotent, symmetric, fixes the basis") {
  RngStream rng(31, 0);
  for (int rep = 0; rep < 50; ++rep) {
    Index d = 2 + static_cast<Index>(rng.next_u64() % 7);
    Index rank = 1 + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(d));
    std::vector<Vectord> basis;
    for (Index i = 0; i < rank; ++i) basis.push_back(gaussian_vector(d, rng));
    Matrixd p = make_projection(basis);
    CHECK((p * p - p).norm() <= 1e-10);
    CHECK((p - p.transpose()).norm() <= 1e-12);
    for (const Vectord& v : basis) CHECK((p * v - v).norm() <= 1e-9 * v.norm());
  }
}

TEST_CASE("make_projection rejects dependent or empty bases") {
  Vectord v(2);
  v << 1, 1;
  CHECK_THROWS_AS(make_projection<double>({v, Vectord(2 * v)}), std::invalid_argument);
  CHECK_THROWS_AS(make_projection<double>({}), std::invalid_argument);
  CHECK_THROWS_AS(make_projection<double>({Vectord(Vectord::Zero(2))}), std::invalid_argument);
}
