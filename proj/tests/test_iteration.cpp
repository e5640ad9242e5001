#include <doctest.h>

#include <cmath>

#include "rovf/iteration.hpp"

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

}  // namespace

TEST_CASE("identity sampler reconstructs in one step") {
  SamplerSpec spec = make_deterministic(Matrixd::Identity(3, 3));
  Vectord x(3);
  x << 1, -2, 0.5;
  IterationPath path = run_path(spec, x, StoppingRule{50, 0.0}, RngStream(1, 0));
  CHECK(path.step_count == 1);
  CHECK((path.terms[0] - x).norm() == 0.0);
  CHECK(path.residual_norms.back() == 0.0);
  CHECK(path.final_residual.norm() == 0.0);
}

TEST_CASE("half identity gives the exact geometric sequence") {
  Vectord x(4);
  x << 1, -2, 0.5, 4;  // powers of two keep the arithmetic exact
  IterationPath path = run_path(half_identity(4), x, StoppingRule{20, 0.0}, RngStream(1, 1));
  CHECK(path.step_count == 20);
  for (int k = 1; k <= 20; ++k) {
    double scale = std::ldexp(1.0, -k);  // 2^-k
    CHECK(path.term_norms[static_cast<std::size_t>(k - 1)] == scale * x.norm());
    CHECK(path.residual_norms[static_cast<std::size_t>(k)] == scale * x.norm());
  }
}

TEST_CASE("zero start vector returns an empty path") {
  IterationPath path =
      run_path(half_identity(3), Vectord::Zero(3), StoppingRule{10, 0.0}, RngStream(2, 0));
  CHECK(path.step_count == 0);
  CHECK(path.terms.empty());
  CHECK(path.residual_norms.size() == 1);
  CHECK(path.final_residual.norm() == 0.0);
}

TEST_CASE("stopping rules are validated") {
  Vectord x(2);
  x << 1, 1;
  CHECK_THROWS_AS(run_path(half_identity(2), x, StoppingRule{0, 0.0}, RngStream(0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_path(half_identity(2), x, StoppingRule{5, -1.0}, RngStream(0, 0)),
                  std::invalid_argument);
  Vectord wrong(3);
  wrong << 1, 1, 1;
  CHECK_THROWS_AS(run_path(half_identity(2), wrong, StoppingRule{5, 0.0}, RngStream(0, 0)),
                  std::invalid_argument);
}

TEST_CASE("relative stopping tolerance") {
  Vectord x(2);
  x << 1, 1;
  IterationPath path =
      run_path(half_identity(2), x, StoppingRule{100, 1e-3}, RngStream(3, 0));
  // ||r_k|| = 2^-k ||x||, so the first k with 2^-k <= 1e-3 is k = 10
  CHECK(path.step_count == 10);
}

TEST_CASE("two-axis fusion paths take values in coordinate terms") {
  SamplerSpec spec = two_axis_fusion();
  Vectord x(2);
  x << 1, 1;
  for (std::uint64_t stream = 0; stream < 32; ++stream) {
    IterationPath path = run_path(spec, x, StoppingRule{3, 0.0}, RngStream(5, stream));
    for (const Vectord& term : path.terms) {
      bool e1_term = term[1] == 0.0 && (term[0] == 1.0 || term[0] == 0.0);
      bool e2_term = term[0] == 0.0 && (term[1] == 1.0 || term[1] == 0.0);
      REQUIRE((e1_term || e2_term));
    }
    // once both axes appear the residual is exactly zero
    bool seen1 = false, seen2 = false;
    for (std::size_t k = 0; k < path.terms.size(); ++k) {
      if (path.terms[k][0] == 1.0) seen1 = true;
      if (path.terms[k][1] == 1.0) seen2 = true;
    }
    if (seen1 && seen2) CHECK(path.residual_norms.back() == 0.0);
  }
}

TEST_CASE("frame energy: one-step and geometric cases") {
  Vectord x(3);
  x << 2, -1, 2;
  SamplerSpec id = make_deterministic(Matrixd::Identity(3, 3));
  IterationPath one = run_path(id, x, StoppingRule{5, 0.0}, RngStream(6, 0));
  CHECK(frame_energy(one) == doctest::Approx(x.squaredNorm()).epsilon(1e-15));

  // sum over k of 4^-k approaches ||x||^2 / 3
  IterationPath many = run_path(half_identity(3), x, StoppingRule{60, 0.0}, RngStream(6, 1));
  CHECK(frame_energy(many) == doctest::Approx(x.squaredNorm() / 3.0).epsilon(1e-12));
}

TEST_CASE("parseval defect: projection paths vanish, strict contractions do not") {
  SamplerSpec spec = two_axis_fusion();
  Vectord x(2);
  x << 0.3, -1.7;
  for (std::uint64_t stream = 0; stream < 32; ++stream) {
    IterationPath path = run_path(spec, x, StoppingRule{5, 0.0}, RngStream(7, stream));
    CHECK(parseval_defect(path) <= 1e-12 * x.squaredNorm());
  }

  // 3 steps of (1/2)I: defect = (1 - 21/64 - 1/64) ||x||^2 = (42/64) ||x||^2
  Vectord y(2);
  y << 1, 1;
  IterationPath strict = run_path(half_identity(2), y, StoppingRule{3, 0.0}, RngStream(7, 99));
  CHECK(parseval_defect(strict) ==
        doctest::Approx(42.0 / 64.0 * y.squaredNorm()).epsilon(1e-14));

  IterationPath empty =
      run_path(spec, Vectord::Zero(2), StoppingRule{5, 0.0}, RngStream(7, 100));
  CHECK(parseval_defect(empty) == 0.0);
}

TEST_CASE("telescoping holds exactly for every sampler") {
  std::vector<SamplerSpec> specs;
  specs.push_back(two_axis_fusion());
  specs.push_back(half_identity(4));
  specs.push_back(make_random_spectral(4, 0.0, 1.0));
  Matrixd a(3, 4);
  a << 1, 0, 2, 0, 0, 1, 0, 1, 1, 1, 0, 0;
  specs.push_back(make_kaczmarz_rows(a));
  for (const auto& spec : specs) {
    RngStream xrng(8, 0);
    Vectord x = gaussian_vector(dimension(spec), xrng);
    for (std::uint64_t stream = 0; stream < 50; ++stream) {
      IterationPath path = run_path(spec, x, StoppingRule{40, 0.0}, RngStream(8, stream));
      CHECK(telescoping_defect(path) <= 1e-12 * x.norm());
      PathViolations violations = check_path_invariants(path);
      CHECK(violations.total() == 0);
    }
  }
}

TEST_CASE("per-step certificates hold along every path") {
  SamplerSpec spec = make_random_spectral(6, 0.0, 1.0);
  RngStream xrng(9, 0);
  Vectord x = gaussian_vector(6, xrng);
  for (std::uint64_t stream = 0; stream < 100; ++stream) {
    IterationPath path = run_path(spec, x, StoppingRule{30, 0.0}, RngStream(9, stream));
    double x_norm_sq = x.squaredNorm();
    for (int k = 1; k <= path.step_count; ++k) {
      double prev = path.residual_norms[static_cast<std::size_t>(k - 1)];
      double cur = path.residual_norms[static_cast<std::size_t>(k)];
      double term = path.term_norms[static_cast<std::size_t>(k - 1)];
      CHECK(cur <= prev + 1e-12 * x.norm());
      CHECK(term * term + cur * cur <= prev * prev + 1e-9 * x_norm_sq);
    }
  }
}

TEST_CASE("run_path is bitwise reproducible") {
  SamplerSpec spec = make_random_spectral(5, 0.2, 0.8);
  RngStream xrng(10, 0);
  Vectord x = gaussian_vector(5, xrng);
  IterationPath a = run_path(spec, x, StoppingRule{25, 0.0}, RngStream(10, 4));
  IterationPath b = run_path(spec, x, StoppingRule{25, 0.0}, RngStream(10, 4));
  REQUIRE(a.step_count == b.step_count);
  for (std::size_t k = 0; k < a.residual_norms.size(); ++k)
    CHECK(a.residual_norms[k] == b.residual_norms[k]);
  CHECK((a.final_residual - b.final_residual).norm() == 0.0);
}

TEST_CASE("term vectors beyond the cap are dropped but norms remain") {
  Vectord x(2);
  x << 1, 1;
  IterationPath path =
      run_path(half_identity(2), x, StoppingRule{20, 0.0}, RngStream(11, 0), /*term_cap=*/5);
  CHECK(path.terms.size() == 5);
  CHECK(path.term_norms.size() == 20);
  CHECK_FALSE(path.all_terms_stored());
  CHECK_THROWS_AS(telescoping_defect(path), std::logic_error);
}
