#include <doctest.h>

#include <cmath>

#include "rovf/rng.hpp"

using namespace rovf;

TEST_CASE("identical (seed, stream) reproduces the sequence bit for bit") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42, 7), d(42, 7);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("different stream indices decorrelate") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("uniform stays in [0, 1) and has the right mean") {
  RngStream rng(1, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal moments") {
  RngStream rng(3, 5);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.03);
}

TEST_CASE("discrete draw follows the cumulative table") {
  RngStream rng(9, 2);
  std::vector<double> cumulative{0.2, 1.0};
  int counts[2] = {0, 0};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[rng.discrete(cumulative)];
  CHECK(std::abs(counts[0] / static_cast<double>(n) - 0.2) < 0.02);
  CHECK_THROWS_AS(rng.discrete({}), std::invalid_argument);
}

TEST_CASE("random unit vectors have unit norm") {
  RngStream rng(11, 0);
  for (Index d : {1, 2, 8}) {
    Vectord v = random_unit_vector(d, rng);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  }
}
