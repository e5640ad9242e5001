#include <doctest.h>

#include <sstream>

#include "rovf/analysis.hpp"
#include "rovf/iteration.hpp"
#include "rovf/matrix_market.hpp"
#include "rovf/serialization.hpp"

using namespace rovf;

TEST_CASE("vector and operator wire format") {
  Vectord v(3);
  v << 1.5, -2, 0.25;
  Json j = vector_to_json(v);
  CHECK(j.at("dim") == 3);
  CHECK(j.at("entries").size() == 3);
  CHECK((vector_from_json(j) - v).norm() == 0.0);

  Matrixd m(2, 2);
  m << 1, 2, 2, 4;
  Json op = operator_to_json(m);
  CHECK(op.at("dim") == 2);
  // row-major order
  CHECK(op.at("entries")[1] == 2.0);
  CHECK((operator_from_json(op) - m).norm() == 0.0);
}

TEST_CASE("malformed payloads are rejected with messages") {
  CHECK_THROWS_AS(vector_from_json(Json{{"dim", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(vector_from_json(Json{{"dim", 2}, {"entries", {1.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(operator_from_json(Json{{"dim", 0}, {"entries", Json::array()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sampler_from_json(Json{{"kind", "unheard-of"}}), std::invalid_argument);
  CHECK_THROWS_AS(matrix_from_json(Json{{"rows", 2}, {"cols", 2}, {"entries", {1, 2, 3}}}),
                  std::invalid_argument);
}

TEST_CASE("sampler specs round-trip through JSON") {
  std::vector<SamplerSpec> specs;
  specs.push_back(make_deterministic(Matrixd(0.5 * Matrixd::Identity(3, 3))));
  Vectord e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  specs.push_back(make_fusion_frame({{e1}, {e2}}, {0.5, 0.5}));
  Matrixd a(3, 2);
  a << 1, 0, 0, 2, 1, 1;
  specs.push_back(make_kaczmarz_rows(a));
  specs.push_back(make_random_spectral(5, 0.25, 0.75));
  Matrixd p1 = Matrixd::Zero(2, 2), p2 = Matrixd::Identity(2, 2);
  p1(0, 0) = 1.0;
  specs.push_back(make_discrete_mixture({p1, p2}, {0.25, 0.75}));

  for (const SamplerSpec& spec : specs) {
    Json j = sampler_to_json(spec);
    SamplerSpec back = sampler_from_json(j);
    // a second round trip is byte-stable
    CHECK(sampler_to_json(back).dump() == j.dump());
    CHECK(describe(back) == describe(spec));
    // both specs produce identical draw sequences
    RngStream r1(77, 0), r2(77, 0);
    for (int i = 0; i < 5; ++i) CHECK((sample(spec, r1) - sample(back, r2)).norm() == 0.0);
  }
}

TEST_CASE("iteration paths serialize norms always, vectors on request") {
  SamplerSpec spec = make_deterministic(Matrixd(0.5 * Matrixd::Identity(2, 2)));
  Vectord x(2);
  x << 1, 1;
  IterationPath path = run_path(spec, x, StoppingRule{4, 0.0}, RngStream(3, 9));
  Json lean = path_to_json(path);
  CHECK(lean.contains("residual_norms"));
  CHECK(lean.contains("term_norms"));
  CHECK(lean.at("seed") == 3);
  CHECK(lean.at("stream_index") == 9);
  CHECK_FALSE(lean.contains("terms"));
  Json full = path_to_json(path, true);
  CHECK(full.at("terms").size() == 4);
  CHECK(full.at("x0").at("dim") == 2);
}

TEST_CASE("trial summaries serialize their arrays") {
  SamplerSpec spec = make_deterministic(Matrixd(0.5 * Matrixd::Identity(2, 2)));
  Vectord x(2);
  x << 1, 1;
  TrialSummary summary = run_trials(spec, x, 3, 5, 1, 0.0);
  Json j = summary_to_json(summary);
  CHECK(j.at("n_trials") == 5);
  CHECK(j.at("mean_residual_sq").size() == 4);
  CHECK(j.at("violation_count") == 0);
}

TEST_CASE("format_double is byte-stable and round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3.0) == format_double(1.0 / 3.0));
  double value = 0.1234567890123456789;
  CHECK(std::stod(format_double(value)) == value);
}

TEST_CASE("matrix market: coordinate format") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real general\n"
      "% a comment\n"
      "3 2 3\n"
      "1 1 2.5\n"
      "3 2 -1\n"
      "2 1 4\n");
  Matrixd m = read_matrix_market(in);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m(0, 0) == 2.5);
  CHECK(m(2, 1) == -1.0);
  CHECK(m(1, 0) == 4.0);
  CHECK(m(0, 1) == 0.0);
}

TEST_CASE("matrix market: array and symmetric formats") {
  std::istringstream array_in(
      "%%MatrixMarket matrix array real general\n"
      "2 2\n"
      "1\n2\n3\n4\n");
  Matrixd m = read_matrix_market(array_in);  // column-major listing
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 0) == 2.0);
  CHECK(m(0, 1) == 3.0);
  CHECK(m(1, 1) == 4.0);

  std::istringstream sym_in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "2 2 2\n"
      "1 1 1\n"
      "2 1 5\n");
  Matrixd s = read_matrix_market(sym_in);
  CHECK(s(0, 1) == 5.0);
  CHECK(s(1, 0) == 5.0);
}

TEST_CASE("matrix market: malformed inputs") {
  std::istringstream bad_banner("%%NotMatrixMarket matrix coordinate real general\n1 1 0\n");
  CHECK_THROWS_AS(read_matrix_market(bad_banner), std::invalid_argument);
  std::istringstream pattern(
      "%%MatrixMarket matrix coordinate pattern general\n1 1 0\n");
  CHECK_THROWS_AS(read_matrix_market(pattern), std::invalid_argument);
  std::istringstream truncated(
      "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
  CHECK_THROWS_AS(read_matrix_market(truncated), std::invalid_argument);
  CHECK_THROWS_AS(read_matrix_market_file("/nonexistent/file.mtx"), std::invalid_argument);
}
