#include "rovf/serialization.hpp"

#include <charconv>
#include <stdexcept>

namespace rovf {

namespace {

void require_fields(const Json& j, std::initializer_list<const char*> fields,
                    const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected an object");
  for (const char* f : fields)
    if (!j.contains(f))
      throw std::invalid_argument(std::string(what) + ": missing field \"" + f + "\"");
}

std::vector<double> entries_from_json(const Json& j, std::size_t expected, const char* what) {
  const Json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != expected)
    throw std::invalid_argument(std::string(what) + ": \"entries\" must be an array of " +
                                std::to_string(expected) + " numbers");
  std::vector<double> out;
  out.reserve(expected);
  for (const Json& e : entries) {
    if (!e.is_number()) throw std::invalid_argument(std::string(what) + ": non-numeric entry");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Json vector_to_json(const Vectord& v) {
  Json entries = Json::array();
  for (Index i = 0; i < v.size(); ++i) entries.push_back(v[i]);
  return Json{{"dim", v.size()}, {"entries", std::move(entries)}};
}

Vectord vector_from_json(const Json& j) {
  require_fields(j, {"dim", "entries"}, "vector");
  Index dim = j.at("dim").get<Index>();
  if (dim < 1) throw std::invalid_argument("vector: dim must be positive");
  auto entries = entries_from_json(j, static_cast<std::size_t>(dim), "vector");
  Vectord v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = entries[static_cast<std::size_t>(i)];
  if (!v.allFinite()) throw std::invalid_argument("vector: non-finite entries");
  return v;
}

Json operator_to_json(const Matrixd& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
  return Json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

Matrixd operator_from_json(const Json& j) {
  require_fields(j, {"dim", "entries"}, "operator");
  Index dim = j.at("dim").get<Index>();
  if (dim < 1) throw std::invalid_argument("operator: dim must be positive");
  auto entries = entries_from_json(j, static_cast<std::size_t>(dim * dim), "operator");
  Matrixd m(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c)
      m(r, c) = entries[static_cast<std::size_t>(r * dim + c)];
  if (!has_finite_entries(m)) throw std::invalid_argument("operator: non-finite entries");
  return m;
}

Json matrix_to_json(const Matrixd& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrixd matrix_from_json(const Json& j) {
  require_fields(j, {"rows", "cols", "entries"}, "matrix");
  Index rows = j.at("rows").get<Index>();
  Index cols = j.at("cols").get<Index>();
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix: rows/cols must be positive");
  auto entries = entries_from_json(j, static_cast<std::size_t>(rows * cols), "matrix");
  Matrixd m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      m(r, c) = entries[static_cast<std::size_t>(r * cols + c)];
  if (!has_finite_entries(m)) throw std::invalid_argument("matrix: non-finite entries");
  return m;
}

Json sampler_to_json(const SamplerSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Deterministic>) {
          return Json{{"kind", "deterministic"}, {"operator", operator_to_json(s.value)}};
        } else if constexpr (std::is_same_v<T, DiscreteMixture>) {
          Json atoms = Json::array();
          for (std::size_t i = 0; i < s.atoms.size(); ++i)
            atoms.push_back(Json{{"operator", operator_to_json(s.atoms[i])},
                                 {"probability", s.probabilities[i]}});
          return Json{{"kind", "discrete_mixture"}, {"atoms", std::move(atoms)}};
        } else if constexpr (std::is_same_v<T, FusionFrameProjection>) {
          Json subspaces = Json::array();
          for (std::size_t i = 0; i < s.bases.size(); ++i) {
            Json basis = Json::array();
            for (const Vectord& v : s.bases[i]) basis.push_back(vector_to_json(v));
            subspaces.push_back(Json{{"basis", std::move(basis)}, {"weight", s.weights[i]}});
          }
          return Json{{"kind", "fusion_frame"}, {"subspaces", std::move(subspaces)}};
        } else if constexpr (std::is_same_v<T, KaczmarzRow>) {
          return Json{{"kind", "kaczmarz_row"}, {"matrix", matrix_to_json(s.matrix)}};
        } else {
          return Json{{"kind", "random_spectral"}, {"dim", s.dim}, {"lo", s.lo}, {"hi", s.hi}};
        }
      },
      spec);
}

SamplerSpec sampler_from_json(const Json& j) {
  require_fields(j, {"kind"}, "sampler");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "deterministic") {
    require_fields(j, {"operator"}, "sampler(deterministic)");
    return make_deterministic(operator_from_json(j.at("operator")));
  }
  if (kind == "discrete_mixture") {
    require_fields(j, {"atoms"}, "sampler(discrete_mixture)");
    std::vector<Matrixd> atoms;
    std::vector<double> probabilities;
    for (const Json& atom : j.at("atoms")) {
      require_fields(atom, {"operator", "probability"}, "sampler(discrete_mixture) atom");
      atoms.push_back(operator_from_json(atom.at("operator")));
      probabilities.push_back(atom.at("probability").get<double>());
    }
    return make_discrete_mixture(std::move(atoms), std::move(probabilities));
  }
  if (kind == "fusion_frame") {
    require_fields(j, {"subspaces"}, "sampler(fusion_frame)");
    std::vector<std::vector<Vectord>> bases;
    std::vector<double> weights;
    for (const Json& sub : j.at("subspaces")) {
      require_fields(sub, {"basis", "weight"}, "sampler(fusion_frame) subspace");
      std::vector<Vectord> basis;
      for (const Json& v : sub.at("basis")) basis.push_back(vector_from_json(v));
      bases.push_back(std::move(basis));
      weights.push_back(sub.at("weight").get<double>());
    }
    return make_fusion_frame(std::move(bases), std::move(weights));
  }
  if (kind == "kaczmarz_row") {
    require_fields(j, {"matrix"}, "sampler(kaczmarz_row)");
    return make_kaczmarz_rows(matrix_from_json(j.at("matrix")));
  }
  if (kind == "random_spectral") {
    require_fields(j, {"dim", "lo", "hi"}, "sampler(random_spectral)");
    return make_random_spectral(j.at("dim").get<Index>(), j.at("lo").get<double>(),
                                j.at("hi").get<double>());
  }
  throw std::invalid_argument("sampler: unknown kind \"" + kind + "\"");
}

Json path_to_json(const IterationPath& path, bool with_vectors) {
  Json j{{"step_count", path.step_count},
         {"seed", path.seed},
         {"stream_index", path.stream_index},
         {"residual_norms", path.residual_norms},
         {"term_norms", path.term_norms}};
  if (with_vectors) {
    j["x0"] = vector_to_json(path.x0);
    j["final_residual"] = vector_to_json(path.final_residual);
    Json terms = Json::array();
    for (const Vectord& t : path.terms) terms.push_back(vector_to_json(t));
    j["terms"] = std::move(terms);
  }
  return j;
}

Json summary_to_json(const TrialSummary& summary) {
  return Json{{"spec", summary.spec_description},
              {"x", vector_to_json(summary.x)},
              {"x_norm_sq", summary.x_norm_sq},
              {"n_steps", summary.n_steps},
              {"n_trials", summary.n_trials},
              {"delta", summary.delta},
              {"mean_residual_sq", summary.mean_residual_sq},
              {"stderr_residual_sq", summary.stderr_residual_sq},
              {"mean_frame_energy", summary.mean_frame_energy},
              {"stderr_frame_energy", summary.stderr_frame_energy},
              {"exceedance_freq", summary.exceedance_freq},
              {"violation_count", summary.violation_count}};
}

Json dilation_report_to_json(const DilationReport<double>& report) {
  return Json{{"isometry_residual", report.isometry_residual},
              {"idempotency_residual", report.idempotency_residual},
              {"compression_residual", report.compression_residual},
              {"pass", report.pass}};
}

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

}  // namespace rovf
