#pragma once

#include <string>

#include <json.hpp>

#include "rovf/analysis.hpp"
#include "rovf/dilation.hpp"
#include "rovf/iteration.hpp"
#include "rovf/samplers.hpp"
#include "rovf/types.hpp"

namespace rovf {

using Json = nlohmann::json;

// Wire formats:
//   vector            {"dim": d, "entries": [d reals]}
//   square operator   {"dim": d, "entries": [d*d reals, row-major]}
//   general matrix    {"rows": m, "cols": n, "entries": [m*n reals, row-major]}
//   sampler spec      {"kind": ..., kind-specific fields}

Json vector_to_json(const Vectord& v);
Vectord vector_from_json(const Json& j);

Json operator_to_json(const Matrixd& m);
Matrixd operator_from_json(const Json& j);

Json matrix_to_json(const Matrixd& m);
Matrixd matrix_from_json(const Json& j);

Json sampler_to_json(const SamplerSpec& spec);
SamplerSpec sampler_from_json(const Json& j);

/// Norm data always; term/residual vectors only when with_vectors is set.
Json path_to_json(const IterationPath& path, bool with_vectors = false);

Json summary_to_json(const TrialSummary& summary);

Json dilation_report_to_json(const DilationReport<double>& report);

/// Shortest round-trip decimal form; the same bytes for the same double.
std::string format_double(double value);

}  // namespace rovf
