#pragma once

// JSON and CSV plumbing. Numbers are written with %.17g so reloads are exact.

#include <string>

#include <json.hpp>

#include "cpskit/cps_operators.hpp"
#include "cpskit/prep.hpp"

namespace cpskit::io {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

Json complex_to_json(cplx z);
cplx complex_from_json(const Json& j);

/// {d, n0, alpha: [re, im], coeffs: [[re, im], ...], convention}
Json state_to_json(const CpsState& state);
CpsState state_from_json(const Json& j);

/// {label, d, n0, alpha, re: [[...]], im: [[...]]}, row-major.
Json operator_to_json(const CpsOperatorMatrix& op);
/// One row per q': re_0, im_0, re_1, im_1, ...
std::string operator_to_csv(const CpsOperatorMatrix& op);

/// {"m": M, "re": [[...]], "im": [[...]]}
CMatrix unitary_from_json(const Json& j);
Json unitary_to_json(const CMatrix& u);

/// {"value", "stderr" (or null), "method", "samples", "seed"}
Json boson_result_to_json(const BosonSamplingResult& r);

Json parse(const std::string& text);

}  // namespace cpskit::io
