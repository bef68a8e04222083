// json_io.hpp — File formats for the CLI: matrices, functionals, ideal
// functionals, families, extension results, and sweep CSV. Readers are
// strict: unknown keys, non-square shapes, and non-finite numbers are
// rejected with ValidationError.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kvnlab/harness.hpp"
#include "kvnlab/ideal.hpp"
#include "kvnlab/kvn.hpp"
#include "kvnlab/normality.hpp"
#include "kvnlab/truncation.hpp"
#include "kvnlab/types.hpp"

namespace kvnlab {

using Json = nlohmann::json;

// { "dim": n, "entries": [[[re, im], ...], ...] }, row-major
Json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const Json& j);

// { "kind": "trace_form", "generator": <matrix> }
Json functional_to_json(const TraceFormFunctional& f);
TraceFormFunctional functional_from_json(const Json& j);

// { "dim": n, "ideal": {"corner_rank": r} | {"range_basis": [vec...]},
//   "rep": <matrix> }
IdealFunctional ideal_functional_from_json(const Json& j, const ToleranceProfile& tol = {});

// { "kind": "cesaro" } |
// { "kind": "trace_class", "diag": "pow", "base": b } |
// { "kind": "trace_class", "diag": [d1, d2, ...] } |
// { "kind": "mixture", "lambda": l, "trace_class": {...} }
TruncationFamily family_from_json(const Json& j);

// { "density": <matrix>, "best_C": x, "gram_rank": m }
Json kvn_result_to_json(const KvnResult& result);

Json criterion_report_to_json(const CriterionReport& report);

// columns: family,N,k,sup,f_of_I,gap,ms. Timing is zeroed unless requested so
// identical runs stay byte-identical.
std::string sweep_to_csv(const SweepResult& sweep, bool include_timing = false);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace kvnlab
