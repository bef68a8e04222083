#include "kvnlab/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kvnlab {

namespace {

void require_object(const Json& j, const char* what) {
    if (!j.is_object()) {
        throw ValidationError(std::string(what) + ": expected a JSON object");
    }
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const char* what) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ValidationError(std::string(what) + ": unknown field \"" + item.key() + "\"");
        }
    }
}

double finite_number(const Json& j, const char* what) {
    if (!j.is_number()) {
        throw ValidationError(std::string(what) + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + ": number is not finite");
    }
    return v;
}

Complex complex_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) {
        throw ValidationError(std::string(what) + ": complex entries must be [re, im]");
    }
    return Complex(finite_number(j[0], what), finite_number(j[1], what));
}

// + 0.0 folds negative zero into plain zero
Json complex_to_json(Complex z) { return Json::array({z.real() + 0.0, z.imag() + 0.0}); }

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

Json matrix_to_json(const Matrix& M) {
    Json entries = Json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < M.cols(); ++j) row.push_back(complex_to_json(M(i, j)));
        entries.push_back(std::move(row));
    }
    return Json{{"dim", M.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const Json& j) {
    require_object(j, "matrix");
    reject_unknown_keys(j, {"dim", "entries"}, "matrix");
    if (!j.contains("dim") || !j.contains("entries")) {
        throw ValidationError("matrix: fields \"dim\" and \"entries\" are required");
    }
    if (!j["dim"].is_number_integer()) {
        throw ValidationError("matrix: \"dim\" must be an integer");
    }
    const auto n = j["dim"].get<Index>();
    if (n < 1) throw ValidationError("matrix: \"dim\" must be >= 1");

    const Json& entries = j["entries"];
    if (!entries.is_array() || static_cast<Index>(entries.size()) != n) {
        throw ValidationError("matrix: \"entries\" must be a square row-major array");
    }
    Matrix M(n, n);
    for (Index i = 0; i < n; ++i) {
        const Json& row = entries[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n) {
            throw ValidationError("matrix: \"entries\" must be a square row-major array");
        }
        for (Index k = 0; k < n; ++k) {
            M(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], "matrix");
        }
    }
    return M;
}

Json functional_to_json(const TraceFormFunctional& f) {
    return Json{{"kind", "trace_form"}, {"generator", matrix_to_json(f.generator)}};
}

TraceFormFunctional functional_from_json(const Json& j) {
    require_object(j, "functional");
    reject_unknown_keys(j, {"kind", "generator"}, "functional");
    if (!j.contains("kind") || !j["kind"].is_string() ||
        j["kind"].get<std::string>() != "trace_form") {
        throw ValidationError("functional: \"kind\" must be \"trace_form\"");
    }
    if (!j.contains("generator")) {
        throw ValidationError("functional: \"generator\" is required");
    }
    return TraceFormFunctional(matrix_from_json(j["generator"]));
}

IdealFunctional ideal_functional_from_json(const Json& j, const ToleranceProfile& tol) {
    require_object(j, "ideal functional");
    reject_unknown_keys(j, {"dim", "ideal", "rep"}, "ideal functional");
    if (!j.contains("dim") || !j.contains("ideal") || !j.contains("rep")) {
        throw ValidationError(
            "ideal functional: fields \"dim\", \"ideal\", and \"rep\" are required");
    }
    if (!j["dim"].is_number_integer()) {
        throw ValidationError("ideal functional: \"dim\" must be an integer");
    }
    const auto n = j["dim"].get<Index>();
    if (n < 1) throw ValidationError("ideal functional: \"dim\" must be >= 1");

    const Json& ideal_spec = j["ideal"];
    require_object(ideal_spec, "ideal");
    LeftIdeal ideal = LeftIdeal::corner(n, n);
    if (ideal_spec.contains("corner_rank")) {
        reject_unknown_keys(ideal_spec, {"corner_rank"}, "ideal");
        if (!ideal_spec["corner_rank"].is_number_integer()) {
            throw ValidationError("ideal: \"corner_rank\" must be an integer");
        }
        const auto r = ideal_spec["corner_rank"].get<Index>();
        if (r < 1 || r > n) throw ValidationError("ideal: \"corner_rank\" out of range");
        ideal = LeftIdeal::corner(n, r);
    } else if (ideal_spec.contains("range_basis")) {
        reject_unknown_keys(ideal_spec, {"range_basis"}, "ideal");
        const Json& vecs = ideal_spec["range_basis"];
        if (!vecs.is_array() || vecs.empty()) {
            throw ValidationError("ideal: \"range_basis\" must be a non-empty array of vectors");
        }
        Matrix spanning(n, static_cast<Index>(vecs.size()));
        for (std::size_t c = 0; c < vecs.size(); ++c) {
            const Json& vec = vecs[c];
            if (!vec.is_array() || static_cast<Index>(vec.size()) != n) {
                throw ValidationError("ideal: range basis vectors must have length dim");
            }
            for (Index i = 0; i < n; ++i) {
                spanning(i, static_cast<Index>(c)) =
                    complex_from_json(vec[static_cast<std::size_t>(i)], "range_basis");
            }
        }
        ideal = LeftIdeal::from_range_basis(n, spanning, tol);
    } else {
        throw ValidationError("ideal: provide \"corner_rank\" or \"range_basis\"");
    }

    Matrix rep = matrix_from_json(j["rep"]);
    if (rep.rows() != n) {
        throw ValidationError("ideal functional: \"rep\" dimension differs from \"dim\"");
    }
    return IdealFunctional(std::move(ideal), std::move(rep));
}

TruncationFamily family_from_json(const Json& j) {
    require_object(j, "family");
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ValidationError("family: \"kind\" is required");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "cesaro") {
        reject_unknown_keys(j, {"kind"}, "family");
        return TruncationFamily::cesaro();
    }
    if (kind == "trace_class") {
        reject_unknown_keys(j, {"kind", "diag", "base"}, "family");
        if (!j.contains("diag")) throw ValidationError("family: \"diag\" is required");
        const Json& diag = j["diag"];
        if (diag.is_string() && diag.get<std::string>() == "pow") {
            if (!j.contains("base")) {
                throw ValidationError("family: diag \"pow\" needs a \"base\"");
            }
            return TruncationFamily::trace_class_pow(finite_number(j["base"], "family base"));
        }
        if (diag.is_array()) {
            std::vector<double> values;
            values.reserve(diag.size());
            for (const Json& v : diag) values.push_back(finite_number(v, "family diag"));
            return TruncationFamily::trace_class_list(std::move(values));
        }
        throw ValidationError("family: \"diag\" must be \"pow\" or an explicit list");
    }
    if (kind == "mixture") {
        reject_unknown_keys(j, {"kind", "lambda", "trace_class"}, "family");
        if (!j.contains("lambda") || !j.contains("trace_class")) {
            throw ValidationError("family: mixture needs \"lambda\" and \"trace_class\"");
        }
        TruncationFamily part = family_from_json(j["trace_class"]);
        if (part.kind != TruncationFamily::Kind::TraceClassDiag) {
            throw ValidationError("family: mixture part must be a trace_class family");
        }
        return TruncationFamily::mixture(finite_number(j["lambda"], "family lambda"), part);
    }
    throw ValidationError("family: unknown kind \"" + kind + "\"");
}

Json kvn_result_to_json(const KvnResult& result) {
    return Json{{"density", matrix_to_json(result.density)},
                {"best_C", result.best_C},
                {"gram_rank", result.gram_rank}};
}

Json criterion_report_to_json(const CriterionReport& report) {
    Json j{{"criterion", report.criterion},
           {"lhs", report.lhs},
           {"rhs", report.rhs},
           {"gap", report.gap},
           {"verdict", to_string(report.verdict)},
           {"N", report.N},
           {"k", report.k},
           {"probes", report.probes}};
    if (!report.note.empty()) j["note"] = report.note;
    return j;
}

std::string sweep_to_csv(const SweepResult& sweep, bool include_timing) {
    std::ostringstream os;
    os << "family,N,k,sup,f_of_I,gap,ms\n";
    for (const SweepRow& row : sweep.rows) {
        os << row.family << ',' << row.N << ',' << row.k << ',' << format_double(row.sup) << ','
           << format_double(row.f_of_I) << ',' << format_double(row.gap) << ','
           << format_double(include_timing ? row.ms : 0.0) << '\n';
    }
    return os.str();
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& err) {
        throw ValidationError("malformed JSON in " + path + ": " + err.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << text;
    if (!out) throw ValidationError("failed writing output file: " + path);
}

}  // namespace kvnlab
