// kvnlab — CLI over the extension library. Subcommands: extend, certify,
// sweep, oracle, recover. JSON in/out, CSV for sweeps. Exit codes: 0 success,
// 1 bad input or I/O, 2 no positive extension exists, 3 a certification
// criterion failed.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "kvnlab/harness.hpp"
#include "kvnlab/json_io.hpp"
#include "kvnlab/kvn.hpp"
#include "kvnlab/normality.hpp"
#include "kvnlab/random.hpp"

namespace {

using namespace kvnlab;

void emit_error(const std::string& code, const std::string& detail) {
    std::cerr << Json{{"error", code}, {"detail", detail}}.dump() << "\n";
}

// "2" | "2,4,8" | "1..8" | "1..N" | "N"; "N" stands for the functional's dim.
std::vector<Index> parse_k_spec(const std::string& spec, Index dim) {
    std::vector<Index> out;
    std::istringstream stream(spec);
    std::string token;
    const auto parse_endpoint = [dim](const std::string& text) -> Index {
        if (text == "N") return dim;
        std::size_t used = 0;
        const long value = std::stol(text, &used);
        if (used != text.size()) throw ValidationError("bad corner-k token: " + text);
        return static_cast<Index>(value);
    };
    while (std::getline(stream, token, ',')) {
        if (token.empty()) throw ValidationError("empty corner-k token");
        const auto dots = token.find("..");
        Index lo = 0;
        Index hi = 0;
        try {
            if (dots == std::string::npos) {
                lo = hi = parse_endpoint(token);
            } else {
                lo = parse_endpoint(token.substr(0, dots));
                hi = parse_endpoint(token.substr(dots + 2));
            }
        } catch (const std::exception&) {
            throw ValidationError("bad corner-k token: " + token);
        }
        if (lo < 1 || hi > dim || lo > hi) {
            throw ValidationError("corner-k out of range 1..N: " + token);
        }
        for (Index k = lo; k <= hi; ++k) out.push_back(k);
    }
    if (out.empty()) throw ValidationError("corner-k selects no ranks");
    return out;
}

TruncationFamily resolve_family(const std::string& spec) {
    if (spec == "cesaro") return TruncationFamily::cesaro();
    if (spec == "pow2") return TruncationFamily::trace_class_pow(0.5);
    if (std::filesystem::exists(spec)) return family_from_json(load_json_file(spec));
    throw ValidationError("unknown family \"" + spec + "\" (builtins: cesaro, pow2; or a JSON path)");
}

struct CommonOpts {
    std::string input;
    std::string out;
    std::uint64_t seed = 0;
    ToleranceProfile tol;
};

void add_tolerance_flags(CLI::App* cmd, ToleranceProfile& tol) {
    cmd->add_option("--psd-tol", tol.psd_tol, "PSD acceptance tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rank-rtol", tol.rank_rtol, "relative eigenvalue cutoff for ranks")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eq-tol", tol.eq_tol, "scalar comparison slack")
        ->check(CLI::PositiveNumber);
}

int run_extend(const CommonOpts& opts) {
    const IdealFunctional phi = ideal_functional_from_json(load_json_file(opts.input), opts.tol);
    const KvnResult result = kvn_extension(phi, opts.tol);
    write_json_file(opts.out, kvn_result_to_json(result));
    return 0;
}

int run_certify(const CommonOpts& opts, const std::string& functional_path,
                const std::string& g_path, const std::string& criteria_spec,
                const std::string& corner_spec, int trials) {
    const TraceFormFunctional f = functional_from_json(load_json_file(functional_path));
    const Index dim = f.dim();
    const std::vector<Index> ks = parse_k_spec(corner_spec, dim);

    std::vector<std::string> criteria;
    std::istringstream stream(criteria_spec);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (token != "ii" && token != "iii" && token != "iv" && token != "v") {
            throw ValidationError("unknown criterion \"" + token + "\" (use ii,iii,iv,v)");
        }
        criteria.push_back(token);
    }
    if (criteria.empty()) throw ValidationError("no criteria selected");

    Json reports = Json::array();
    bool any_fail = false;
    for (const std::string& criterion : criteria) {
        if (criterion == "ii") {
            const TraceFormFunctional g =
                g_path.empty() ? f : functional_from_json(load_json_file(g_path));
            const CriterionReport report = criterion_ii(f, g, opts.tol);
            any_fail = any_fail || report.verdict == Verdict::Fail;
            reports.push_back(criterion_report_to_json(report));
            continue;
        }
        for (const Index k : ks) {
            CriterionReport report;
            if (criterion == "v") {
                report = criterion_v(f, k, opts.tol);
            } else if (criterion == "iv") {
                // seeded Gaussian probe scaled to a contraction
                GaussianSource rng(mix_seed(opts.seed, static_cast<std::uint64_t>(k)));
                Matrix X = rng.gaussian(dim, dim);
                const double norm = op_norm(X);
                if (norm > 0.0) X /= norm;
                report = criterion_iv(f, X, k, opts.tol);
            } else {
                report = criterion_iii(f, k, trials, opts.seed, opts.tol);
            }
            any_fail = any_fail || report.verdict == Verdict::Fail;
            reports.push_back(criterion_report_to_json(report));
        }
    }
    write_json_file(opts.out, reports);
    return any_fail ? 3 : 0;
}

int run_sweep(const CommonOpts& opts, const std::string& family_spec,
              const std::vector<Index>& N_list, const std::vector<Index>& k_list, bool timing,
              Index N_cap) {
    const TruncationFamily family = resolve_family(family_spec);
    const SweepResult result = sweep(family, N_list, k_list, opts.tol, N_cap);
    write_text_file(opts.out, sweep_to_csv(result, timing));
    return 0;
}

int run_oracle(const CommonOpts& opts, int iters) {
    const IdealFunctional phi = ideal_functional_from_json(load_json_file(opts.input), opts.tol);
    const Matrix I = Matrix::Identity(phi.dim(), phi.dim());
    const double closed = kvn_value(phi, I, opts.tol);
    const double ascent = sup_oracle(phi, I, iters, opts.seed, opts.tol);
    const double denom = std::max(std::abs(closed), std::abs(ascent));
    const double rel = denom > 0.0 ? std::abs(closed - ascent) / denom : 0.0;
    write_json_file(opts.out,
                    Json{{"kvn_value", closed}, {"oracle_value", ascent}, {"rel_diff", rel}});
    return 0;
}

int run_recover(const CommonOpts& opts) {
    const TraceFormFunctional plant = functional_from_json(load_json_file(opts.input));
    BlackBoxFunctional box;
    box.dim = plant.dim();
    const ToleranceProfile tol = opts.tol;
    box.eval = [&plant, tol](const Matrix& X) { return eval_trace_form(plant, X, tol); };
    const TraceFormFunctional recovered = riesz_recover(box, opts.tol);
    write_json_file(opts.out, matrix_to_json(recovered.generator));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krein-von Neumann minimal positive extensions and normality certification"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* extend = app.add_subcommand("extend", "compute the minimal positive extension");
    extend->add_option("--input", opts.input, "ideal-functional JSON")->required();
    extend->add_option("--out", opts.out, "output KvnResult JSON")->required();
    extend->add_option("--seed", opts.seed, "random seed");
    add_tolerance_flags(extend, opts.tol);

    std::string functional_path;
    std::string g_path;
    std::string criteria_spec = "v";
    std::string corner_spec = "N";
    int trials = 64;
    auto* certify = app.add_subcommand("certify", "evaluate normality criteria");
    certify->add_option("--functional", functional_path, "functional JSON")->required();
    certify->add_option("--g", g_path, "dominating functional JSON for criterion ii");
    certify->add_option("--criteria", criteria_spec, "comma list from ii,iii,iv,v");
    certify->add_option("--corner-k", corner_spec, "corner ranks, e.g. 2,4 or 1..N");
    certify->add_option("--trials", trials, "sample count for criterion iii")
        ->check(CLI::PositiveNumber);
    certify->add_option("--seed", opts.seed, "random seed");
    certify->add_option("--out", opts.out, "output report JSON")->required();
    add_tolerance_flags(certify, opts.tol);

    std::string family_spec;
    std::vector<Index> N_list;
    std::vector<Index> k_list;
    bool timing = false;
    Index N_cap = 256;
    auto* sweep_cmd = app.add_subcommand("sweep", "criterion-(v) gaps over an (N, k) grid");
    sweep_cmd->add_option("--family", family_spec, "cesaro | pow2 | family JSON path")
        ->required();
    sweep_cmd->add_option("--N", N_list, "truncation dimensions")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--k", k_list, "corner ranks")->required()->delimiter(',');
    sweep_cmd->add_option("--out", opts.out, "output CSV path")->required();
    sweep_cmd->add_flag("--timing", timing, "record wall time per row (breaks byte determinism)");
    sweep_cmd->add_option("--max-N", N_cap, "cap on truncation dimension")
        ->check(CLI::PositiveNumber);
    add_tolerance_flags(sweep_cmd, opts.tol);

    int oracle_iters = 200;
    auto* oracle = app.add_subcommand("oracle", "closed form vs ascent oracle at the identity");
    oracle->add_option("--input", opts.input, "ideal-functional JSON")->required();
    oracle->add_option("--out", opts.out, "output JSON")->required();
    oracle->add_option("--seed", opts.seed, "random seed");
    oracle->add_option("--trials", oracle_iters, "ascent iteration budget per start")
        ->check(CLI::PositiveNumber);
    add_tolerance_flags(oracle, opts.tol);

    auto* recover = app.add_subcommand("recover", "recover a generator through the black-box path");
    recover->add_option("--input", opts.input, "functional JSON")->required();
    recover->add_option("--out", opts.out, "recovered generator matrix JSON")->required();
    add_tolerance_flags(recover, opts.tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("cli_usage", e.what());
        return 1;
    }

    try {
        if (extend->parsed()) return run_extend(opts);
        if (certify->parsed()) {
            return run_certify(opts, functional_path, g_path, criteria_spec, corner_spec, trials);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(opts, family_spec, N_list, k_list, timing, N_cap);
        }
        if (oracle->parsed()) return run_oracle(opts, oracle_iters);
        if (recover->parsed()) return run_recover(opts);
        emit_error("cli_usage", "no subcommand selected");
        return 1;
    } catch (const InfeasibleFunctional& err) {
        emit_error(err.code, err.what());
        return 2;
    } catch (const NotPositiveOnIdeal& err) {
        emit_error(err.code, err.what());
        return 2;
    } catch (const KvnError& err) {
        emit_error(err.code, err.what());
        return 1;
    } catch (const std::exception& err) {
        emit_error("internal_error", err.what());
        return 1;
    }
}
