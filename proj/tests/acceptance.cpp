// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Run directly or through ctest (-R acceptance).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kvnlab/harness.hpp"
#include "kvnlab/json_io.hpp"
#include "kvnlab/kvn.hpp"
#include "kvnlab/normality.hpp"
#include "kvnlab/random.hpp"

using namespace kvnlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel_diff(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom > 0.0 ? std::abs(a - b) / denom : 0.0;
}

// 1. closed-form kvn_value vs ascent oracle on 50 seeded random instances
Outcome oracle_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const std::uint64_t seed = 9000 + static_cast<std::uint64_t>(inst);
        GaussianSource rng(seed);
        const Index n = 4 + static_cast<Index>(inst % 3);      // 4..6
        const Index r = 1 + static_cast<Index>((inst / 3) % 3);  // 1..3
        const IdealFunctional phi(LeftIdeal::corner(n, r), rng.psd(n));
        const Matrix x = rng.gaussian(n, n);
        worst = std::max(worst, rel_diff(kvn_value(phi, x), sup_oracle(phi, x, 200, seed)));
        worst = std::max(worst, rel_diff(kvn_value(phi, Matrix::Identity(n, n)),
                                         sup_oracle(phi, Matrix::Identity(n, n), 200, seed + 1)));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "max rel diff " << worst << " over 50 instances, " << secs << " s";
    return {worst <= 1e-6 && secs < 60.0, os.str()};
}

// 2. full-ideal extension reconstructs the generator
Outcome smallest_extension() {
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        GaussianSource rng(4100 + static_cast<std::uint64_t>(inst));
        const Index n = 4 + static_cast<Index>(inst % 5);  // 4..8
        const Matrix S = rng.psd(n);
        const KvnResult res = kvn_extension(IdealFunctional(LeftIdeal::corner(n, n), S));
        worst = std::max(worst, max_abs(res.density - S));
    }
    std::ostringstream os;
    os << "max |F - S|_inf " << worst << " over 20 generators";
    return {worst <= 1e-9, os.str()};
}

// 3. minimality certificate: PSD-preserving corner perturbations are PSD
Outcome minimality() {
    int violations = 0;
    int kept_total = 0;
    double worst = 0.0;
    for (int inst = 0; inst < 20; ++inst) {
        const std::uint64_t seed = 5200 + static_cast<std::uint64_t>(inst);
        GaussianSource rng(seed);
        const Index n = 4 + static_cast<Index>(inst % 3);
        const Index r = 1 + static_cast<Index>(inst % 3);
        const LeftIdeal ideal = LeftIdeal::from_range_basis(n, rng.gaussian(n, r));
        const IdealFunctional phi(ideal, rng.psd(n));
        const KvnResult res = kvn_extension(phi);
        const MinimalityReport rep = minimality_certificate(res, ideal, 1000, seed, 1e-8);
        violations += rep.violations;
        kept_total += rep.kept;
        worst = std::max(worst, rep.worst_violation);
    }
    std::ostringstream os;
    os << violations << " violations among " << kept_total
       << " PSD-preserving perturbations (20000 sampled), worst " << worst;
    return {violations == 0, os.str()};
}

// 4. |tr(XF)| <= ||F||_1 ||X|| on 500 pairs
Outcome trace_inequality() {
    int failures = 0;
    double worst_excess = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        GaussianSource rng(6300 + static_cast<std::uint64_t>(trial));
        const Index n = 3 + static_cast<Index>(trial % 4);
        const Matrix X = rng.gaussian(n, n);
        Matrix F;
        switch (trial % 3) {
            case 0: F = rng.psd(n); break;
            case 1: F = rng.hermitian(n); break;
            default: F = rng.gaussian(n, n); break;
        }
        const double lhs = std::abs((X * F).trace());
        const double rhs = trace_norm(F) * op_norm(X) + 1e-9;
        if (lhs > rhs) ++failures;
        worst_excess = std::max(worst_excess, lhs - rhs);
    }
    std::ostringstream os;
    os << failures << " violations in 500 pairs";
    return {failures == 0, os.str()};
}

// 5. order_leq matches construction truth on 200 pairs
Outcome order_preservation() {
    int disagreements = 0;
    for (int trial = 0; trial < 200; ++trial) {
        GaussianSource rng(7400 + static_cast<std::uint64_t>(trial));
        const Index n = 3 + static_cast<Index>(trial % 4);
        const Matrix F = rng.psd(n);
        const bool ordered_truth = trial % 2 == 0;
        Matrix G;
        if (ordered_truth) {
            const Matrix B = rng.gaussian(n, n);
            G = F + B.adjoint() * B / static_cast<double>(n);
        } else {
            Matrix H = rng.hermitian(n);
            Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
            H -= (es.eigenvalues().minCoeff() + 0.1) * Matrix::Identity(n, n);
            G = F + H;  // difference has an eigenvalue at exactly -0.1
        }
        const bool claimed = order_leq(TraceFormFunctional(F), TraceFormFunctional(G));
        if (claimed != ordered_truth) ++disagreements;
    }
    std::ostringstream os;
    os << disagreements << " disagreements in 200 constructed pairs";
    return {disagreements == 0, os.str()};
}

// 6. riesz recovery of planted black-box functionals
Outcome riesz_recovery() {
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        GaussianSource rng(8500 + static_cast<std::uint64_t>(inst));
        const Index n = 3 + static_cast<Index>(inst % 4);
        const Matrix plant = rng.gaussian(n, n);
        const TraceFormFunctional hidden(plant);
        BlackBoxFunctional box;
        box.dim = n;
        box.eval = [&hidden](const Matrix& X) { return eval_trace_form(hidden, X); };
        worst = std::max(worst, max_abs(riesz_recover(box).generator - plant));
    }
    std::ostringstream os;
    os << "max |S - plant|_inf " << worst << " over 50 plants";
    return {worst <= 1e-10, os.str()};
}

// 7. trace-class gap law 2^-k - 2^-N, oracle-confirmed
Outcome normal_gap_law() {
    const TruncationFamily fam = TruncationFamily::trace_class_pow(0.5);
    double worst_law = 0.0;
    double worst_oracle = 0.0;
    for (const Index N : {Index(8), Index(16), Index(32)}) {
        const TraceFormFunctional f = family_generator(fam, N);
        for (Index k = 1; k <= N; ++k) {
            const CriterionReport rep = criterion_v(f, k);
            const double law = std::pow(2.0, -double(k)) - std::pow(2.0, -double(N));
            worst_law = std::max(worst_law, std::abs(rep.gap - law));

            const IdealFunctional phi = restrict_to_ideal(f, LeftIdeal::corner(N, k));
            const double oracle =
                sup_oracle(phi, Matrix::Identity(N, N), 200, 100 + static_cast<std::uint64_t>(k));
            worst_oracle = std::max(worst_oracle, std::abs(oracle - rep.rhs));
        }
    }
    std::ostringstream os;
    os << "max |gap - law| " << worst_law << ", max |oracle - closed| " << worst_oracle;
    return {worst_law <= 1e-6 && worst_oracle <= 1e-6, os.str()};
}

// 8. cesaro law k/N and the three classification verdicts
Outcome singular_gap_law() {
    double worst = 0.0;
    const SweepResult ces =
        sweep(TruncationFamily::cesaro(), {8, 16, 32, 64}, {2, 4, 8});
    for (const SweepRow& row : ces.rows) {
        worst = std::max(worst, std::abs(row.sup - double(row.k) / double(row.N)));
    }

    const std::vector<Index> Ns{8, 16, 32, 64};
    const std::vector<Index> ks{2, 4, 8, 16, 32, 64};
    const ClassifyResult ces_cls = classify(sweep(TruncationFamily::cesaro(), Ns, ks), 2);
    const ClassifyResult tc_cls =
        classify(sweep(TruncationFamily::trace_class_pow(0.5), Ns, ks), 8);
    const ClassifyResult mix_cls = classify(
        sweep(TruncationFamily::mixture(0.5, TruncationFamily::trace_class_pow(0.5)),
              {16, 32, 64, 128, 256}, {8, 16, 32, 64, 128, 256}),
        8);

    const bool verdicts = ces_cls.verdict == FamilyVerdict::SingularLike &&
                          tc_cls.verdict == FamilyVerdict::NormalLike &&
                          mix_cls.verdict == FamilyVerdict::Mixed &&
                          std::abs(mix_cls.plateau - 0.5) <= 0.05;
    std::ostringstream os;
    os << "max |sup - k/N| " << worst << "; verdicts " << to_string(ces_cls.verdict) << "/"
       << to_string(tc_cls.verdict) << "/" << to_string(mix_cls.verdict) << ", mixture plateau "
       << mix_cls.plateau;
    return {worst <= 1e-6 && verdicts, os.str()};
}

// 9. criterion (iv) at I coincides with (v); contraction gaps stay below
Outcome criterion_consistency() {
    bool exact = true;
    double worst_excess = 0.0;
    for (int inst = 0; inst < 6; ++inst) {
        GaussianSource rng(9600 + static_cast<std::uint64_t>(inst));
        const Index n = 4 + static_cast<Index>(inst % 3);
        const TraceFormFunctional f(rng.psd(n));
        const Matrix I = Matrix::Identity(n, n);
        for (Index k = 1; k <= n; ++k) {
            const CriterionReport v = criterion_v(f, k);
            const CriterionReport iv = criterion_iv(f, I, k);
            exact = exact && v.lhs == iv.lhs && v.rhs == iv.rhs && v.gap == iv.gap;
            for (int probe = 0; probe < 20; ++probe) {
                Matrix X = rng.gaussian(n, n);
                const double norm = op_norm(X);
                if (norm > 0.0) X /= norm;
                const double excess = criterion_iv(f, X, k).gap - v.gap;
                worst_excess = std::max(worst_excess, excess);
            }
        }
    }
    std::ostringstream os;
    os << (exact ? "identity at X = I exact" : "identity at X = I BROKEN")
       << ", worst contraction excess " << worst_excess;
    return {exact && worst_excess <= 1e-8, os.str()};
}

// 10. byte-identical CLI outputs under identical inputs and seeds
Outcome cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / "kvnlab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const auto file = [&dir](const std::string& name) { return (dir / name).string(); };
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const auto run = [](const std::string& args) {
        const std::string cmd = std::string(KVNLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };

    GaussianSource rng(424242);
    write_json_file(file("inst.json"), Json{{"dim", 5},
                                            {"ideal", Json{{"corner_rank", 2}}},
                                            {"rep", matrix_to_json(rng.psd(5))}});
    write_json_file(file("f.json"), functional_to_json(TraceFormFunctional(rng.psd(5))));

    const std::vector<std::pair<std::string, std::string>> commands{
        {"extend --input " + file("inst.json"), "extend"},
        {"certify --functional " + file("f.json") + " --criteria v,iv,iii --corner-k 1..N --seed 3",
         "certify"},
        {"sweep --family cesaro --N 8,16,32 --k 2,4", "sweep"},
        {"oracle --input " + file("inst.json") + " --seed 12", "oracle"},
        {"recover --input " + file("f.json"), "recover"},
    };

    bool all_ok = true;
    std::ostringstream os;
    for (const auto& [args, tag] : commands) {
        const std::string a = file(tag + "_a.out");
        const std::string b = file(tag + "_b.out");
        const int code_a = run(args + " --out " + a);
        const int code_b = run(args + " --out " + b);
        const bool same = code_a == 0 && code_b == 0 && slurp(a) == slurp(b) && !slurp(a).empty();
        if (!same) {
            all_ok = false;
            os << tag << " differs; ";
        }
    }
    if (all_ok) os << "5 subcommands byte-identical across repeated runs";
    return {all_ok, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle agreement (closed form vs ascent)", oracle_agreement},
        {"smallest-extension identity at the full ideal", smallest_extension},
        {"minimality certificate", minimality},
        {"trace inequality", trace_inequality},
        {"order preservation", order_preservation},
        {"riesz recovery", riesz_recovery},
        {"normal-family gap law", normal_gap_law},
        {"singular-family gap law and classification", singular_gap_law},
        {"criterion consistency (iv vs v)", criterion_consistency},
        {"CLI determinism", cli_determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& err) {
            outcome = {false, std::string("exception: ") + err.what()};
        }
        if (!outcome.pass) ++failed;
        std::printf("[%2zu] %s  %s: %s\n", i + 1, outcome.pass ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed,
                criteria.size());
    return failed == 0 ? 0 : 1;
}
