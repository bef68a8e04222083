#include "kvnlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>

#include "kvnlab/normality.hpp"

namespace kvnlab {

namespace {

// thresholds for trend classification
constexpr double kDiagonalGapTol = 1e-6;
constexpr double kNormalWeightMax = 0.1;
constexpr double kSingularWeightMin = 0.9;

int worker_cap() {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("KVNLAB_THREADS")) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && parsed >= 1) {
            cap = std::min<long>(cap, parsed);
        }
    }
    return cap;
}

}  // namespace

SweepResult sweep(const TruncationFamily& family, const std::vector<Index>& N_list,
                  const std::vector<Index>& k_list, const ToleranceProfile& tol, Index N_cap) {
    std::vector<std::pair<Index, Index>> grid;
    for (const Index N : N_list) {
        if (N < 1) throw ValidationError("sweep: N must be >= 1");
        if (N > N_cap) {
            std::ostringstream os;
            os << "sweep: N = " << N << " exceeds the cap " << N_cap
               << "; raise it explicitly for larger studies";
            throw ValidationError(os.str());
        }
        for (const Index k : k_list) {
            if (k < 1) throw ValidationError("sweep: k must be >= 1");
            if (k <= N) grid.emplace_back(N, k);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SweepResult result;
    result.rows.resize(grid.size());

    const auto run_row = [&](std::size_t idx) {
        const auto [N, k] = grid[idx];
        const auto t0 = std::chrono::steady_clock::now();
        const TraceFormFunctional f = family_generator(family, N);
        const CriterionReport rep = criterion_v(f, k, tol);
        const auto t1 = std::chrono::steady_clock::now();

        SweepRow& row = result.rows[idx];
        row.family = family.id;
        row.N = N;
        row.k = k;
        row.sup = rep.rhs;
        row.f_of_I = rep.lhs;
        row.gap = rep.gap;
        row.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    };

    const int workers = std::min<int>(worker_cap(), static_cast<int>(grid.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) run_row(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < grid.size();
                     i += static_cast<std::size_t>(workers)) {
                    run_row(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return result;
}

std::string to_string(FamilyVerdict v) {
    switch (v) {
        case FamilyVerdict::NormalLike: return "NORMAL-LIKE";
        case FamilyVerdict::SingularLike: return "SINGULAR-LIKE";
        default: return "MIXED";
    }
}

ClassifyResult classify(const SweepResult& sweep, Index k_fixed, const ToleranceProfile& tol) {
    (void)tol;
    std::vector<const SweepRow*> diagonal;
    std::vector<const SweepRow*> column;
    for (const SweepRow& row : sweep.rows) {
        if (row.k == row.N) diagonal.push_back(&row);
        if (row.k == k_fixed) column.push_back(&row);
    }
    const auto by_N = [](const SweepRow* a, const SweepRow* b) { return a->N < b->N; };
    std::sort(diagonal.begin(), diagonal.end(), by_N);
    std::sort(column.begin(), column.end(), by_N);

    if (diagonal.size() < 4 || column.size() < 4) {
        throw InsufficientData("classify: need at least 4 sweep points per trend");
    }

    ClassifyResult out;
    out.k_fixed = k_fixed;
    for (const SweepRow* row : diagonal) {
        out.diag_gap_max = std::max(out.diag_gap_max, std::abs(row->gap));
    }

    // constant least-squares fit over the last half of the fixed-k column
    const std::size_t half = column.size() / 2;
    double acc = 0.0;
    for (std::size_t i = half; i < column.size(); ++i) acc += column[i]->gap;
    out.plateau = acc / static_cast<double>(column.size() - half);

    const double f_of_I = column.back()->f_of_I;
    out.singular_weight = f_of_I > 1e-12 ? out.plateau / f_of_I : 0.0;

    if (out.singular_weight >= kSingularWeightMin) {
        out.verdict = FamilyVerdict::SingularLike;
    } else if (out.diag_gap_max <= kDiagonalGapTol && out.singular_weight <= kNormalWeightMax) {
        out.verdict = FamilyVerdict::NormalLike;
    } else {
        out.verdict = FamilyVerdict::Mixed;
    }
    return out;
}

}  // namespace kvnlab
