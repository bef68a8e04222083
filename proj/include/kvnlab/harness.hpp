// harness.hpp — Truncation sweeps: criterion-(v) gaps across (N, k) grids and
// trend classification of a family as normal-like, singular-like, or mixed.

#pragma once

#include <string>
#include <vector>

#include "kvnlab/truncation.hpp"
#include "kvnlab/types.hpp"

namespace kvnlab {

struct SweepRow {
    std::string family;
    Index N = 0;
    Index k = 0;
    double sup = 0.0;     // criterion-(v) supremum S_{N,k}
    double f_of_I = 0.0;  // f_N(I)
    double gap = 0.0;     // f_of_I - sup
    double ms = 0.0;      // wall time of the row
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by (N, k)
};

// Runs criterion (v) for every pair in N_list x k_list with k <= N. Rows are
// independent; the worker count honors KVNLAB_THREADS and the aggregation
// order is fixed, so results do not depend on scheduling. Truncations above
// N_cap are rejected; raise the cap explicitly for larger studies.
SweepResult sweep(const TruncationFamily& family, const std::vector<Index>& N_list,
                  const std::vector<Index>& k_list, const ToleranceProfile& tol = {},
                  Index N_cap = 256);

enum class FamilyVerdict { NormalLike, SingularLike, Mixed };

std::string to_string(FamilyVerdict v);

struct ClassifyResult {
    FamilyVerdict verdict = FamilyVerdict::Mixed;
    double singular_weight = 0.0;  // fitted gap plateau as a fraction of f(I)
    double plateau = 0.0;          // fixed-k gap plateau (mean of the last half)
    double diag_gap_max = 0.0;     // largest |gap| along the k = N diagonal
    Index k_fixed = 0;
};

// Reads the limiting trend of a sweep: the k = N diagonal must vanish for any
// coherent family, and the fixed-k gap plateau carries the singular mass.
// Requires at least four points along each trend.
ClassifyResult classify(const SweepResult& sweep, Index k_fixed,
                        const ToleranceProfile& tol = {});

}  // namespace kvnlab
