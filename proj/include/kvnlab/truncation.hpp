// truncation.hpp — Families of positive functionals indexed by truncation
// dimension N, used to study normal-vs-singular behavior through finite
// snapshots: trace-class diagonal rules, the Cesaro state I/N, and convex
// mixtures of the two.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kvnlab/functionals.hpp"
#include "kvnlab/types.hpp"

namespace kvnlab {

struct TruncationFamily {
    enum class Kind { TraceClassDiag, Cesaro, Mixture };

    Kind kind = Kind::Cesaro;
    // diagonal rule d(i) for the trace-class part, 1-based index
    std::function<double(Index)> diag;
    double lambda = 0.5;  // mixture weight on the trace-class part
    std::string id = "cesaro";

    static TruncationFamily trace_class_pow(double base);
    static TruncationFamily trace_class_list(std::vector<double> values);
    static TruncationFamily cesaro();
    static TruncationFamily mixture(double lambda, TruncationFamily trace_class_part);
};

// f_N of the family: diag(d(1)..d(N)), I/N, or the convex combination.
TraceFormFunctional family_generator(const TruncationFamily& family, Index N);

struct PartialSumRow {
    Index N = 0;
    std::vector<double> partial_sums;  // sum_{i<=m} <S_N e_i, e_i>, m = 1..N
    double bound = 0.0;                // f_N(I)
    bool bounded = false;
};

struct PartialSumReport {
    std::vector<PartialSumRow> rows;
    bool all_bounded = false;
};

// Recovers the generator at each truncation through the black-box path and
// checks the diagonal partial sums against the bound f_N(I).
PartialSumReport partial_sum_trace_test(const TruncationFamily& family,
                                        const std::vector<Index>& N_list,
                                        const ToleranceProfile& tol = {});

}  // namespace kvnlab
