// normality.hpp — Executable forms of the normality criteria for a positive
// functional, evaluated against corner ideals of rank k inside the N x N
// truncation. Finite k can certify failure directions but never disprove
// normality, hence the PASS / FAIL / INCONCLUSIVE verdict split.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kvnlab/functionals.hpp"
#include "kvnlab/ideal.hpp"
#include "kvnlab/kvn.hpp"
#include "kvnlab/types.hpp"

namespace kvnlab {

/// Operators supported on the first k coordinates of the N-dim truncation.
struct CornerIdeal {
    Index ambient_dim = 0;
    Index corner_rank = 0;

    CornerIdeal(Index N, Index k);
    LeftIdeal as_left_ideal() const { return LeftIdeal::corner(ambient_dim, corner_rank); }
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct CriterionReport {
    std::string criterion;  // "ii", "iii", "iv", "v"
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;  // lhs - rhs
    Verdict verdict = Verdict::Inconclusive;
    Index N = 0;
    Index k = 0;
    int probes = 0;
    std::string note;
};

// (v): f(I) against sup { |f(A)|^2 : A in corner k, f(A^* A) <= 1 }.
CriterionReport criterion_v(const TraceFormFunctional& f, Index k,
                            const ToleranceProfile& tol = {});

// (iv): f(X^* X) against sup { |f(X^* A)|^2 : ... }; reduces to (v) at X = I.
CriterionReport criterion_iv(const TraceFormFunctional& f, const Matrix& X, Index k,
                             const ToleranceProfile& tol = {});

// (iii): dominance of f by positive functionals agreeing with f on the corner,
// probed through the canonical minimal witness plus sampled PSD additions.
CriterionReport criterion_iii(const TraceFormFunctional& f, Index k, int trials,
                              std::uint64_t seed, const ToleranceProfile& tol = {});

// (ii): existence of a dominating normal functional, decided as order_leq.
CriterionReport criterion_ii(const TraceFormFunctional& f, const TraceFormFunctional& g,
                             const ToleranceProfile& tol = {});

struct SmallestExtensionReport {
    Index N = 0;
    Index k = 0;
    double deviation = 0.0;        // max-abs distance between the minimal
                                   // extension's generator and f's generator
    double kvn_at_identity = 0.0;  // value of the minimal extension at I
    double trace_f = 0.0;          // f(I)
    // lower bounds tr(P_m S)^2 / tr(S) from the projection probe family,
    // m = 1..k; they climb toward f(I) as the projections fill out
    std::vector<double> probe_lower_bounds;
};

SmallestExtensionReport smallest_extension_identity(const TraceFormFunctional& f, Index k,
                                                    const ToleranceProfile& tol = {});

}  // namespace kvnlab
