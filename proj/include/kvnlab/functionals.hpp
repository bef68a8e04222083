// functionals.hpp — Linear functionals on the full matrix algebra: trace-form
// representation, positivity and ordering, and Riesz recovery of a generator
// from black-box evaluations.

#pragma once

#include <functional>

#include "kvnlab/kernel.hpp"
#include "kvnlab/types.hpp"

namespace kvnlab {

/// f(X) = tr(X F), carried by its generator F.
struct TraceFormFunctional {
    Matrix generator;

    TraceFormFunctional() = default;
    explicit TraceFormFunctional(Matrix F) : generator(std::move(F)) {
        ensure_operator(generator, "TraceFormFunctional");
    }

    Index dim() const { return generator.rows(); }
};

/// A functional known only through an evaluation callback. Callbacks must be
/// linear (checked by riesz_recover) and reentrant.
struct BlackBoxFunctional {
    Index dim = 0;
    std::function<Complex(const Matrix&)> eval;
};

// Evaluates tr(X F), cross-checking the cyclic order tr(F X) against eq_tol.
Complex eval_trace_form(const TraceFormFunctional& f, const Matrix& X,
                        const ToleranceProfile& tol = {});

// Positive functional test: decided spectrally on the generator.
bool is_positive(const TraceFormFunctional& f, const ToleranceProfile& tol = {});

// f <= g in the functional order, i.e. generator(g) - generator(f) is PSD.
bool order_leq(const TraceFormFunctional& f, const TraceFormFunctional& g,
               const ToleranceProfile& tol = {});

// Recovers the trace-form generator from black-box evaluations on the matrix
// units. Probes linearity first and verifies the recovered form round-trips;
// throws NonLinearFunctional when either check fails.
TraceFormFunctional riesz_recover(const BlackBoxFunctional& f,
                                  const ToleranceProfile& tol = {});

}  // namespace kvnlab
