// kvn.hpp — Minimal positive extension of a functional given on a left ideal:
// admissibility bound, closed-form supremum values, density reconstruction,
// minimality certificate, and an independent ascent oracle.
//
// In the canonical ideal basis (see ideal.hpp) the quadratic form
// a -> phi(a^* a) is block diagonal: Q = I_n (x) G^T with G = U^* Phi U, and
// the linear form a -> phi(x^* a) has coefficient blocks given by the columns
// of W_x = U^* Phi x^*. All suprema reduce to contractions against the
// pseudo-inverse of G.

#pragma once

#include <cstdint>
#include <optional>

#include "kvnlab/ideal.hpp"
#include "kvnlab/types.hpp"

namespace kvnlab {

namespace detail {

struct GramKernel {
    Matrix U;           // orthonormal range basis of P
    Matrix G;           // U^* Phi U, PSD for admissible functionals
    Matrix G_pinv;
    Matrix range_proj;  // G G^+, orthogonal projection onto range(G)
    Index rank = 0;     // numerical rank of G
};

// Throws NotPositiveOnIdeal when the quadratic form a -> phi(a^* a) is not PSD.
GramKernel factor_gram(const IdealFunctional& phi, const ToleranceProfile& tol = {});

// W_x = U^* Phi x^*; columns are the linear-form coefficients per basis row.
Matrix lin_coefficients(const GramKernel& kernel, const Matrix& rep, const Matrix& x);

// Relative residual of W against range(G); feasibility means this is small.
double range_residual(const GramKernel& kernel, const Matrix& W);

// Closed-form supremum tr(W^* G^+ W) for explicit coefficients W. Throws
// InconsistentData when W has components outside range(G), which genuine
// ideal data cannot produce.
double sup_from_coefficients(const GramKernel& kernel, const Matrix& W,
                             const ToleranceProfile& tol = {});

}  // namespace detail

/// The Gram data of build_gram: Q_jk = phi(b_j^* b_k) and ell_j = phi(b_j)
/// in the canonical ideal basis, so that c^* Q c = phi(a^* a) and
/// ell . c = phi(a) for a with coordinates c.
struct GramForm {
    Matrix Q;
    Vector ell;
};

GramForm build_gram(const IdealFunctional& phi, const ToleranceProfile& tol = {});

// Smallest C with |phi(a)|^2 <= C phi(a^* a); nullopt when no finite constant
// exists (equivalently, no positive extension exists).
std::optional<double> best_bound(const IdealFunctional& phi, const ToleranceProfile& tol = {});

// phi_bullet(x^* x) = sup { |phi(x^* a)|^2 : a in ideal, phi(a^* a) <= 1 }.
double kvn_value(const IdealFunctional& phi, const Matrix& x, const ToleranceProfile& tol = {});

struct KvnResult {
    Matrix density;       // generator of the minimal positive extension
    double best_C = 0.0;  // minimal admissibility constant
    Index gram_rank = 0;
    Index gram_kernel_dim = 0;
};

// Reconstructs the extension generator from values on positive elements
// (Hermitian split + spectral parts), then verifies PSD-ness and agreement
// with phi on the ideal basis.
KvnResult kvn_extension(const IdealFunctional& phi, const ToleranceProfile& tol = {});

struct MinimalityReport {
    int trials = 0;
    int kept = 0;        // perturbations that preserved PSD-ness of the density
    int passed = 0;      // kept perturbations that are themselves PSD
    int violations = 0;  // kept - passed
    double worst_violation = 0.0;  // largest negative eigenvalue magnitude among kept
};

// Samples Hermitian perturbations supported in the complement corner of the
// ideal projection; minimality predicts every PSD-preserving perturbation is
// itself PSD.
MinimalityReport minimality_certificate(const KvnResult& result, const LeftIdeal& ideal,
                                        int trials, std::uint64_t seed,
                                        double violation_tol = 1e-8,
                                        const ToleranceProfile& tol = {});

// Independent check of kvn_value: multi-start projected ascent of
// |phi(x^* a)|^2 over the ellipsoid phi(a^* a) <= 1 in ideal coordinates.
// On infeasible instances the returned value grows without bound in iters.
double sup_oracle(const IdealFunctional& phi, const Matrix& x, int iters,
                  std::uint64_t seed, const ToleranceProfile& tol = {});

}  // namespace kvnlab
