// kernel.hpp — Dense operator primitives: HS inner product, trace norm,
// tolerance-aware Hermitian/PSD queries, PSD square root and pseudo-inverse.
//
// Free functions accept arbitrary Eigen expressions and work for real or
// complex scalars. Matrices are interpreted as operators on C^n in the
// standard coordinate basis.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kvnlab/types.hpp"

namespace kvnlab {

// ------------------------------ basic helpers -------------------------------

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

// E_ij, the matrix unit with a single 1 at (i, j); zero-based indices.
inline Matrix matrix_unit(Index n, Index i, Index j) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
        throw ValidationError("matrix_unit: index out of range");
    }
    Matrix M = Matrix::Zero(n, n);
    M(i, j) = 1.0;
    return M;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& X) {
    if (X.size() == 0) return 0.0;
    return X.cwiseAbs().maxCoeff();
}

// Validates the operator-matrix contract: square with finite entries.
template <typename Derived>
void ensure_operator(const Eigen::MatrixBase<Derived>& X, const char* where) {
    if (X.rows() != X.cols()) {
        std::ostringstream os;
        os << where << ": matrix must be square, got " << X.rows() << "x" << X.cols();
        throw ValidationError(os.str());
    }
    if (!X.allFinite()) {
        throw ValidationError(std::string(where) + ": matrix has non-finite entries");
    }
}

// ----------------------------- inner products --------------------------------

// Hilbert-Schmidt inner product tr(Y^* X); linear in X, conjugate-linear in Y.
template <typename DerivedX, typename DerivedY>
Complex hs_inner(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw DimensionMismatch("hs_inner: operand dimensions differ");
    }
    return Y.conjugate().cwiseProduct(X).sum();
}

template <typename DerivedX>
double hs_norm(const Eigen::MatrixBase<DerivedX>& X) {
    return X.norm();  // Frobenius
}

// ------------------------------- norms ---------------------------------------

template <typename Derived>
RealVector singular_values(const Eigen::MatrixBase<Derived>& X) {
    using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::BDCSVD<Plain> svd(X.derived());
    return svd.singularValues();
}

// Trace norm (nuclear norm): sum of singular values.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& X) {
    if (X.size() == 0) return 0.0;
    return singular_values(X).sum();
}

// Operator norm: largest singular value.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& X) {
    if (X.size() == 0) return 0.0;
    return singular_values(X).maxCoeff();
}

// -------------------------- Hermitian / PSD queries ---------------------------

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& X, double tol) {
    if (X.rows() != X.cols()) return false;
    const double dev = max_abs(X.derived() - X.derived().adjoint());
    return dev <= tol * (1.0 + max_abs(X));
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& X, const ToleranceProfile& tol = {}) {
    return is_hermitian(X, tol.psd_tol);
}

// Hermitian within tolerance and spectrum bounded below by -psd_tol * scale,
// where scale = max(1, lambda_max). Non-Hermitian input returns false.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& X, const ToleranceProfile& tol = {}) {
    using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (!is_hermitian(X, tol.psd_tol)) return false;
    if (X.rows() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Plain> es(X.derived(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    return lo >= -tol.psd_tol * std::max(1.0, hi);
}

// --------------------------- spectral constructions --------------------------

// PSD square root via Hermitian eigendecomposition; negative eigenvalues
// within tolerance are clamped to zero.
template <typename Derived>
typename Derived::PlainObject psd_sqrt(const Eigen::MatrixBase<Derived>& X,
                                       const ToleranceProfile& tol = {}) {
    using Plain = typename Derived::PlainObject;
    if (!is_psd(X, tol)) {
        throw NotPsd("psd_sqrt: input is not positive semidefinite");
    }
    Eigen::SelfAdjointEigenSolver<Plain> es(X.derived());
    RealVector d = es.eigenvalues();
    for (Index i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename MatrixT>
struct PsdPinv {
    MatrixT pinv;
    Index rank = 0;
};

// Moore-Penrose pseudo-inverse of a PSD matrix. Eigenvalues at or below
// rtol * lambda_max count as zero; the numerical rank is what survives.
// Ascending eigenvalue order of the solver keeps results reproducible.
template <typename Derived>
PsdPinv<typename Derived::PlainObject> pinv_psd(const Eigen::MatrixBase<Derived>& Q,
                                                double rtol,
                                                const ToleranceProfile& tol = {}) {
    using Plain = typename Derived::PlainObject;
    if (!is_psd(Q, tol)) {
        throw NotPsd("pinv_psd: input is not positive semidefinite");
    }
    PsdPinv<Plain> out;
    if (Q.rows() == 0) {
        out.pinv = Plain(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Plain> es(Q.derived());
    const RealVector& d = es.eigenvalues();
    const double cutoff = rtol * std::max(d.maxCoeff(), 0.0);
    RealVector dinv = RealVector::Zero(d.size());
    for (Index i = 0; i < d.size(); ++i) {
        if (d(i) > cutoff && d(i) > 0.0) {
            dinv(i) = 1.0 / d(i);
            ++out.rank;
        }
    }
    out.pinv = es.eigenvectors() * dinv.asDiagonal() * es.eigenvectors().adjoint();
    return out;
}

template <typename Derived>
PsdPinv<typename Derived::PlainObject> pinv_psd(const Eigen::MatrixBase<Derived>& Q,
                                                const ToleranceProfile& tol = {}) {
    return pinv_psd(Q, tol.rank_rtol, tol);
}

}  // namespace kvnlab
