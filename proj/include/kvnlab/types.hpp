// types.hpp — Scalar/matrix aliases, tolerance profile, and the error hierarchy.

#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>

namespace kvnlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Shared tolerance knobs. psd_tol gates Hermitian/PSD acceptance, rank_rtol
/// is the relative eigenvalue cutoff for numerical rank and pseudo-inverses,
/// eq_tol is the slack for scalar comparisons.
struct ToleranceProfile {
    double psd_tol = 1e-10;
    double rank_rtol = 1e-10;
    double eq_tol = 1e-8;
};

// ------------------------------- errors -------------------------------------

struct KvnError : std::runtime_error {
    KvnError(std::string code_, const std::string& what_)
        : std::runtime_error(what_), code(std::move(code_)) {}
    std::string code;  // stable machine-readable identifier
};

struct DimensionMismatch : KvnError {
    explicit DimensionMismatch(const std::string& what_)
        : KvnError("dimension_mismatch", what_) {}
};

struct ValidationError : KvnError {
    explicit ValidationError(const std::string& what_)
        : KvnError("validation_error", what_) {}
};

struct NotPsd : KvnError {
    explicit NotPsd(const std::string& what_) : KvnError("not_psd", what_) {}
};

struct NonLinearFunctional : KvnError {
    explicit NonLinearFunctional(const std::string& what_)
        : KvnError("nonlinear_functional", what_) {}
};

struct NotPositiveOnIdeal : KvnError {
    explicit NotPositiveOnIdeal(const std::string& what_)
        : KvnError("not_positive_on_ideal", what_) {}
};

struct InfeasibleFunctional : KvnError {
    explicit InfeasibleFunctional(const std::string& what_)
        : KvnError("bound_infeasible", what_) {}
};

struct InconsistentData : KvnError {
    explicit InconsistentData(const std::string& what_)
        : KvnError("inconsistent_data", what_) {}
};

struct ExtensionMismatch : KvnError {
    explicit ExtensionMismatch(const std::string& what_)
        : KvnError("extension_mismatch", what_) {}
};

struct InsufficientData : KvnError {
    explicit InsufficientData(const std::string& what_)
        : KvnError("insufficient_data", what_) {}
};

}  // namespace kvnlab
