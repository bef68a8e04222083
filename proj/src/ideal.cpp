#include "kvnlab/ideal.hpp"

#include <sstream>

namespace kvnlab {

LeftIdeal LeftIdeal::corner(Index dim, Index rank) {
    if (dim <= 0) throw ValidationError("LeftIdeal::corner: dim must be positive");
    if (rank < 0 || rank > dim) {
        std::ostringstream os;
        os << "LeftIdeal::corner: rank " << rank << " out of range for dim " << dim;
        throw ValidationError(os.str());
    }
    Matrix U = Matrix::Zero(dim, rank);
    for (Index t = 0; t < rank; ++t) U(t, t) = 1.0;
    return LeftIdeal(dim, std::move(U));
}

LeftIdeal LeftIdeal::from_range_basis(Index dim, const Matrix& spanning,
                                      const ToleranceProfile& tol) {
    if (dim <= 0) throw ValidationError("LeftIdeal::from_range_basis: dim must be positive");
    if (spanning.rows() != dim) {
        throw DimensionMismatch("LeftIdeal::from_range_basis: vectors have wrong length");
    }
    if (!spanning.allFinite()) {
        throw ValidationError("LeftIdeal::from_range_basis: non-finite entries");
    }
    if (spanning.cols() == 0) return LeftIdeal(dim, Matrix(dim, 0));

    Eigen::ColPivHouseholderQR<Matrix> qr(spanning);
    qr.setThreshold(std::max(tol.rank_rtol, 1e-14));
    const Index r = qr.rank();
    Matrix full = qr.householderQ() * Matrix::Identity(dim, r);
    return LeftIdeal(dim, std::move(full));
}

Matrix LeftIdeal::basis_element(Index j) const {
    if (j < 0 || j >= basis_size()) throw ValidationError("LeftIdeal: basis index out of range");
    const Index i = j / rank();
    const Index t = j % rank();
    Matrix b = Matrix::Zero(dim_, dim_);
    b.row(i) = range_basis_.col(t).adjoint();
    return b;
}

Matrix LeftIdeal::element_from_coords(const Vector& c) const {
    if (c.size() != basis_size()) {
        throw DimensionMismatch("LeftIdeal::element_from_coords: coordinate length mismatch");
    }
    const Index r = rank();
    Matrix C(dim_, r);
    for (Index i = 0; i < dim_; ++i)
        for (Index t = 0; t < r; ++t) C(i, t) = c(i * r + t);
    return C * range_basis_.adjoint();
}

Vector LeftIdeal::coords_of(const Matrix& a) const {
    if (a.rows() != dim_ || a.cols() != dim_) {
        throw DimensionMismatch("LeftIdeal::coords_of: element has wrong dimension");
    }
    const Index r = rank();
    const Matrix C = a * range_basis_;
    Vector c(basis_size());
    for (Index i = 0; i < dim_; ++i)
        for (Index t = 0; t < r; ++t) c(i * r + t) = C(i, t);
    return c;
}

double LeftIdeal::membership_residual(const Matrix& a) const {
    const Matrix back = (a * range_basis_) * range_basis_.adjoint();
    return (a - back).norm();
}

IdealFunctional::IdealFunctional(LeftIdeal ideal_, Matrix rep_)
    : ideal(std::move(ideal_)), rep(std::move(rep_)) {
    ensure_operator(rep, "IdealFunctional");
    if (rep.rows() != ideal.dim()) {
        throw DimensionMismatch("IdealFunctional: rep dimension differs from ideal dimension");
    }
}

Complex IdealFunctional::evaluate(const Matrix& a) const {
    if (a.rows() != dim() || a.cols() != dim()) {
        throw DimensionMismatch("IdealFunctional::evaluate: element has wrong dimension");
    }
    return a.cwiseProduct(rep.transpose()).sum();  // tr(a Phi)
}

IdealFunctional restrict_to_ideal(const TraceFormFunctional& f, LeftIdeal ideal) {
    if (f.dim() != ideal.dim()) {
        throw DimensionMismatch("restrict_to_ideal: dimensions differ");
    }
    return IdealFunctional(std::move(ideal), f.generator);
}

}  // namespace kvnlab
