// ideal.hpp — Left ideals M·P of the full matrix algebra and linear
// functionals defined on them.
//
// Every left ideal of M_n is M·P for an orthogonal projection P. We carry P
// through an orthonormal basis U of its range (n x r, U^* U = I). The ideal
// then has the canonical basis
//
//     b_(i,t) = e_i u_t^*,   i = 0..n-1, t = 0..r-1,   flat index j = i*r + t,
//
// and members factor as a = C U^* with coordinate matrix C = a U.

#pragma once

#include "kvnlab/functionals.hpp"
#include "kvnlab/kernel.hpp"
#include "kvnlab/types.hpp"

namespace kvnlab {

class LeftIdeal {
public:
    // Ideal of matrices supported on the first `rank` columns.
    static LeftIdeal corner(Index dim, Index rank);

    // Orthonormalizes arbitrary spanning columns of the intended range of P.
    static LeftIdeal from_range_basis(Index dim, const Matrix& spanning,
                                      const ToleranceProfile& tol = {});

    Index dim() const { return dim_; }
    Index rank() const { return range_basis_.cols(); }
    Index basis_size() const { return dim_ * rank(); }

    const Matrix& range_basis() const { return range_basis_; }
    Matrix projection() const { return range_basis_ * range_basis_.adjoint(); }

    Matrix basis_element(Index j) const;

    // a = sum_j c_j b_j for coordinate vector c of length basis_size().
    Matrix element_from_coords(const Vector& c) const;
    Vector coords_of(const Matrix& a) const;

    // Frobenius distance from a to its projection onto the ideal.
    double membership_residual(const Matrix& a) const;

private:
    LeftIdeal(Index dim, Matrix range_basis)
        : dim_(dim), range_basis_(std::move(range_basis)) {}

    Index dim_ = 0;
    Matrix range_basis_;  // U, orthonormal columns
};

/// phi(a) = tr(a Phi) for a in the ideal; Phi matters only through U^* Phi.
struct IdealFunctional {
    LeftIdeal ideal;
    Matrix rep;

    IdealFunctional(LeftIdeal ideal_, Matrix rep_);

    Index dim() const { return ideal.dim(); }
    Complex evaluate(const Matrix& a) const;
};

// The restriction of a trace-form functional to an ideal (same generator).
IdealFunctional restrict_to_ideal(const TraceFormFunctional& f, LeftIdeal ideal);

}  // namespace kvnlab
