#include "kvnlab/functionals.hpp"

#include <cmath>
#include <sstream>

#include "kvnlab/random.hpp"

namespace kvnlab {

Complex eval_trace_form(const TraceFormFunctional& f, const Matrix& X,
                        const ToleranceProfile& tol) {
    if (X.rows() != X.cols()) {
        throw DimensionMismatch("eval_trace_form: argument must be square");
    }
    if (X.rows() != f.dim()) {
        std::ostringstream os;
        os << "eval_trace_form: argument dim " << X.rows() << " vs functional dim " << f.dim();
        throw DimensionMismatch(os.str());
    }
    // tr(XF) = sum_{k,m} X(k,m) F(m,k); the reversed order is the same sum
    // grouped differently and must agree within eq_tol.
    const Complex xf = X.cwiseProduct(f.generator.transpose()).sum();
    const Complex fx = f.generator.cwiseProduct(X.transpose()).sum();
    if (std::abs(xf - fx) > tol.eq_tol * (1.0 + std::abs(xf))) {
        throw InconsistentData("eval_trace_form: tr(XF) and tr(FX) disagree");
    }
    return xf;
}

bool is_positive(const TraceFormFunctional& f, const ToleranceProfile& tol) {
    return is_psd(f.generator, tol);
}

bool order_leq(const TraceFormFunctional& f, const TraceFormFunctional& g,
               const ToleranceProfile& tol) {
    if (f.dim() != g.dim()) {
        throw DimensionMismatch("order_leq: functionals live on different algebras");
    }
    return is_psd(g.generator - f.generator, tol);
}

namespace {

// |f(aA + B) - a f(A) - f(B)| on seeded Gaussian probes.
void probe_linearity(const BlackBoxFunctional& f, const ToleranceProfile& tol) {
    GaussianSource rng(0x5eed11ab1ULL);
    for (int trial = 0; trial < 6; ++trial) {
        const Matrix A = rng.gaussian(f.dim, f.dim);
        const Matrix B = rng.gaussian(f.dim, f.dim);
        const Complex alpha = rng.cnormal();
        const Complex lhs = f.eval(alpha * A + B);
        const Complex rhs = alpha * f.eval(A) + f.eval(B);
        const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
        if (std::abs(lhs - rhs) > tol.eq_tol * scale) {
            throw NonLinearFunctional("riesz_recover: linearity probe failed");
        }
    }
}

}  // namespace

TraceFormFunctional riesz_recover(const BlackBoxFunctional& f, const ToleranceProfile& tol) {
    if (f.dim <= 0) throw ValidationError("riesz_recover: dim must be positive");
    if (!f.eval) throw ValidationError("riesz_recover: missing evaluation callback");
    probe_linearity(f, tol);

    // HS representer: f(A) = <A, S>_2 = tr(S^* A), so S_ij = conj(f(E_ij)).
    Matrix S(f.dim, f.dim);
    Matrix unit = Matrix::Zero(f.dim, f.dim);
    for (Index i = 0; i < f.dim; ++i) {
        for (Index j = 0; j < f.dim; ++j) {
            unit(i, j) = 1.0;
            S(i, j) = std::conj(f.eval(unit));
            unit(i, j) = 0.0;
        }
    }

    GaussianSource rng(0x0f2e57a11ULL);
    for (int trial = 0; trial < 4; ++trial) {
        const Matrix A = rng.gaussian(f.dim, f.dim);
        const Complex direct = f.eval(A);
        const Complex via_form = hs_inner(A, S);
        if (std::abs(direct - via_form) > tol.eq_tol * (1.0 + std::abs(direct))) {
            throw NonLinearFunctional("riesz_recover: recovered form does not round-trip");
        }
    }

    // tr(S^* A) = tr(A S^*): the trace-form generator is S^*.
    return TraceFormFunctional(S.adjoint());
}

}  // namespace kvnlab
