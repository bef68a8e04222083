#include "kvnlab/kvn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kvnlab/random.hpp"

namespace kvnlab {

namespace detail {

// Range-membership threshold tied to the rank cutoff so feasibility tests
// stay consistent with G^+.
static double range_tolerance(const ToleranceProfile& tol) {
    return std::sqrt(std::max(tol.rank_rtol, 1e-16));
}

GramKernel factor_gram(const IdealFunctional& phi, const ToleranceProfile& tol) {
    GramKernel kernel;
    kernel.U = phi.ideal.range_basis();
    kernel.G = kernel.U.adjoint() * phi.rep * kernel.U;
    if (!is_psd(kernel.G, tol)) {
        throw NotPositiveOnIdeal("build_gram: phi(a^* a) is not positive semidefinite on the ideal");
    }
    auto pinv = pinv_psd(kernel.G, tol.rank_rtol, tol);
    kernel.G_pinv = std::move(pinv.pinv);
    kernel.rank = pinv.rank;
    kernel.range_proj = kernel.G * kernel.G_pinv;
    return kernel;
}

Matrix lin_coefficients(const GramKernel& kernel, const Matrix& rep, const Matrix& x) {
    return kernel.U.adjoint() * rep * x.adjoint();
}

double range_residual(const GramKernel& kernel, const Matrix& W) {
    const double scale = W.norm();
    if (scale == 0.0) return 0.0;
    return (W - kernel.range_proj * W).norm() / scale;
}

double sup_from_coefficients(const GramKernel& kernel, const Matrix& W,
                             const ToleranceProfile& tol) {
    if (range_residual(kernel, W) > range_tolerance(tol)) {
        throw InconsistentData(
            "kvn_value: linear form has components outside the range of the Gram form");
    }
    // tr(W^* G^+ W) contracted through the r x r side
    return (kernel.G_pinv * (W * W.adjoint())).trace().real();
}

}  // namespace detail

GramForm build_gram(const IdealFunctional& phi, const ToleranceProfile& tol) {
    const auto kernel = detail::factor_gram(phi, tol);
    const Index n = phi.dim();
    const Index r = phi.ideal.rank();

    GramForm out;
    out.Q = Matrix::Zero(n * r, n * r);
    const Matrix Gt = kernel.G.transpose();
    for (Index i = 0; i < n; ++i) out.Q.block(i * r, i * r, r, r) = Gt;

    const Matrix W = kernel.U.adjoint() * phi.rep;  // ell_(i,t) = W(t, i)
    out.ell = Vector(n * r);
    for (Index i = 0; i < n; ++i)
        for (Index t = 0; t < r; ++t) out.ell(i * r + t) = W(t, i);
    return out;
}

std::optional<double> best_bound(const IdealFunctional& phi, const ToleranceProfile& tol) {
    const auto kernel = detail::factor_gram(phi, tol);
    const Matrix W = kernel.U.adjoint() * phi.rep;
    if (detail::range_residual(kernel, W) > detail::range_tolerance(tol)) {
        return std::nullopt;
    }
    return detail::sup_from_coefficients(kernel, W, tol);
}

namespace {

void require_feasible(const detail::GramKernel& kernel, const IdealFunctional& phi,
                      const ToleranceProfile& tol) {
    const Matrix W = kernel.U.adjoint() * phi.rep;
    if (detail::range_residual(kernel, W) > detail::range_tolerance(tol)) {
        throw InfeasibleFunctional(
            "no finite admissibility constant: phi has no positive extension");
    }
}

}  // namespace

double kvn_value(const IdealFunctional& phi, const Matrix& x, const ToleranceProfile& tol) {
    ensure_operator(x, "kvn_value");
    if (x.rows() != phi.dim()) {
        throw DimensionMismatch("kvn_value: operand dimension differs from the algebra");
    }
    const auto kernel = detail::factor_gram(phi, tol);
    require_feasible(kernel, phi, tol);
    const Matrix Wx = detail::lin_coefficients(kernel, phi.rep, x);
    return detail::sup_from_coefficients(kernel, Wx, tol);
}

KvnResult kvn_extension(const IdealFunctional& phi, const ToleranceProfile& tol) {
    const auto kernel = detail::factor_gram(phi, tol);
    require_feasible(kernel, phi, tol);

    const Index n = phi.dim();
    const Index r = phi.ideal.rank();

    // phi_bullet on a Hermitian H: split spectrally, H = y+^2 - y-^2, and
    // evaluate the supremum formula at x = y+- (each an exact x^* x datum).
    const auto value_on_hermitian = [&](const Matrix& H) -> double {
        Eigen::SelfAdjointEigenSolver<Matrix> es(H);
        const RealVector& lam = es.eigenvalues();
        RealVector sq_pos = RealVector::Zero(lam.size());
        RealVector sq_neg = RealVector::Zero(lam.size());
        for (Index m = 0; m < lam.size(); ++m) {
            if (lam(m) > 0.0) sq_pos(m) = std::sqrt(lam(m));
            if (lam(m) < 0.0) sq_neg(m) = std::sqrt(-lam(m));
        }
        const Matrix& V = es.eigenvectors();
        const Matrix y_pos = V * sq_pos.asDiagonal() * V.adjoint();
        const Matrix y_neg = V * sq_neg.asDiagonal() * V.adjoint();
        const double plus = detail::sup_from_coefficients(
            kernel, detail::lin_coefficients(kernel, phi.rep, y_pos), tol);
        const double minus = detail::sup_from_coefficients(
            kernel, detail::lin_coefficients(kernel, phi.rep, y_neg), tol);
        return plus - minus;
    };

    // tr(E_ij F) = F(j, i); complex entries via the Hermitian split of E_ij.
    Matrix density(n, n);
    for (Index i = 0; i < n; ++i) {
        Matrix H = Matrix::Zero(n, n);
        H(i, i) = 1.0;
        density(i, i) = value_on_hermitian(H);
        for (Index j = i + 1; j < n; ++j) {
            Matrix H1 = Matrix::Zero(n, n);
            H1(i, j) = 0.5;
            H1(j, i) = 0.5;
            Matrix H2 = Matrix::Zero(n, n);
            H2(i, j) = Complex(0.0, -0.5);
            H2(j, i) = Complex(0.0, 0.5);
            const double re = value_on_hermitian(H1);
            const double im = value_on_hermitian(H2);
            density(j, i) = Complex(re, im);
            density(i, j) = Complex(re, -im);
        }
    }

    if (!is_psd(density, tol)) {
        throw ExtensionMismatch("kvn_extension: reconstructed density is not PSD");
    }
    const Matrix W = kernel.U.adjoint() * phi.rep;
    const Matrix W_density = kernel.U.adjoint() * density;
    const double agree = max_abs(W_density - W);
    if (agree > tol.eq_tol * (1.0 + max_abs(W))) {
        throw ExtensionMismatch("kvn_extension: density disagrees with phi on the ideal basis");
    }

    KvnResult out;
    out.density = std::move(density);
    out.best_C = detail::sup_from_coefficients(kernel, W, tol);
    out.gram_rank = n * kernel.rank;
    out.gram_kernel_dim = n * r - out.gram_rank;
    return out;
}

MinimalityReport minimality_certificate(const KvnResult& result, const LeftIdeal& ideal,
                                        int trials, std::uint64_t seed,
                                        double violation_tol, const ToleranceProfile& tol) {
    const Index n = ideal.dim();
    const Index r = ideal.rank();
    const Index m = n - r;

    // Orthonormal basis of the complement of range(P); perturbations there are
    // exactly the generator changes invisible to the ideal.
    Matrix comp;
    if (r == 0) {
        comp = Matrix::Identity(n, n);
    } else if (m > 0) {
        Eigen::HouseholderQR<Matrix> qr(ideal.range_basis());
        const Matrix qfull = qr.householderQ() * Matrix::Identity(n, n);
        comp = qfull.rightCols(m);
    } else {
        comp = Matrix(n, 0);
    }

    const double scale = std::max(1.0, max_abs(result.density));

    MinimalityReport report;
    report.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        GaussianSource rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
        Matrix corner;
        if (m == 0) {
            corner = Matrix(0, 0);
        } else {
            switch (trial % 3) {
                case 0: {  // PSD: always kept, must always pass
                    const Matrix B = rng.gaussian(m, m);
                    corner = (B.adjoint() * B) * (scale * (0.25 + rng.uniform()) /
                                                  static_cast<double>(m));
                    break;
                }
                case 1: {  // indefinite Hermitian
                    corner = rng.hermitian(m) * scale;
                    break;
                }
                default: {  // PSD shifted slightly below zero
                    const Matrix B = rng.gaussian(m, m);
                    corner = (B.adjoint() * B) / static_cast<double>(m);
                    corner -= (0.05 + 0.2 * rng.uniform()) * scale *
                              Matrix::Identity(m, m);
                    break;
                }
            }
        }
        const Matrix delta = comp * corner * comp.adjoint();
        if (!is_psd(result.density + delta, tol)) continue;
        ++report.kept;

        double lam_min = 0.0;
        if (m > 0) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(corner, Eigen::EigenvaluesOnly);
            lam_min = es.eigenvalues().minCoeff();
        }
        if (lam_min >= -violation_tol) {
            ++report.passed;
        } else {
            report.worst_violation = std::max(report.worst_violation, -lam_min);
        }
    }
    report.violations = report.kept - report.passed;
    return report;
}

// ---------------------------------- oracle ----------------------------------

namespace {

struct AscentProblem {
    RealVector lam;  // positive eigenvalues of the Gram form, per coordinate
    Vector u;        // objective vector: |u^* c|^2 is the quantity maximized
};

// Exact maximization of |a + eta s|^2 / (d0 + d1 eta + d2 eta^2) over real eta.
double line_search(Complex a, Complex s, double d0, double d1, double d2, double& best_eta) {
    const double n0 = std::norm(a);
    const double n1 = 2.0 * (std::conj(a) * s).real();
    const double n2 = std::norm(s);

    std::vector<double> candidates{0.0};
    const double A2 = n2 * d1 - n1 * d2;
    const double A1 = 2.0 * (n2 * d0 - n0 * d2);
    const double A0 = n1 * d0 - n0 * d1;
    if (std::abs(A2) > 1e-300) {
        const double disc = A1 * A1 - 4.0 * A2 * A0;
        if (disc >= 0.0) {
            const double root = std::sqrt(disc);
            candidates.push_back((-A1 + root) / (2.0 * A2));
            candidates.push_back((-A1 - root) / (2.0 * A2));
        }
    } else if (std::abs(A1) > 1e-300) {
        candidates.push_back(-A0 / A1);
    }

    double best = -1.0;
    best_eta = 0.0;
    for (const double eta : candidates) {
        if (!std::isfinite(eta)) continue;
        const double den = d0 + eta * (d1 + eta * d2);
        if (den <= 1e-300) continue;
        const double num = n0 + eta * (n1 + eta * n2);
        const double val = num / den;
        if (val > best) {
            best = val;
            best_eta = eta;
        }
    }
    return best;
}

double ascend(const AscentProblem& prob, int iters, std::uint64_t seed) {
    const Index p = prob.lam.size();
    if (p == 0 || prob.u.norm() == 0.0) return 0.0;

    constexpr int kStarts = 16;
    double best = 0.0;
    for (int start = 0; start < kStarts; ++start) {
        GaussianSource rng(mix_seed(seed, 0x0c0ffee0ULL + static_cast<std::uint64_t>(start)));
        Vector gamma(p);
        for (Index i = 0; i < p; ++i) gamma(i) = rng.cnormal();
        double q = (prob.lam.array() * gamma.cwiseAbs2().array()).sum();
        if (q <= 0.0) continue;
        gamma /= std::sqrt(q);

        double value = std::norm(prob.u.dot(gamma));
        int stall = 0;
        for (int it = 0; it < iters && stall < 3; ++it) {
            const Complex a = prob.u.dot(gamma);  // u^* gamma
            const double R = std::norm(a);
            Vector d(p);
            if (it % 2 == 0) {
                // gradient of the Rayleigh quotient
                for (Index i = 0; i < p; ++i)
                    d(i) = prob.u(i) * std::conj(a) - R * prob.lam(i) * gamma(i);
            } else {
                // diagonally preconditioned gradient
                for (Index i = 0; i < p; ++i)
                    d(i) = prob.u(i) * std::conj(a) / prob.lam(i) - R * gamma(i);
            }
            if (d.norm() <= 1e-300) break;

            const Complex s = prob.u.dot(d);
            const double d1 = 2.0 * (prob.lam.array() * (d.conjugate().array() * gamma.array()))
                                        .sum()
                                        .real();
            const double d2 = (prob.lam.array() * d.cwiseAbs2().array()).sum();
            double eta = 0.0;
            const double improved = line_search(a, s, 1.0, d1, d2, eta);
            if (improved <= value * (1.0 + 1e-15)) {
                ++stall;
                continue;
            }
            gamma += eta * d;
            const double qq = (prob.lam.array() * gamma.cwiseAbs2().array()).sum();
            if (qq <= 1e-300) break;
            gamma /= std::sqrt(qq);
            const double next = std::norm(prob.u.dot(gamma));
            if (next <= value * (1.0 + 1e-15)) {
                ++stall;
            } else {
                stall = 0;
            }
            value = std::max(value, next);
        }
        best = std::max(best, value);
    }
    return best;
}

}  // namespace

double sup_oracle(const IdealFunctional& phi, const Matrix& x, int iters,
                  std::uint64_t seed, const ToleranceProfile& tol) {
    ensure_operator(x, "sup_oracle");
    if (x.rows() != phi.dim()) {
        throw DimensionMismatch("sup_oracle: operand dimension differs from the algebra");
    }
    if (iters < 1) iters = 1;

    const auto kernel = detail::factor_gram(phi, tol);
    const Index n = phi.dim();
    const Index r = phi.ideal.rank();
    if (r == 0) return 0.0;

    // Eigenbasis of the Gram form. Q = I_n (x) G^T has the eigenvalues of G,
    // each with multiplicity n; transformed objective coefficients are
    // conj(V^* W_x) per ambient column.
    Eigen::SelfAdjointEigenSolver<Matrix> es(kernel.G);
    const RealVector& mu = es.eigenvalues();
    const Matrix& V = es.eigenvectors();
    const Matrix Wx = detail::lin_coefficients(kernel, phi.rep, x);
    const Matrix Uhat = (V.adjoint() * Wx).conjugate();  // r x n

    const double mu_max = std::max(mu.size() > 0 ? mu.maxCoeff() : 0.0, 0.0);
    const double cutoff = tol.rank_rtol * mu_max;

    double kernel_mass2 = 0.0;
    double total_mass2 = 0.0;
    std::vector<Index> positive;
    for (Index t = 0; t < r; ++t) {
        const double row2 = Uhat.row(t).squaredNorm();
        total_mass2 += row2;
        if (mu(t) > cutoff && mu(t) > 0.0) {
            positive.push_back(t);
        } else {
            kernel_mass2 += row2;
        }
    }
    if (total_mass2 == 0.0) return 0.0;

    AscentProblem prob;
    prob.lam = RealVector(static_cast<Index>(positive.size()) * n);
    prob.u = Vector(static_cast<Index>(positive.size()) * n);
    Index slot = 0;
    for (const Index t : positive) {
        for (Index i = 0; i < n; ++i, ++slot) {
            prob.lam(slot) = mu(t);
            prob.u(slot) = Uhat(t, i);
        }
    }
    const double feasible = ascend(prob, iters, seed);

    const double div_tol = std::sqrt(std::max(tol.rank_rtol, 1e-16));
    if (kernel_mass2 > div_tol * div_tol * total_mass2) {
        // Unconstrained direction with nonzero payoff: the ascent doubles its
        // step every iteration, so the value grows without bound in iters.
        const double steps = std::min(static_cast<double>(iters), 509.0);
        const double reach = std::exp2(steps) * std::sqrt(kernel_mass2);
        const double base = std::sqrt(feasible) + reach;
        return base * base;
    }
    return feasible;
}

}  // namespace kvnlab
