#include "kvnlab/truncation.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <utility>

namespace kvnlab {

TruncationFamily TruncationFamily::trace_class_pow(double base) {
    if (!(base > 0.0) || !(base < 1.0)) {
        throw ValidationError("trace_class_pow: base must lie in (0, 1)");
    }
    TruncationFamily f;
    f.kind = Kind::TraceClassDiag;
    f.diag = [base](Index i) { return std::pow(base, static_cast<double>(i)); };
    std::ostringstream os;
    os << "trace_class_pow_" << base;
    f.id = os.str();
    return f;
}

TruncationFamily TruncationFamily::trace_class_list(std::vector<double> values) {
    for (const double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("trace_class_list: diagonal values must be finite and >= 0");
        }
    }
    TruncationFamily f;
    f.kind = Kind::TraceClassDiag;
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    f.diag = [data](Index i) {
        if (i < 1 || static_cast<std::size_t>(i) > data->size()) {
            throw ValidationError("trace_class_list: truncation exceeds the explicit diagonal");
        }
        return (*data)[static_cast<std::size_t>(i - 1)];
    };
    f.id = "trace_class_list";
    return f;
}

TruncationFamily TruncationFamily::cesaro() {
    TruncationFamily f;
    f.kind = Kind::Cesaro;
    f.id = "cesaro";
    return f;
}

TruncationFamily TruncationFamily::mixture(double lambda, TruncationFamily trace_class_part) {
    if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
        throw ValidationError("mixture: lambda must lie in [0, 1]");
    }
    if (trace_class_part.kind != Kind::TraceClassDiag) {
        throw ValidationError("mixture: the deterministic part must be a trace-class family");
    }
    TruncationFamily f;
    f.kind = Kind::Mixture;
    f.lambda = lambda;
    f.diag = trace_class_part.diag;
    std::ostringstream os;
    os << "mixture_" << lambda << "_" << trace_class_part.id;
    f.id = os.str();
    return f;
}

TraceFormFunctional family_generator(const TruncationFamily& family, Index N) {
    if (N < 1) throw ValidationError("family_generator: N must be >= 1");
    Matrix F = Matrix::Zero(N, N);
    switch (family.kind) {
        case TruncationFamily::Kind::TraceClassDiag:
            if (!family.diag) throw ValidationError("family_generator: missing diagonal rule");
            for (Index i = 0; i < N; ++i) F(i, i) = family.diag(i + 1);
            break;
        case TruncationFamily::Kind::Cesaro:
            F = Matrix::Identity(N, N) / static_cast<double>(N);
            break;
        case TruncationFamily::Kind::Mixture: {
            if (!family.diag) throw ValidationError("family_generator: missing diagonal rule");
            const double lam = family.lambda;
            for (Index i = 0; i < N; ++i) {
                F(i, i) = lam * family.diag(i + 1) + (1.0 - lam) / static_cast<double>(N);
            }
            break;
        }
    }
    return TraceFormFunctional(std::move(F));
}

PartialSumReport partial_sum_trace_test(const TruncationFamily& family,
                                        const std::vector<Index>& N_list,
                                        const ToleranceProfile& tol) {
    PartialSumReport report;
    report.all_bounded = true;
    for (const Index N : N_list) {
        const TraceFormFunctional f = family_generator(family, N);
        if (!is_positive(f, tol)) {
            throw NotPsd("partial_sum_trace_test: family member is not positive");
        }

        BlackBoxFunctional box;
        box.dim = N;
        box.eval = [&f, &tol](const Matrix& X) { return eval_trace_form(f, X, tol); };
        const TraceFormFunctional recovered = riesz_recover(box, tol);

        PartialSumRow row;
        row.N = N;
        row.bound = eval_trace_form(f, Matrix::Identity(N, N), tol).real();
        row.bounded = true;
        double running = 0.0;
        for (Index m = 0; m < N; ++m) {
            running += recovered.generator(m, m).real();
            row.partial_sums.push_back(running);
            if (running > row.bound + tol.eq_tol) row.bounded = false;
        }
        report.all_bounded = report.all_bounded && row.bounded;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace kvnlab
