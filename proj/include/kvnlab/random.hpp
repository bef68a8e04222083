// random.hpp — Seeded Gaussian sampling with a hand-rolled Box-Muller step so
// streams do not depend on the standard library's distribution internals.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "kvnlab/types.hpp"

namespace kvnlab {

// splitmix64 finalizer; derives independent per-item seeds from (seed, stream).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1) with 53 random bits
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex cnormal() {
        const double re = normal();
        const double im = normal();
        return Complex(re, im) / std::sqrt(2.0);
    }

    Matrix gaussian(Index rows, Index cols) {
        Matrix M(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) M(i, j) = cnormal();
        return M;
    }

    Matrix hermitian(Index n) {
        const Matrix A = gaussian(n, n);
        return 0.5 * (A + A.adjoint());
    }

    // Wishart-style PSD sample B^* B, scaled to unit trace when nonzero.
    Matrix psd(Index n) {
        const Matrix B = gaussian(n, n);
        Matrix S = B.adjoint() * B;
        const double tr = S.trace().real();
        if (tr > 0.0) S /= tr;
        return S;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace kvnlab
