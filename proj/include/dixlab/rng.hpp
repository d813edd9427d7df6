#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dixlab/complex_matrix.hpp"

namespace dixlab {

/// Seeded random source with hand-rolled uniform/gaussian draws so that
/// streams are identical across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Cx gaussian_cx() {
        double re = gaussian();
        double im = gaussian();
        return Cx(re, im);
    }

    std::uint64_t integer(std::uint64_t n) { // [0, n)
        return gen_() % n;
    }

    CMat matrix(int rows, int cols) {
        CMat m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = gaussian_cx();
        return m;
    }

    CMat hermitian(int n) {
        CMat m = matrix(n, n);
        return hermitian_part(m);
    }

    CMat unitary(int n) {
        // Gram-Schmidt on a Gaussian matrix
        CMat m = matrix(n, n);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < j; ++k) {
                Cx proj = 0.0;
                for (int i = 0; i < n; ++i) proj += std::conj(m(i, k)) * m(i, j);
                for (int i = 0; i < n; ++i) m(i, j) -= proj * m(i, k);
            }
            double nr = 0.0;
            for (int i = 0; i < n; ++i) nr += std::norm(m(i, j));
            nr = std::sqrt(nr);
            if (nr < 1e-12) { // astronomically unlikely; retry column deterministically
                for (int i = 0; i < n; ++i) m(i, j) = gaussian_cx();
                --j;
                continue;
            }
            for (int i = 0; i < n; ++i) m(i, j) /= nr;
        }
        return m;
    }

    /// Square-zero matrix: unitary conjugate of a strictly off-diagonal block form.
    CMat square_zero(int n) {
        CMat nil(n, n);
        if (n >= 2) {
            int k = n / 2;
            for (int i = 0; i < k; ++i)
                for (int j = k; j < n; ++j) nil(i, j) = gaussian_cx();
        }
        CMat u = unitary(n);
        return u * nil * u.adjoint();
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace dixlab
