#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <utility>
#include <vector>

#include "dixlab/error.hpp"

namespace dixlab {

using Cx = std::complex<double>;

/// Dense complex matrix, row-major. Small dimensions only (n <= 64).
class CMat {
  public:
    CMat() = default;
    CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
    CMat(int rows, int cols, std::vector<Cx> entries) : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != static_cast<std::size_t>(rows_) * cols_)
            throw ShapeMismatch("entry count does not match matrix shape");
    }

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static CMat zero(int rows, int cols) { return CMat(rows, cols); }
    /// Matrix unit E_{ij} (0-based indices).
    static CMat unit(int n, int i, int j) {
        CMat m(n, n);
        m(i, j) = 1.0;
        return m;
    }
    static CMat diag(std::vector<Cx> d) {
        CMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }
    static CMat scalar(int n, Cx v) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = v;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Cx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    Cx operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const std::vector<Cx>& entries() const { return a_; }

    CMat adjoint() const {
        CMat m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Cx trace() const {
        Cx t = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius() const {
        double s = 0.0;
        for (const Cx& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (const Cx& z : a_) s = std::max(s, std::abs(z));
        return s;
    }

    bool finite() const {
        for (const Cx& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    CMat& operator+=(const CMat& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    CMat& operator-=(const CMat& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    CMat& operator*=(Cx s) {
        for (auto& z : a_) z *= s;
        return *this;
    }

    friend CMat operator+(CMat a, const CMat& b) { return a += b; }
    friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
    friend CMat operator*(Cx s, CMat a) { return a *= s; }
    friend CMat operator*(CMat a, Cx s) { return a *= s; }

    friend CMat operator*(const CMat& a, const CMat& b) {
        if (a.cols_ != b.rows_) throw ShapeMismatch("matrix product shape mismatch");
        CMat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                Cx aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

  private:
    void check_same_shape(const CMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeMismatch("matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Cx> a_;
};

inline CMat hermitian_part(const CMat& m) {
    CMat h = m + m.adjoint();
    h *= 0.5;
    return h;
}

inline CMat antihermitian_part_over_i(const CMat& m) {
    // (m - m*)/(2i)
    CMat s = m - m.adjoint();
    s *= Cx(0.0, -0.5);
    return s;
}

struct HermitianEig {
    std::vector<double> eigenvalues; // ascending
    CMat basis;                      // unitary, columns are eigenvectors
};

namespace detail {

/// One cyclic Jacobi sweep pass over all (p,q) pairs. `h` is overwritten with
/// the rotated matrix, `v` (if non-null) accumulates the rotations.
inline double jacobi_offdiag_norm(const CMat& h) {
    double s = 0.0;
    int n = h.rows();
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s += std::norm(h(p, q));
    return std::sqrt(2.0 * s);
}

inline void jacobi_rotate(CMat& h, CMat* v, int p, int q) {
    Cx apq = h(p, q);
    double mag = std::abs(apq);
    if (mag == 0.0) return;
    double app = h(p, p).real();
    double aqq = h(q, q).real();
    Cx phase = apq / mag;

    double tau = (aqq - app) / (2.0 * mag);
    double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                            : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
    double c = 1.0 / std::sqrt(1.0 + t * t);
    double s = t * c;

    // Unitary R embedded at (p,q): R_pp = c, R_pq = s*phase, R_qp = -s*conj(phase), R_qq = c.
    // Update h <- R* h R and v <- v R.
    int n = h.rows();
    for (int k = 0; k < n; ++k) {
        Cx hkp = h(k, p), hkq = h(k, q);
        h(k, p) = c * hkp - s * std::conj(phase) * hkq;
        h(k, q) = s * phase * hkp + c * hkq;
    }
    for (int k = 0; k < n; ++k) {
        Cx hpk = h(p, k), hqk = h(q, k);
        h(p, k) = c * hpk - s * phase * hqk;
        h(q, k) = s * std::conj(phase) * hpk + c * hqk;
    }
    h(p, q) = 0.0;
    h(q, p) = 0.0;
    if (v) {
        for (int k = 0; k < n; ++k) {
            Cx vkp = (*v)(k, p), vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - s * std::conj(phase) * vkq;
            (*v)(k, q) = s * phase * vkp + c * vkq;
        }
    }
}

/// Jacobi diagonalization of an (assumed) Hermitian matrix.
/// Returns ascending eigenvalues; fills basis columns when `want_basis`.
inline HermitianEig jacobi_eig(CMat h, bool want_basis) {
    int n = h.rows();
    double scale = std::max(1.0, h.frobenius());
    CMat v = CMat::identity(n);

    const int max_sweeps = 100;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (jacobi_offdiag_norm(h) <= 1e-14 * scale) {
            converged = true;
            break;
        }
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) jacobi_rotate(h, want_basis ? &v : nullptr, p, q);
    }
    if (!converged && jacobi_offdiag_norm(h) > 1e-12 * scale)
        throw NoConvergence("Jacobi eigensolver did not converge in 100 sweeps");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return h(a, a).real() < h(b, b).real(); });

    HermitianEig out;
    out.eigenvalues.resize(n);
    out.basis = CMat(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = h(order[j], order[j]).real();
        if (want_basis)
            for (int i = 0; i < n; ++i) out.basis(i, j) = v(i, order[j]);
    }
    if (!want_basis) out.basis = CMat();
    return out;
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Eigenvalues ascending; basis unitary with h = basis diag basis*.
inline HermitianEig hermitian_eig(const CMat& h, double tol = 1e-10) {
    if (!h.square()) throw ShapeMismatch("hermitian_eig needs a square matrix");
    if (!h.finite()) throw NotHermitian("matrix has non-finite entries");
    double scale = std::max(1.0, h.frobenius());
    if ((h - h.adjoint()).frobenius() > tol * scale)
        throw NotHermitian("matrix is not Hermitian within tolerance");
    return detail::jacobi_eig(hermitian_part(h), true);
}

/// Ascending eigenvalues only (skips accumulating the basis).
inline std::vector<double> hermitian_eigenvalues(const CMat& h) {
    return detail::jacobi_eig(hermitian_part(h), false).eigenvalues;
}

inline double largest_eigenvalue(const CMat& h) {
    int n = h.rows();
    if (n == 1) return h(0, 0).real();
    if (n == 2) {
        double a = h(0, 0).real(), d = h(1, 1).real();
        double m = std::norm(h(0, 1));
        double half = 0.5 * (a - d);
        return 0.5 * (a + d) + std::sqrt(half * half + m);
    }
    return detail::jacobi_eig(hermitian_part(h), false).eigenvalues.back();
}

/// Largest eigenvalue together with a unit eigenvector.
inline std::pair<double, std::vector<Cx>> top_eigenpair(const CMat& h) {
    int n = h.rows();
    if (n == 1) return {h(0, 0).real(), {Cx(1.0, 0.0)}};
    if (n == 2) {
        double a = h(0, 0).real(), d = h(1, 1).real();
        Cx b = h(0, 1);
        double m = std::norm(b);
        double half = 0.5 * (a - d);
        double lam = 0.5 * (a + d) + std::sqrt(half * half + m);
        // (h - lam) v = 0; pick the more stable column.
        Cx v0, v1;
        if (std::abs(a - lam) + std::abs(b) < 1e-300) {
            v0 = 1.0;
            v1 = 0.0;
        } else if (std::sqrt(m) >= std::abs(d - lam)) {
            v0 = b;
            v1 = lam - a;
            if (std::abs(v0) + std::abs(v1) == 0.0) v0 = 1.0;
        } else {
            v0 = lam - d;
            v1 = std::conj(b);
            if (std::abs(v0) + std::abs(v1) == 0.0) v0 = 1.0;
        }
        double nr = std::sqrt(std::norm(v0) + std::norm(v1));
        return {lam, {v0 / nr, v1 / nr}};
    }
    HermitianEig e = detail::jacobi_eig(hermitian_part(h), true);
    std::vector<Cx> v(n);
    for (int i = 0; i < n; ++i) v[i] = e.basis(i, n - 1);
    return {e.eigenvalues.back(), v};
}

/// Largest singular value, via the Hermitian eigenproblem of m* m.
inline double operator_norm(const CMat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    CMat g = m.adjoint() * m;
    double lam = (g.rows() == 1) ? g(0, 0).real() : largest_eigenvalue(g);
    return std::sqrt(std::max(0.0, lam));
}

/// True iff ||m^2|| <= tol * max(1, ||m||^2).
inline bool is_square_zero(const CMat& m, double tol = 1e-10) {
    if (!m.square()) throw ShapeMismatch("is_square_zero needs a square matrix");
    double nm = operator_norm(m);
    return operator_norm(m * m) <= tol * std::max(1.0, nm * nm);
}

inline bool is_hermitian(const CMat& m, double tol = 1e-10) {
    if (!m.square()) return false;
    return (m - m.adjoint()).frobenius() <= tol * std::max(1.0, m.frobenius());
}

/// Nilpotency test for a square matrix: m^n vanishes.
inline bool is_nilpotent(const CMat& m, double tol = 1e-10) {
    if (!m.square()) throw ShapeMismatch("is_nilpotent needs a square matrix");
    double nm = operator_norm(m);
    if (nm == 0.0) return true;
    CMat p = m;
    double bound = std::max(1.0, nm);
    double powbound = bound;
    for (int k = 1; k < m.rows(); ++k) {
        p = p * m;
        powbound *= bound;
    }
    return operator_norm(p) <= tol * powbound;
}

} // namespace dixlab
