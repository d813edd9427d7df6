#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "dixlab/complex_matrix.hpp"
#include "dixlab/config.hpp"
#include "dixlab/convex_region.hpp"
#include "dixlab/error.hpp"

namespace dixlab {

/// Largest eigenvalue of Re(e^{-i theta} a), the support function of W(a).
inline double support_value(const CMat& a, double theta) {
    if (!a.square()) throw ShapeMismatch("support_value needs a square matrix");
    Cx w = std::polar(1.0, -theta);
    return largest_eigenvalue(hermitian_part(w * a));
}

/// Boundary state value: omega(a) for the state omega attaining the support
/// of W(a) in direction theta, together with its unit vector.
inline std::pair<Cx, std::vector<Cx>> support_point(const CMat& a, double theta) {
    Cx w = std::polar(1.0, -theta);
    auto [lam, v] = top_eigenpair(hermitian_part(w * a));
    (void)lam;
    int n = a.rows();
    Cx val = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) val += std::conj(v[i]) * a(i, j) * v[j];
    return {val, std::move(v)};
}

/// Numerical range W(a) as the hull of boundary state values over the global
/// direction grid. Vertices lie exactly on the boundary of the true range, so
/// segments (normal/Hermitian inputs) come out exact and smooth boundaries are
/// inner-approximated with O(diam / K^2) sag.
inline ConvexRegion numerical_range(const CMat& a) {
    if (!a.square()) throw ShapeMismatch("numerical_range needs a square matrix");
    int n = a.rows();
    if (n == 1) return ConvexRegion::point(a(0, 0));
    int k = grid_angles();
    std::vector<Cx> pts;
    pts.reserve(k);
    for (int i = 0; i < k; ++i) pts.push_back(support_point(a, 2.0 * M_PI * i / k).first);
    return ConvexRegion::from_points(std::move(pts));
}

/// Eigenvalues of a normal matrix via joint diagonalization of the commuting
/// Hermitian pair (Re a, Im a). Sorted by (real, imag) for determinism.
inline std::vector<Cx> normal_spectrum(const CMat& a, double tol = 1e-10) {
    if (!a.square()) throw ShapeMismatch("normal_spectrum needs a square matrix");
    int n = a.rows();
    double scale = std::max(1.0, a.frobenius());
    if ((a * a.adjoint() - a.adjoint() * a).frobenius() > tol * scale * scale)
        throw NotNormal("matrix is not normal within tolerance");

    CMat h = hermitian_part(a);
    CMat s = antihermitian_part_over_i(a);
    HermitianEig eh = hermitian_eig(h);
    // transform the imaginary part into the H-eigenbasis; it is block-diagonal
    // over clusters of equal H-eigenvalues.
    CMat t = eh.basis.adjoint() * s * eh.basis;

    std::vector<Cx> out;
    out.reserve(n);
    double cluster_gap = 1e-8 * scale;
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && eh.eigenvalues[end] - eh.eigenvalues[end - 1] <= cluster_gap) ++end;
        int m = end - start;
        if (m == 1) {
            out.emplace_back(eh.eigenvalues[start], t(start, start).real());
        } else {
            CMat sub(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) sub(i, j) = t(start + i, start + j);
            std::vector<double> imag = hermitian_eigenvalues(sub);
            for (int i = 0; i < m; ++i) out.emplace_back(eh.eigenvalues[start + i], imag[i]);
        }
        start = end;
    }
    std::sort(out.begin(), out.end(), [](Cx x, Cx y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return out;
}

/// A density matrix omega with tr(omega b) == value, for value in W(b).
/// Built from boundary states of the support sweep: the target is written as a
/// convex combination of at most three boundary state values.
inline CMat state_achieving(const CMat& b, Cx value) {
    if (!b.square()) throw ShapeMismatch("state_achieving needs a square matrix");
    int n = b.rows();
    if (n == 1) {
        if (std::abs(b(0, 0) - value) > geom_tol() * std::max(1.0, std::abs(b(0, 0))))
            throw BadParams("value is not attained by the one-dimensional block");
        return CMat::identity(1);
    }
    int k = grid_angles();
    std::vector<Cx> w(k);
    std::vector<std::vector<Cx>> vecs(k);
    for (int i = 0; i < k; ++i) {
        auto [val, v] = support_point(b, 2.0 * M_PI * i / k);
        w[i] = val;
        vecs[i] = std::move(v);
    }
    double scale = std::max(1.0, b.frobenius());

    auto density_of = [&](int i) {
        CMat d(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) d(r, c) = vecs[i][r] * std::conj(vecs[i][c]);
        return d;
    };

    for (int i = 0; i < k; ++i)
        if (std::abs(w[i] - value) <= 1e-12 * scale) return density_of(i);

    // fan triangulation from w[0]
    for (int i = 1; i + 1 < k; ++i) {
        Cx u = w[i] - w[0], v = w[i + 1] - w[0], d = value - w[0];
        double det = geo::cross(u, v);
        if (std::abs(det) < 1e-14 * scale * scale) continue;
        double c1 = geo::cross(d, v) / det;
        double c2 = geo::cross(u, d) / det;
        double c0 = 1.0 - c1 - c2;
        double eps = 1e-9;
        if (c0 < -eps || c1 < -eps || c2 < -eps) continue;
        c0 = std::max(0.0, c0);
        c1 = std::max(0.0, c1);
        c2 = std::max(0.0, c2);
        double sum = c0 + c1 + c2;
        CMat d0 = density_of(0), d1 = density_of(i), d2 = density_of(i + 1);
        CMat omega = (c0 / sum) * d0 + (c1 / sum) * d1 + (c2 / sum) * d2;
        return omega;
    }
    // collinear boundary (normal b with segment range): 1D combinations
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            Cx u = w[j] - w[i];
            double len2 = std::norm(u);
            if (len2 < 1e-28 * scale * scale) continue;
            double t = geo::dot(value - w[i], u) / len2;
            if (t < -1e-9 || t > 1.0 + 1e-9) continue;
            if (std::abs(w[i] + t * u - value) > 1e-9 * scale) continue;
            t = std::clamp(t, 0.0, 1.0);
            CMat omega = (1.0 - t) * density_of(i) + t * density_of(j);
            return omega;
        }
    throw BadParams("value is not in the numerical range of the block");
}

} // namespace dixlab
