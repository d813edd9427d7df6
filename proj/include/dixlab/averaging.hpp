#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "dixlab/algebra.hpp"
#include "dixlab/numerical_range.hpp"
#include "dixlab/rng.hpp"

namespace dixlab {

/// Convex combination of unitary conjugations: x -> sum_i t_i u_i* x u_i.
struct MixingOperator {
    std::vector<double> weights;
    std::vector<Element> unitaries; // aligned with weights; per point, per block
};

/// Unital completely positive elementary operator x -> sum_i a_i* x a_i with
/// sum_i a_i* a_i = 1 blockwise.
struct EucpOperator {
    std::vector<Element> kraus;
};

inline MixingOperator identity_mixing(const FiberedAlgebra& a) {
    return {{1.0}, {unit_element(a)}};
}

inline Element apply(const MixingOperator& phi, const Element& e) {
    if (phi.weights.empty()) throw BadParams("mixing operator has no terms");
    Element acc;
    for (std::size_t i = 0; i < phi.weights.size(); ++i) {
        Element term = adjoint(phi.unitaries[i]) * e * phi.unitaries[i];
        term = phi.weights[i] * term;
        acc = (i == 0) ? term : acc + term;
    }
    return acc;
}

inline Element apply(const EucpOperator& phi, const Element& e) {
    if (phi.kraus.empty()) throw BadParams("EUCP operator has no terms");
    Element acc;
    for (std::size_t i = 0; i < phi.kraus.size(); ++i) {
        Element term = adjoint(phi.kraus[i]) * e * phi.kraus[i];
        acc = (i == 0) ? term : acc + term;
    }
    return acc;
}

/// Composition phi_outer after phi_inner, with product weights and
/// composed unitary fields.
inline MixingOperator compose(const MixingOperator& outer, const MixingOperator& inner) {
    MixingOperator out;
    for (std::size_t i = 0; i < outer.weights.size(); ++i)
        for (std::size_t j = 0; j < inner.weights.size(); ++j) {
            out.weights.push_back(outer.weights[i] * inner.weights[j]);
            out.unitaries.push_back(inner.unitaries[j] * outer.unitaries[i]);
        }
    return out;
}

namespace detail {

inline CMat clock_matrix(int n, int power) {
    CMat c(n, n);
    for (int j = 0; j < n; ++j) c(j, j) = std::polar(1.0, 2.0 * M_PI * j * power / n);
    return c;
}
inline CMat shift_matrix(int n, int power) {
    CMat s(n, n);
    for (int j = 0; j < n; ++j) s((j + power) % n, j) = 1.0;
    return s;
}
/// The i-th of the n^2 clock-and-shift unitaries.
inline CMat weyl_unitary(int n, int i) { return clock_matrix(n, i / n) * shift_matrix(n, i % n); }

} // namespace detail

/// The n^2 clock-and-shift unitaries with equal weights: averaging any
/// a in M_n to (tr a / n) 1 exactly. Single-fiber single-block form.
inline MixingOperator weyl_twirl(int n) {
    if (n < 1) throw BadParams("weyl_twirl needs n >= 1");
    FiberedAlgebra a;
    a.base = Base::discrete(1);
    a.fibers = {{Block{n, true, true}}};
    MixingOperator phi;
    if (n == 1) return identity_mixing(a);
    for (int i = 0; i < n * n; ++i) {
        phi.weights.push_back(1.0 / (n * n));
        Element u = zero_element(a);
        u.at(0, 0) = detail::weyl_unitary(n, i);
        phi.unitaries.push_back(std::move(u));
    }
    return phi;
}

struct ScalarizeResult {
    MixingOperator op;
    Element result; // every block scalar, equal to its normalized trace
};

/// Per-block Weyl twirling assembled into one mixing operator: term count is
/// the lcm of the block twirl sizes, cycling each block through its own
/// unitaries. Needs one fiber structure across the base.
inline ScalarizeResult blockwise_scalarize(const FiberedAlgebra& a, const Element& e) {
    check_shape(a, e);
    if (a.base.is_path() && !a.constant_structure())
        throw UnsupportedBase("blockwise_scalarize needs a constant fiber structure on path bases");

    long long terms = 1;
    for (int p = 0; p < a.points(); ++p)
        for (int b = 0; b < a.blocks(p); ++b) {
            long long d = a.block(p, b).dim;
            terms = std::lcm(terms, d * d);
        }

    ScalarizeResult out;
    for (long long i = 0; i < terms; ++i) {
        out.op.weights.push_back(1.0 / static_cast<double>(terms));
        Element u = zero_element(a);
        for (int p = 0; p < a.points(); ++p)
            for (int b = 0; b < a.blocks(p); ++b) {
                int d = a.block(p, b).dim;
                u.at(p, b) = (d == 1) ? CMat::identity(1)
                                      : detail::weyl_unitary(d, static_cast<int>(i % (d * d)));
            }
        out.op.unitaries.push_back(std::move(u));
    }

    // the result is computed per block with that block's own twirl
    out.result = zero_element(a);
    for (int p = 0; p < a.points(); ++p)
        for (int b = 0; b < a.blocks(p); ++b) {
            int d = a.block(p, b).dim;
            const CMat& m = e.at(p, b);
            if (d == 1) {
                out.result.at(p, b) = m;
                continue;
            }
            CMat acc(d, d);
            for (int i = 0; i < d * d; ++i) {
                CMat u = detail::weyl_unitary(d, i);
                acc += u.adjoint() * m * u;
            }
            acc *= 1.0 / static_cast<double>(d * d);
            out.result.at(p, b) = acc;
        }
    return out;
}

/// Kraus form of b -> tr(omega b) 1 on M_n, extracted from the
/// eigendecomposition of the Choi matrix. Single-fiber single-block form.
inline EucpOperator eucp_from_state(const CMat& omega, double tol = 1e-10) {
    if (!omega.square()) throw NotDensity("a density matrix is square");
    int n = omega.rows();
    double scale = std::max(1.0, omega.frobenius());
    if ((omega - omega.adjoint()).frobenius() > tol * scale) throw NotDensity("density must be Hermitian");
    if (std::abs(omega.trace() - Cx(1, 0)) > tol) throw NotDensity("density must have unit trace");
    std::vector<double> spec = hermitian_eigenvalues(omega);
    if (spec.front() < -tol) throw NotDensity("density must be positive semidefinite");

    // Choi matrix C[(i,a),(j,b)] = Phi(E_ij)[a,b] = omega_ji delta_ab
    CMat choi(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int x = 0; x < n; ++x) choi(i * n + x, j * n + x) = omega(j, i);
    HermitianEig eig = hermitian_eig(choi);

    FiberedAlgebra alg;
    alg.base = Base::discrete(1);
    alg.fibers = {{Block{n, true, true}}};

    EucpOperator phi;
    for (int k = 0; k < n * n; ++k) {
        double lam = eig.eigenvalues[k];
        if (lam <= tol) continue;
        // A[x,i] = sqrt(lam) v[(i,x)]; stored coefficient a = A^* so that
        // phi(m) = sum a* m a with sum a* a = 1.
        CMat kraus_a(n, n);
        double s = std::sqrt(lam);
        for (int i = 0; i < n; ++i)
            for (int x = 0; x < n; ++x) kraus_a(i, x) = std::conj(s * eig.basis(i * n + x, k));
        Element field = zero_element(alg);
        field.at(0, 0) = kraus_a;
        phi.kraus.push_back(std::move(field));
    }
    return phi;
}

/// EUCP operator on the whole algebra sending the element's distinguished
/// fiber to a scalar: the fiber at `point` must consist of one matrix block b
/// plus one-dimensional blocks all equal to a common scalar mu lying in W(b).
/// Kraus coefficients extend constantly: fibers with the same structure get
/// (A_k, beta_k 1, ...), single-block fibers of the full dimension get the
/// block-diagonal embedding.
inline EucpOperator eucp_scalarize_fiber(const FiberedAlgebra& a, const Element& e, int point) {
    check_shape(a, e);
    if (point < 0 || point >= a.points()) throw BadParams("fiber index out of range");
    const auto& fiber = a.fibers[point];
    int big = -1;
    int ones = 0;
    for (int b = 0; b < static_cast<int>(fiber.size()); ++b) {
        if (fiber[b].dim >= 2) {
            if (big >= 0) throw UnsupportedBase("fiber must have a single matrix block");
            big = b;
        } else {
            ++ones;
        }
    }
    if (big < 0 || ones == 0) throw UnsupportedBase("fiber must mix one matrix block with scalar blocks");
    int n = fiber[big].dim;
    Cx mu = 0.0;
    bool first = true;
    for (int b = 0; b < static_cast<int>(fiber.size()); ++b) {
        if (b == big) continue;
        Cx v = e.at(point, b)(0, 0);
        if (first) {
            mu = v;
            first = false;
        } else if (std::abs(v - mu) > 1e-9 * std::max(1.0, std::abs(mu))) {
            throw BadParams("scalar blocks disagree; no common target value");
        }
    }

    CMat omega = state_achieving(e.at(point, big), mu); // throws when mu is outside W
    EucpOperator single = eucp_from_state(omega);

    EucpOperator phi;
    for (const Element& k : single.kraus) {
        const CMat& A = k.at(0, 0);
        double beta = std::sqrt(std::max(0.0, ((A.adjoint() * A).trace() / static_cast<double>(n)).real()));
        Element field = zero_element(a);
        for (int p = 0; p < a.points(); ++p) {
            const auto& f = a.fibers[p];
            if (static_cast<int>(f.size()) == static_cast<int>(fiber.size())) {
                bool same = true;
                for (std::size_t b = 0; b < f.size(); ++b) same = same && f[b].dim == fiber[b].dim;
                if (same) {
                    for (int b = 0; b < static_cast<int>(f.size()); ++b)
                        field.at(p, b) = (b == big) ? A : CMat::scalar(1, beta);
                    continue;
                }
            }
            if (f.size() == 1 && f[0].dim == n + ones) {
                CMat m(n + ones, n + ones);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) m(i, j) = A(i, j);
                for (int i = n; i < n + ones; ++i) m(i, i) = beta;
                field.at(p, 0) = m;
                continue;
            }
            throw UnsupportedBase("fiber structure does not embed the scalarizing coefficients");
        }
        phi.kraus.push_back(std::move(field));
    }
    return phi;
}

struct OperatorDiagnostics {
    double weight_violation = 0.0;    // |sum t_i - 1|, negative weights folded in
    double unitarity_violation = 0.0; // worst ||u* u - 1||
    double unitality_violation = 0.0; // worst ||sum a_i* a_i - 1|| (EUCP)
    double max_violation() const {
        return std::max({weight_violation, unitarity_violation, unitality_violation});
    }
};

inline OperatorDiagnostics verify(const MixingOperator& phi) {
    OperatorDiagnostics d;
    double sum = 0.0;
    for (double w : phi.weights) {
        sum += w;
        if (w < 0) d.weight_violation = std::max(d.weight_violation, -w);
    }
    d.weight_violation = std::max(d.weight_violation, std::abs(sum - 1.0));
    for (const Element& u : phi.unitaries)
        for (const auto& fiber : u.data)
            for (const CMat& m : fiber) {
                CMat g = m.adjoint() * m - CMat::identity(m.rows());
                d.unitarity_violation = std::max(d.unitarity_violation, operator_norm(g));
            }
    return d;
}

inline OperatorDiagnostics verify(const EucpOperator& phi) {
    OperatorDiagnostics d;
    if (phi.kraus.empty()) return d;
    Element acc;
    for (std::size_t i = 0; i < phi.kraus.size(); ++i) {
        Element term = adjoint(phi.kraus[i]) * phi.kraus[i];
        acc = (i == 0) ? term : acc + term;
    }
    for (const auto& fiber : acc.data)
        for (const CMat& m : fiber) {
            CMat g = m - CMat::identity(m.rows());
            d.unitality_violation = std::max(d.unitality_violation, operator_norm(g));
        }
    return d;
}

struct DescentResult {
    std::vector<MixingOperator> stages; // two-term averages, applied in order
    std::vector<double> residuals;      // residuals[0] is the starting distance
    Element final_element;
};

inline Element apply(const DescentResult& d, Element e) {
    for (const MixingOperator& phi : d.stages) e = apply(phi, e);
    return e;
}

namespace detail {

inline CMat hermitian_exp_i(const CMat& h, double s) {
    HermitianEig e = hermitian_eig(h);
    int n = h.rows();
    CMat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = std::polar(1.0, s * e.eigenvalues[i]);
    return e.basis * d * e.basis.adjoint();
}

inline double block_residual(const CMat& m, Cx target) {
    return operator_norm(m - CMat::scalar(m.rows(), target));
}

} // namespace detail

/// Iterative two-term unitary averaging toward a central target: each stage
/// picks, per block, the best of the clock-and-shift unitaries and a random
/// Hermitian rotation with backtracking step sizes. Residual log is monotone
/// (the identity stays in the candidate pool).
inline DescentResult descent_to_center(const FiberedAlgebra& a, const Element& e,
                                       const CentralField& target, int iterations = 500,
                                       std::uint64_t seed = 1) {
    check_shape(a, e);
    if (static_cast<int>(target.size()) != a.points()) throw ShapeMismatch("target field size mismatch");
    Rng rng(seed);
    DescentResult out;
    Element cur = e;

    auto residual = [&](const Element& x) {
        double r = 0.0;
        for (int p = 0; p < a.points(); ++p)
            for (int b = 0; b < a.blocks(p); ++b) r = std::max(r, detail::block_residual(x.at(p, b), target[p]));
        return r;
    };
    out.residuals.push_back(residual(cur));

    for (int it = 0; it < iterations; ++it) {
        Element u = unit_element(a);
        bool any = false;
        for (int p = 0; p < a.points(); ++p)
            for (int b = 0; b < a.blocks(p); ++b) {
                const CMat& m = cur.at(p, b);
                int d = m.rows();
                if (d == 1) continue;
                double best = detail::block_residual(m, target[p]);
                CMat best_u = CMat::identity(d);
                auto consider = [&](const CMat& cand) {
                    CMat avg = m + cand.adjoint() * m * cand;
                    avg *= 0.5;
                    double r = detail::block_residual(avg, target[p]);
                    if (r < best) {
                        best = r;
                        best_u = cand;
                        any = true;
                    }
                };
                for (int i = 1; i < d * d; ++i) consider(detail::weyl_unitary(d, i));
                CMat h = rng.hermitian(d);
                for (double s : {2.0, 1.0, 0.5, 0.25}) consider(detail::hermitian_exp_i(h, s));
                u.at(p, b) = best_u;
            }
        if (any) {
            MixingOperator stage;
            stage.weights = {0.5, 0.5};
            stage.unitaries = {unit_element(a), u};
            cur = apply(stage, cur);
            out.stages.push_back(std::move(stage));
        }
        out.residuals.push_back(residual(cur));
    }
    out.final_element = cur;
    return out;
}

} // namespace dixlab
