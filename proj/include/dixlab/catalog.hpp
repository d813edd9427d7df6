#pragma once

#include <cmath>
#include <map>
#include <string>

#include "dixlab/algebra.hpp"
#include "dixlab/rng.hpp"

namespace dixlab {

/// A ready-made model algebra with named elements. Fixtures modeling
/// infinite-dimensional algebras carry surrogate notes in `description`.
struct Fixture {
    std::string name;
    std::string description;
    FiberedAlgebra algebra;
    std::map<std::string, Element> elements;
};

namespace detail {

/// The rotating-interval curves of the two-block path fixture: [alpha, beta]
/// starts at [-1, -1+2i], stays pinned at -1 while rotating flat into [-1, 1]
/// at t = 0, then pins at 1 and rotates up to [1, 1+2i].
inline Cx alpha_curve(double t) {
    if (t <= 0.0) return Cx(-1.0, 0.0);
    return Cx(1.0, 0.0) + 2.0 * std::polar(1.0, (M_PI / 2.0) * (2.0 - t));
}
inline Cx beta_curve(double t) {
    if (t <= 0.0) return Cx(-1.0, 0.0) + 2.0 * std::polar(1.0, (M_PI / 2.0) * (-t));
    return Cx(1.0, 0.0);
}

/// Cell-centered grid over [-1, 1]: spacing 2/m with no grid point at 0, so
/// the sign-jump cell genuinely straddles the origin.
inline Base centered_pm1_base(int m) { return Base::path(-1.0 + 1.0 / m, 1.0 - 1.0 / m, m); }

inline FiberedAlgebra two_block_path_algebra(int m, bool traceful) {
    FiberedAlgebra a;
    a.base = centered_pm1_base(m);
    Block blk{2, traceful, true};
    a.fibers.assign(m, {blk, blk});
    a.check();
    return a;
}

inline Element two_block_path_element(const FiberedAlgebra& a, double epsilon) {
    // block 1: diag(alpha(t), beta(t)); block 2: diag(1,-1), or its epsilon
    // perturbation [[1, eps], [0, -1]] whose range is a solid ellipse.
    Element e = zero_element(a);
    for (int p = 0; p < a.points(); ++p) {
        double t = a.base.t(p);
        e.at(p, 0) = CMat::diag({alpha_curve(t), beta_curve(t)});
        CMat b2(2, 2, {Cx(1, 0), Cx(epsilon, 0), Cx(0, 0), Cx(-1, 0)});
        e.at(p, 1) = b2;
    }
    return e;
}

} // namespace detail

/// Elements of the endpoint-pinched path fixture: a constant 2x2 corner
/// family with scalar third component.
inline Element fix_a_family(const FiberedAlgebra& a, const CMat& lambda2, Cx mu) {
    if (lambda2.rows() != 2 || lambda2.cols() != 2) throw ShapeMismatch("fix_a_family needs a 2x2 corner");
    Element e = zero_element(a);
    int last = a.points() - 1;
    for (int p = 0; p < last; ++p) {
        CMat m(3, 3);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m(i, j) = lambda2(i, j);
        m(2, 2) = mu;
        e.at(p, 0) = m;
    }
    e.at(last, 0) = lambda2;
    e.at(last, 1) = CMat(1, 1, {mu});
    return e;
}

/// Constant matrix-unit field e_ij (1-based corner indices) of the
/// endpoint-pinched path fixture.
inline Element fix_a_unit(const FiberedAlgebra& a, int i, int j) {
    CMat lam(2, 2);
    lam(i - 1, j - 1) = 1.0;
    return fix_a_family(a, lam, 0.0);
}

/// The five catalog fixtures.
///   FIX-A   path over [0,1]; generic fiber M_3 pinching to M_2 (+) C at t=1.
///   FIX-B   path over [-1,1]; two M_2 blocks; element c has a rotating
///           interval against [-1,1], with singleton Psi jumping across 0.
///   FIX-C   FIX-B with the second block perturbed into a solid ellipse.
///   FIX-D   one point: traceless simple 2x2 surrogate block plus a
///           one-dimensional trace probe that bypasses the maximal quotient.
///   FIX-E   FIX-B with both blocks flagged traceless (no tracial states).
inline Fixture fixture(const std::string& name, double epsilon = 0.5, int points = 0) {
    Fixture f;
    f.name = name;
    if (name == "FIX-A") {
        int m = points > 0 ? points : 21;
        if (m < 2) throw BadParams("FIX-A needs at least 2 points");
        f.description = "path [0,1] with fiber M_3 for t<1 and M_2+C at t=1; weak-centrality fails at the endpoint";
        FiberedAlgebra a;
        a.base = Base::path(0.0, 1.0, m);
        a.fibers.assign(m, {Block{3, true, true}});
        a.fibers[m - 1] = {Block{2, true, true}, Block{1, true, true}};
        a.check();
        f.algebra = a;
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j)
                f.elements["e" + std::to_string(i) + std::to_string(j)] = fix_a_unit(a, i, j);
        CMat nil = CMat::unit(2, 0, 1);
        f.elements["sample_in"] = fix_a_family(a, nil, Cx(0.25, 0.0));  // 0.25 inside the radius-1/2 disk
        f.elements["sample_out"] = fix_a_family(a, nil, Cx(1.5, 0.0));  // outside
        return f;
    }
    if (name == "FIX-B" || name == "FIX-E") {
        int m = points > 0 ? points : 40;
        if (m < 4) throw BadParams("two-block path fixtures need at least 4 points");
        bool traceful = (name == "FIX-B");
        f.description = traceful
                            ? "path [-1,1], two traceful M_2 blocks; c forces a jump of Psi across t=0"
                            : "path [-1,1], two traceless simple-block surrogates; no tracial states anywhere";
        f.algebra = detail::two_block_path_algebra(m, traceful);
        f.elements["c"] = detail::two_block_path_element(f.algebra, 0.0);
        return f;
    }
    if (name == "FIX-C") {
        int m = points > 0 ? points : 40;
        if (m < 4) throw BadParams("two-block path fixtures need at least 4 points");
        if (!(epsilon > 0)) throw BadParams("FIX-C needs epsilon > 0");
        f.description = "FIX-B with the constant block opened into a solid elliptical range (selections exist)";
        f.algebra = detail::two_block_path_algebra(m, true);
        f.elements["c"] = detail::two_block_path_element(f.algebra, epsilon);
        return f;
    }
    if (name == "FIX-D") {
        f.description = "one point: traceless simple 2x2 surrogate (maximal) plus a faithful trace probe; "
                        "Dix membership is tau(a) in W(a mod M)";
        FiberedAlgebra a;
        a.base = Base::discrete(1);
        a.fibers = {{Block{2, false, true}, Block{1, true, false}}};
        a.check();
        f.algebra = a;
        Element in = zero_element(a);
        in.at(0, 0) = CMat::unit(2, 0, 0);  // W = [0,1]
        in.at(0, 1) = CMat(1, 1, {Cx(0.25, 0.0)});
        Element out = in;
        out.at(0, 1) = CMat(1, 1, {Cx(2.0, 0.0)});
        f.elements["a_in"] = in;
        f.elements["a_out"] = out;
        return f;
    }
    throw UnknownFixture("unknown fixture: " + name);
}

/// Forget the path adjacency, keeping fibers (selection becomes pointwise).
inline FiberedAlgebra discretize(const FiberedAlgebra& a) {
    FiberedAlgebra d = a;
    d.base = Base::discrete(a.points());
    return d;
}

struct AlgebraParams {
    int max_points = 8;
    int max_blocks = 3;
    int max_dim = 6;
    bool path = false;
    double traceless_prob = 0.2;
    double probe_prob = 0.1;
};

inline FiberedAlgebra random_algebra(std::uint64_t seed, const AlgebraParams& params = {}) {
    if (params.max_dim > 6 || params.max_blocks > 3 || params.max_points > 40 || params.max_points < 1)
        throw BadParams("random_algebra bounds: dims <= 6, blocks <= 3, points <= 40");
    Rng rng(seed);
    FiberedAlgebra a;
    int npts = 1 + static_cast<int>(rng.integer(params.max_points));
    if (params.path) npts = std::max(npts, 2);
    a.base = params.path ? Base::path(0.0, 1.0, npts) : Base::discrete(npts);
    a.fibers.resize(npts);
    for (int p = 0; p < npts; ++p) {
        int nb = 1 + static_cast<int>(rng.integer(params.max_blocks));
        for (int b = 0; b < nb; ++b) {
            Block blk;
            blk.dim = 1 + static_cast<int>(rng.integer(params.max_dim));
            bool traceless = blk.dim >= 2 && rng.uniform() < params.traceless_prob;
            blk.has_trace = !traceless;
            blk.is_maximal = (b == 0) ? true : rng.uniform() >= params.probe_prob;
            if (!blk.is_maximal) blk.has_trace = true; // probes model traces
            if (blk.dim == 1) blk.has_trace = true;
            a.fibers[p].push_back(blk);
        }
    }
    a.check();
    return a;
}

struct ElementFlags {
    bool selfadjoint = false;
    bool square_zero = false;
    bool trace_zero = false;
};

inline Element random_element(std::uint64_t seed, const FiberedAlgebra& a, const ElementFlags& flags = {}) {
    Rng rng(seed);
    Element e = zero_element(a);
    for (int p = 0; p < a.points(); ++p)
        for (int b = 0; b < a.blocks(p); ++b) {
            int d = a.block(p, b).dim;
            CMat m = flags.square_zero ? rng.square_zero(d) : rng.matrix(d, d);
            if (flags.selfadjoint && !flags.square_zero) m = hermitian_part(m);
            if (flags.trace_zero) m -= CMat::scalar(d, m.trace() / static_cast<double>(d));
            e.at(p, b) = m;
        }
    return e;
}

} // namespace dixlab
