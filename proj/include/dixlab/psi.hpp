#pragma once

#include <utility>
#include <vector>

#include "dixlab/algebra.hpp"
#include "dixlab/config.hpp"
#include "dixlab/convex_region.hpp"
#include "dixlab/numerical_range.hpp"

namespace dixlab {

/// Numerical ranges of an element's blocks, one sweep per block, shared by
/// every decider that needs them.
struct ElementGeometry {
    std::vector<std::vector<ConvexRegion>> block_range; // [point][block], all blocks
    std::vector<ConvexRegion> psi;                      // [point], over maximal blocks
};

inline std::vector<ConvexRegion> maximal_ranges(const FiberedAlgebra& a, const ElementGeometry& g, int p) {
    std::vector<ConvexRegion> out;
    for (int b : a.maximal_blocks(p)) out.push_back(g.block_range[p][b]);
    return out;
}

/// Psi at one point: intersection of the maximal blocks' numerical ranges.
inline ConvexRegion psi_point(const FiberedAlgebra& a, const Element& e, int p) {
    std::vector<ConvexRegion> rs;
    for (int b : a.maximal_blocks(p)) rs.push_back(numerical_range(e.at(p, b)));
    return intersect(rs);
}

inline ElementGeometry analyze(const FiberedAlgebra& a, const Element& e) {
    check_shape(a, e);
    ElementGeometry g;
    g.block_range.resize(a.points());
    g.psi.resize(a.points());
    parallel_for(static_cast<std::size_t>(a.points()), [&](std::size_t p) {
        int pi = static_cast<int>(p);
        g.block_range[p].resize(a.blocks(pi));
        for (int b = 0; b < a.blocks(pi); ++b) g.block_range[p][b] = numerical_range(e.at(pi, b));
        std::vector<ConvexRegion> rs;
        for (int b : a.maximal_blocks(pi)) rs.push_back(g.block_range[p][b]);
        g.psi[p] = intersect(rs);
    });
    return g;
}

/// The set-valued map Psi_a evaluated pointwise.
inline std::vector<ConvexRegion> psi(const FiberedAlgebra& a, const Element& e) {
    return analyze(a, e).psi;
}

/// Psi_{a,r}: union over delta < r of the delta-fattened range intersections,
/// realized at a single sub-r fattening delta* = r (1 - 1e-6). Monotone in r.
inline ConvexRegion psi_r_point(const FiberedAlgebra& a, const ElementGeometry& g, int p, double r) {
    if (!(r > 0)) throw BadParams("psi_r needs r > 0");
    double delta = r * (1.0 - 1e-6);
    ConvexRegion acc;
    bool first = true;
    for (int b : a.maximal_blocks(p)) {
        ConvexRegion fat = fatten(g.block_range[p][b], delta);
        acc = first ? fat : intersect(acc, fat);
        first = false;
        if (acc.is_empty()) break;
    }
    return acc;
}

inline ConvexRegion psi_r_point(const FiberedAlgebra& a, const Element& e, int p, double r) {
    if (!(r > 0)) throw BadParams("psi_r needs r > 0");
    double delta = r * (1.0 - 1e-6);
    ConvexRegion acc;
    bool first = true;
    for (int b : a.maximal_blocks(p)) {
        ConvexRegion fat = fatten(numerical_range(e.at(p, b)), delta);
        acc = first ? fat : intersect(acc, fat);
        first = false;
        if (acc.is_empty()) break;
    }
    return acc;
}

struct Envelopes {
    std::vector<double> h; // upper semicontinuous lower envelope: max of block minima
    std::vector<double> g; // lower semicontinuous upper envelope: min of block maxima
};

/// For selfadjoint elements Psi is the interval [h, g] pointwise (empty when
/// h > g). Computed from block eigenvalue extremes, no sweep needed.
inline Envelopes envelopes(const FiberedAlgebra& a, const Element& e) {
    check_shape(a, e);
    if (!e.selfadjoint()) throw NotSelfadjoint("envelopes need a selfadjoint element");
    Envelopes env;
    env.h.resize(a.points());
    env.g.resize(a.points());
    for (int p = 0; p < a.points(); ++p) {
        double h = -1e300, g = 1e300;
        for (int b : a.maximal_blocks(p)) {
            std::vector<double> ev = hermitian_eigenvalues(e.at(p, b));
            h = std::max(h, ev.front());
            g = std::min(g, ev.back());
        }
        env.h[p] = h;
        env.g[p] = g;
    }
    return env;
}

} // namespace dixlab
