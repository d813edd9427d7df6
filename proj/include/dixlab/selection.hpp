#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "dixlab/algebra.hpp"
#include "dixlab/convex_region.hpp"
#include "dixlab/psi.hpp"

namespace dixlab {

/// A continuous-selection surrogate problem: pick one value per base point,
/// inside the point's region, honoring trace pins, with adjacent steps at
/// most lipschitz * dt on PathGrid bases (infinity = no step constraint).
struct SelectionProblem {
    Base base;
    std::vector<ConvexRegion> regions;      // per point
    std::map<int, Cx> pins;                 // point -> pinned value
    double lipschitz = std::numeric_limits<double>::infinity();

    double step_bound() const {
        if (!base.is_path()) return std::numeric_limits<double>::infinity();
        return lipschitz * base.dt();
    }
};

struct SelectionOutcome {
    bool feasible = false;
    CentralField selection;  // filled when feasible
    int witness_cell = -1;   // infeasible: reachability died entering this point
    bool bad_pin = false;    // the pin at witness_cell violates its own region
};

namespace detail {

inline double pin_tol(const ConvexRegion& r, Cx pin) {
    double s = std::max(1.0, std::abs(pin));
    if (!r.is_empty()) s = std::max(s, geo::coord_scale(r.vertices()));
    return 1e-7 * s;
}

/// region cap pin: {pin} when the pin sits in the region, empty otherwise.
inline ConvexRegion apply_pin(const ConvexRegion& r, Cx pin) {
    if (r.is_empty()) return r;
    if (r.inf_dist(pin) <= pin_tol(r, pin)) return ConvexRegion::point(pin);
    return ConvexRegion::empty_region();
}

} // namespace detail

/// Forward reachability propagation with backward nearest-point extraction.
/// Exact for the polygon class: a selection with steps <= L dt exists iff the
/// propagation keeps every reachable set nonempty.
inline SelectionOutcome feasible(const SelectionProblem& prob) {
    int n = static_cast<int>(prob.regions.size());
    if (n != prob.base.points) throw ShapeMismatch("selection problem region count mismatch");
    SelectionOutcome out;

    auto pinned_region = [&](int i) -> ConvexRegion {
        auto it = prob.pins.find(i);
        if (it == prob.pins.end()) return prob.regions[i];
        return detail::apply_pin(prob.regions[i], it->second);
    };
    auto pin_is_bad = [&](int i) {
        auto it = prob.pins.find(i);
        if (it == prob.pins.end()) return false;
        return prob.regions[i].is_empty() ||
               prob.regions[i].inf_dist(it->second) > detail::pin_tol(prob.regions[i], it->second);
    };

    double step = prob.step_bound();
    bool bounded = std::isfinite(step);

    std::vector<ConvexRegion> reach(n);
    for (int i = 0; i < n; ++i) {
        ConvexRegion r = pinned_region(i);
        if (bounded && i > 0 && !reach[i - 1].is_empty())
            r = intersect(r, fatten(reach[i - 1], step));
        reach[i] = r;
        if (r.is_empty()) {
            out.feasible = false;
            out.witness_cell = i;
            out.bad_pin = pin_is_bad(i);
            return out;
        }
    }

    out.feasible = true;
    out.selection.resize(n);
    auto it_last = prob.pins.find(n - 1);
    out.selection[n - 1] = (it_last != prob.pins.end()) ? it_last->second : reach[n - 1].representative();
    for (int i = n - 2; i >= 0; --i) out.selection[i] = reach[i].nearest(out.selection[i + 1]);
    return out;
}

/// Smallest step bound s = L dt at which the problem is feasible, found by
/// bisection (feasibility is monotone in the step bound).
inline double min_max_step(const SelectionProblem& prob) {
    if (!prob.base.is_path()) throw UnsupportedBase("min_max_step needs a PathGrid base");
    SelectionProblem work = prob;

    auto feas_at = [&](double step) {
        work.lipschitz = step / work.base.dt();
        return feasible(work).feasible;
    };

    // pointwise feasibility is required at any step
    {
        SelectionProblem unlimited = prob;
        unlimited.lipschitz = std::numeric_limits<double>::infinity();
        if (!feasible(unlimited).feasible)
            throw InfeasibleAtAnyStep("a region (after pinning) is empty");
    }
    if (feas_at(0.0)) return 0.0;

    double diam = 1e-12;
    Cx lo_pt(1e300, 1e300), hi_pt(-1e300, -1e300);
    for (const ConvexRegion& r : prob.regions)
        for (Cx v : r.vertices()) {
            lo_pt = Cx(std::min(lo_pt.real(), v.real()), std::min(lo_pt.imag(), v.imag()));
            hi_pt = Cx(std::max(hi_pt.real(), v.real()), std::max(hi_pt.imag(), v.imag()));
        }
    diam = std::max(diam, std::abs(hi_pt - lo_pt));

    double hi = diam * 1.01 + 1e-9;
    int guard = 0;
    while (!feas_at(hi)) {
        hi *= 2.0;
        if (++guard > 60) throw NoConvergence("min_max_step could not bracket feasibility");
    }
    double lo = 0.0;
    while (hi - lo > 1e-6 * diam) {
        double mid = 0.5 * (lo + hi);
        if (feas_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// dist(M_A(a), Z(A)) surrogate: smallest r whose sub-r fattened range
/// intersections admit a selection at the given rate budget. The default
/// (infinite) budget matches the pointwise spectral condition of the distance
/// theorem; finite budgets are a continuity diagnostic.
inline double dist_to_center_via_bisection(const FiberedAlgebra& a, const Element& e,
                                           double lipschitz = std::numeric_limits<double>::infinity()) {
    ElementGeometry g = analyze(a, e);
    int n = a.points();

    auto feas_at = [&](double r) {
        SelectionProblem prob;
        prob.base = a.base;
        prob.lipschitz = lipschitz;
        prob.regions.resize(n);
        for (int p = 0; p < n; ++p) {
            prob.regions[p] = psi_r_point(a, g, p, r);
            if (prob.regions[p].is_empty()) return false;
        }
        return feasible(prob).feasible;
    };

    double scale = std::max(1.0, e.norm());
    if (feas_at(1e-12 * scale)) return 0.0;
    double hi = 1e-9 * scale;
    int guard = 0;
    while (!feas_at(hi)) {
        hi *= 2.0;
        if (++guard > 80) throw NoConvergence("dist_to_center could not bracket feasibility");
    }
    double lo = 0.0;
    for (int it = 0; it < 60 && hi - lo > 1e-12 * scale; ++it) {
        double mid = 0.5 * (lo + hi);
        if (feas_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

/// On Discrete bases the distance is the worst per-point minimax radius of
/// the maximal blocks' ranges; PathGrid bases go through the bisection.
inline double dist_to_center(const FiberedAlgebra& a, const Element& e,
                             double lipschitz = std::numeric_limits<double>::infinity()) {
    if (!a.base.is_path()) {
        ElementGeometry g = analyze(a, e);
        double worst = 0.0;
        for (int p = 0; p < a.points(); ++p)
            worst = std::max(worst, center_minimax(maximal_ranges(a, g, p)).radius);
        return worst;
    }
    return dist_to_center_via_bisection(a, e, lipschitz);
}

} // namespace dixlab
