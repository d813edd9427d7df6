#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dixlab/algebra.hpp"
#include "dixlab/psi.hpp"
#include "dixlab/selection.hpp"

namespace dixlab {

enum class Verdict { Yes, No, Unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        default: return "unknown";
    }
}

struct PointReport {
    int point = 0;
    bool psi_empty = false;
    double minimax_radius = 0.0; // 0 when psi nonempty
    bool in_y = false;
    bool conflict = false;
    std::vector<Cx> trace_values;
    std::optional<Cx> f;     // trace pin, when defined
    double pin_dist = 0.0;   // dist(f, psi) when f defined and psi nonempty
};

struct BarReport {
    bool value = false;
    std::vector<PointReport> per_point;
};

struct StepTrendEntry {
    double dt = 0.0;
    double step = 0.0; // min_max_step at this grid spacing
};

struct Evidence {
    double min_max_step = 0.0;
    std::vector<StepTrendEntry> trend; // coarsened grids, native first
};

struct ExactReport {
    Verdict verdict = Verdict::Unknown;
    std::optional<CentralField> certificate;
    std::optional<Evidence> evidence;
    std::string method;
    BarReport bar;
};

struct CqWitness {
    int point = 0;
    int block1 = 0, block2 = 0;
    Cx lambda1, lambda2;
};

struct CqReport {
    bool value = true;
    std::optional<CqWitness> witness;
};

namespace detail {

inline double element_scale(const Element& e) { return std::max(1.0, e.norm()); }

/// Spec emptiness semantics: a Psi value counts as empty only when its
/// minimax radius exceeds 1e-8 (relative to the element scale).
inline bool psi_effectively_empty(const FiberedAlgebra& a, const ElementGeometry& g, int p, double scale,
                                  double* radius_out = nullptr) {
    if (!g.psi[p].is_empty()) {
        if (radius_out) *radius_out = 0.0;
        return false;
    }
    double r = center_minimax(maximal_ranges(a, g, p)).radius;
    if (radius_out) *radius_out = r;
    return r > 1e-8 * scale;
}

} // namespace detail

/// Mag-bar membership: Psi_a nonempty at every Glimm point.
inline BarReport in_mag_bar(const FiberedAlgebra& a, const Element& e, const ElementGeometry& g,
                            bool detailed = false) {
    BarReport rep;
    rep.value = true;
    double scale = detail::element_scale(e);
    std::vector<int> ys = y_set(a);
    for (int p = 0; p < a.points(); ++p) {
        double radius = 0.0;
        bool empty = detail::psi_effectively_empty(a, g, p, scale, &radius);
        if (empty) rep.value = false;
        if (detailed || empty) {
            PointReport pr;
            pr.point = p;
            pr.psi_empty = empty;
            pr.minimax_radius = radius;
            pr.in_y = std::binary_search(ys.begin(), ys.end(), p);
            if (pr.in_y) {
                TraceValue tv = f_trace(a, e, p);
                pr.conflict = tv.conflict;
                pr.trace_values = tv.values;
                if (!tv.conflict) {
                    pr.f = tv.value;
                    if (!g.psi[p].is_empty()) pr.pin_dist = g.psi[p].inf_dist(tv.value);
                }
            }
            rep.per_point.push_back(std::move(pr));
        }
        if (empty && !detailed) break;
    }
    return rep;
}

inline BarReport in_mag_bar(const FiberedAlgebra& a, const Element& e, bool detailed = false) {
    ElementGeometry g = analyze(a, e);
    return in_mag_bar(a, e, g, detailed);
}

/// Dix-bar membership (the spectral conditions): a single trace value per
/// Y point lying in Psi, and Psi nonempty off Y.
inline BarReport in_dix_bar(const FiberedAlgebra& a, const Element& e, const ElementGeometry& g,
                            bool detailed = false) {
    BarReport rep;
    rep.value = true;
    double scale = detail::element_scale(e);
    double intol = 1e-7 * scale;
    std::vector<int> ys = y_set(a);
    for (int p = 0; p < a.points(); ++p) {
        PointReport pr;
        pr.point = p;
        pr.in_y = std::binary_search(ys.begin(), ys.end(), p);
        bool bad = false;
        pr.psi_empty = detail::psi_effectively_empty(a, g, p, scale, &pr.minimax_radius);
        if (pr.in_y) {
            TraceValue tv = f_trace(a, e, p);
            pr.conflict = tv.conflict;
            pr.trace_values = tv.values;
            if (tv.conflict) {
                bad = true;
            } else {
                pr.f = tv.value;
                if (g.psi[p].is_empty()) {
                    pr.pin_dist = pr.minimax_radius;
                    bad = pr.psi_empty || pr.pin_dist > intol;
                } else {
                    pr.pin_dist = g.psi[p].inf_dist(tv.value);
                    bad = pr.pin_dist > intol;
                }
            }
        } else {
            bad = pr.psi_empty;
        }
        if (bad) rep.value = false;
        if (detailed || bad) rep.per_point.push_back(std::move(pr));
        if (bad && !detailed) break;
    }
    return rep;
}

inline BarReport in_dix_bar(const FiberedAlgebra& a, const Element& e, bool detailed = false) {
    ElementGeometry g = analyze(a, e);
    return in_dix_bar(a, e, g, detailed);
}

/// CQ membership: fails exactly when some fiber carries two maximal blocks on
/// which the element is scalar with distinct values.
inline CqReport in_cq(const FiberedAlgebra& a, const Element& e, double scalar_tol = 1e-9,
                      double gap_tol = 1e-7) {
    check_shape(a, e);
    CqReport rep;
    for (int p = 0; p < a.points(); ++p) {
        std::vector<std::pair<int, Cx>> scalars;
        for (int b : a.maximal_blocks(p)) {
            const CMat& m = e.at(p, b);
            Cx lam = m.trace() / static_cast<double>(m.rows());
            CMat dev = m - CMat::scalar(m.rows(), lam);
            if (operator_norm(dev) <= scalar_tol * std::max(1.0, operator_norm(m)))
                scalars.emplace_back(b, lam);
        }
        for (std::size_t i = 0; i < scalars.size(); ++i)
            for (std::size_t j = i + 1; j < scalars.size(); ++j)
                if (std::abs(scalars[i].second - scalars[j].second) > gap_tol) {
                    rep.value = false;
                    rep.witness = CqWitness{p, scalars[i].first, scalars[j].first, scalars[i].second,
                                            scalars[j].second};
                    return rep;
                }
    }
    return rep;
}

struct DecideOptions {
    double lipschitz = 20.0; // rate budget for PathGrid selection verdicts
    int refine = 2;          // coarsening levels reported in Unknown evidence
    bool detailed = false;   // keep per-point reports for all points
};

namespace detail {

/// Non-Y fibers all have a single maximal block: the regime where Dix-bar
/// membership is exact for Dix membership.
inline bool dix_exact_available(const FiberedAlgebra& a) {
    std::vector<int> ys = y_set(a);
    for (int p = 0; p < a.points(); ++p) {
        if (std::binary_search(ys.begin(), ys.end(), p)) continue;
        if (a.maximal_blocks(p).size() != 1) return false;
    }
    return true;
}

inline bool weakly_central_surrogate(const FiberedAlgebra& a) {
    for (int p = 0; p < a.points(); ++p)
        if (a.maximal_blocks(p).size() != 1) return false;
    return true;
}

inline std::map<int, Cx> trace_pins(const FiberedAlgebra& a, const Element& e) {
    std::map<int, Cx> pins;
    for (int p : y_set(a)) {
        TraceValue tv = f_trace(a, e, p);
        if (!tv.conflict) pins[p] = tv.value;
    }
    return pins;
}

/// Pointwise certificate: pins where pinned, nearest-point chain elsewhere.
/// Falls back to minimax centers at tolerated-empty Psi points.
inline CentralField pointwise_certificate(const FiberedAlgebra& a, const ElementGeometry& g,
                                          const std::map<int, Cx>& pins) {
    SelectionProblem prob;
    prob.base = a.base;
    prob.regions = g.psi;
    prob.pins = pins;
    bool any_empty = false;
    for (const ConvexRegion& r : g.psi) any_empty = any_empty || r.is_empty();
    if (!any_empty) {
        SelectionOutcome out = feasible(prob);
        if (out.feasible) return out.selection;
    }
    CentralField z(a.points());
    for (int p = 0; p < a.points(); ++p) {
        auto it = pins.find(p);
        if (it != pins.end())
            z[p] = it->second;
        else if (!g.psi[p].is_empty())
            z[p] = g.psi[p].representative();
        else
            z[p] = center_minimax(maximal_ranges(a, g, p)).center;
    }
    return z;
}

/// Coarsened copies of a selection problem (every 2^level-th grid point) for
/// the Unknown-evidence trend.
inline Evidence evidence_for(const SelectionProblem& prob, int refine) {
    Evidence ev;
    ev.min_max_step = min_max_step(prob);
    ev.trend.push_back({prob.base.dt(), ev.min_max_step});
    int stride = 1;
    for (int level = 1; level <= refine; ++level) {
        stride *= 2;
        int m = (static_cast<int>(prob.regions.size()) - 1) / stride + 1;
        if (m < 3) break;
        SelectionProblem sub;
        sub.base = Base::path(prob.base.t_min, prob.base.t(stride * (m - 1)), m);
        for (int i = 0; i < m; ++i) sub.regions.push_back(prob.regions[i * stride]);
        for (auto [p, v] : prob.pins)
            if (p % stride == 0) sub.pins[p / stride] = v;
        ev.trend.push_back({sub.base.dt(), min_max_step(sub)});
    }
    return ev;
}

} // namespace detail

/// Mag membership. Sound tri-state: No only via the Mag-bar obstruction,
/// Yes via a verified certificate or an exactness regime, Unknown otherwise
/// with the min-max-step trend as evidence.
inline ExactReport in_mag(const FiberedAlgebra& a, const Element& e, const DecideOptions& opts = {}) {
    ElementGeometry g = analyze(a, e);
    ExactReport rep;
    rep.bar = in_mag_bar(a, e, g, opts.detailed);
    if (!rep.bar.value) {
        rep.verdict = Verdict::No;
        rep.method = "psi empty at some point";
        return rep;
    }
    if (e.selfadjoint()) {
        rep.verdict = Verdict::Yes;
        rep.method = "selfadjoint spectral condition";
        rep.certificate = detail::pointwise_certificate(a, g, {});
        return rep;
    }
    if (!a.base.is_path()) {
        rep.verdict = Verdict::Yes;
        rep.method = "discrete base: pointwise selection";
        rep.certificate = detail::pointwise_certificate(a, g, {});
        return rep;
    }
    if (detail::weakly_central_surrogate(a)) {
        rep.verdict = Verdict::Yes;
        rep.method = "weakly central: single maximal block per fiber";
        rep.certificate = detail::pointwise_certificate(a, g, {});
        return rep;
    }
    if (!y_set(a).empty() && detail::dix_exact_available(a)) {
        BarReport dbar = in_dix_bar(a, e, g, false);
        if (dbar.value) {
            rep.verdict = Verdict::Yes;
            rep.method = "via Dix membership (trace-pinned exactness)";
            rep.certificate = detail::pointwise_certificate(a, g, detail::trace_pins(a, e));
            return rep;
        }
    }

    SelectionProblem prob;
    prob.base = a.base;
    prob.regions = g.psi;
    prob.lipschitz = opts.lipschitz;
    bool any_empty = false;
    for (const ConvexRegion& r : g.psi) any_empty = any_empty || r.is_empty();
    if (!any_empty) {
        SelectionOutcome out = feasible(prob);
        if (out.feasible) {
            rep.verdict = Verdict::Yes;
            rep.method = "lipschitz selection found";
            rep.certificate = out.selection;
            return rep;
        }
        rep.verdict = Verdict::Unknown;
        rep.method = "no selection at the given rate budget";
        rep.evidence = detail::evidence_for(prob, opts.refine);
        return rep;
    }
    rep.verdict = Verdict::Unknown;
    rep.method = "psi nonempty only within tolerance";
    return rep;
}

/// Dix membership. Trace pins come from f_trace on Y; exact on selfadjoint
/// elements, discrete bases, and the singleton-fiber regime off Y. When Y is
/// empty the Dix and Mag verdicts coincide.
inline ExactReport in_dix(const FiberedAlgebra& a, const Element& e, const DecideOptions& opts = {}) {
    ElementGeometry g = analyze(a, e);
    if (y_set(a).empty()) {
        ExactReport rep = in_mag(a, e, opts);
        rep.method = "no traces: Dix coincides with Mag; " + rep.method;
        return rep;
    }
    ExactReport rep;
    rep.bar = in_dix_bar(a, e, g, opts.detailed);
    if (!rep.bar.value) {
        rep.verdict = Verdict::No;
        rep.method = "trace conflict or pin outside psi";
        return rep;
    }
    std::map<int, Cx> pins = detail::trace_pins(a, e);
    if (e.selfadjoint()) {
        rep.verdict = Verdict::Yes;
        rep.method = "selfadjoint spectral condition";
        rep.certificate = detail::pointwise_certificate(a, g, pins);
        return rep;
    }
    if (!a.base.is_path()) {
        rep.verdict = Verdict::Yes;
        rep.method = "discrete base: pointwise pinned selection";
        rep.certificate = detail::pointwise_certificate(a, g, pins);
        return rep;
    }
    if (detail::dix_exact_available(a)) {
        rep.verdict = Verdict::Yes;
        rep.method = "singleton fibers off Y: Dix equals Dix-bar";
        rep.certificate = detail::pointwise_certificate(a, g, pins);
        return rep;
    }

    SelectionProblem prob;
    prob.base = a.base;
    prob.regions = g.psi;
    prob.pins = pins;
    prob.lipschitz = opts.lipschitz;
    bool any_empty = false;
    for (const ConvexRegion& r : g.psi) any_empty = any_empty || r.is_empty();
    if (!any_empty) {
        SelectionOutcome out = feasible(prob);
        if (out.feasible) {
            rep.verdict = Verdict::Yes;
            rep.method = "pinned lipschitz selection found";
            rep.certificate = out.selection;
            return rep;
        }
        rep.verdict = Verdict::Unknown;
        rep.method = "no pinned selection at the given rate budget";
        rep.evidence = detail::evidence_for(prob, opts.refine);
        return rep;
    }
    rep.verdict = Verdict::Unknown;
    rep.method = "psi nonempty only within tolerance";
    return rep;
}

/// Distance between the Magajna sets of two elements of the same algebra:
/// worst Hausdorff distance between block numerical ranges.
inline double magajna_distance(const FiberedAlgebra& a, const Element& x, const Element& y) {
    check_shape(a, x);
    check_shape(a, y);
    double worst = 0.0;
    for (int p = 0; p < a.points(); ++p)
        for (int b : a.maximal_blocks(p))
            worst = std::max(worst, hausdorff(numerical_range(x.at(p, b)), numerical_range(y.at(p, b))));
    return worst;
}

struct CertificateCheck {
    bool ok = true;
    double max_psi_dist = 0.0;
    double max_pin_dev = 0.0;
};

/// Certificates must sit in Psi pointwise and match the trace pins on Y.
inline CertificateCheck verify_certificate(const FiberedAlgebra& a, const Element& e,
                                           const CentralField& z, bool check_pins) {
    CertificateCheck chk;
    ElementGeometry g = analyze(a, e);
    double tol = 1e-7 * detail::element_scale(e);
    for (int p = 0; p < a.points(); ++p) {
        if (g.psi[p].is_empty()) {
            double r = center_minimax(maximal_ranges(a, g, p)).radius;
            chk.max_psi_dist = std::max(chk.max_psi_dist, r);
            if (r > tol) chk.ok = false;
            continue;
        }
        double d = g.psi[p].inf_dist(z[p]);
        chk.max_psi_dist = std::max(chk.max_psi_dist, d);
        if (d > tol) chk.ok = false;
    }
    if (check_pins) {
        for (int p : y_set(a)) {
            TraceValue tv = f_trace(a, e, p);
            if (tv.conflict) {
                chk.ok = false;
                continue;
            }
            double d = std::abs(z[p] - tv.value);
            chk.max_pin_dev = std::max(chk.max_pin_dev, d);
            if (d > tol) chk.ok = false;
        }
    }
    return chk;
}

} // namespace dixlab
