#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "dixlab/config.hpp"
#include "dixlab/error.hpp"

namespace dixlab {

using Cx = std::complex<double>;

namespace geo {

inline double cross(Cx a, Cx b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Cx a, Cx b) { return a.real() * b.real() + a.imag() * b.imag(); }

inline bool lex_less(Cx a, Cx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

inline double coord_scale(const std::vector<Cx>& pts) {
    double s = 1.0;
    for (Cx p : pts) s = std::max({s, std::abs(p.real()), std::abs(p.imag())});
    return s;
}

/// Convex hull (monotone chain), CCW, collinear points dropped.
inline std::vector<Cx> hull(std::vector<Cx> pts) {
    if (pts.empty()) return pts;
    double scale = coord_scale(pts);
    std::sort(pts.begin(), pts.end(), lex_less);
    // merge near-duplicates
    std::vector<Cx> uniq;
    for (Cx p : pts) {
        if (uniq.empty() || std::abs(p - uniq.back()) > 1e-13 * scale) uniq.push_back(p);
    }
    pts.swap(uniq);
    int n = static_cast<int>(pts.size());
    if (n <= 2) return pts;

    auto collinear = [scale](Cx a, Cx b, Cx c) {
        return std::abs(cross(b - a, c - b)) <= 1e-13 * scale * (std::abs(b - a) + std::abs(c - b));
    };
    std::vector<Cx> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) { // lower
        while (k >= 2 && (cross(h[k - 1] - h[k - 2], pts[i] - h[k - 1]) < 0 || collinear(h[k - 2], h[k - 1], pts[i])))
            --k;
        h[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) { // upper
        while (k >= lower && (cross(h[k - 1] - h[k - 2], pts[i] - h[k - 1]) < 0 || collinear(h[k - 2], h[k - 1], pts[i])))
            --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

inline double point_segment_dist(Cx p, Cx a, Cx b) {
    Cx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

inline Cx project_on_segment(Cx p, Cx a, Cx b) {
    Cx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return a;
    double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return a + t * d;
}

/// Unit disk surrogate: the inscribed K-gon on the global direction grid.
inline const std::vector<Cx>& unit_gon(int k) {
    static std::map<int, std::vector<Cx>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    std::vector<Cx> v(k);
    for (int i = 0; i < k; ++i) {
        double th = 2.0 * M_PI * i / k;
        v[i] = Cx(std::cos(th), std::sin(th));
    }
    return cache.emplace(k, std::move(v)).first->second;
}

/// Rotate a CCW convex chain to start at its lexicographically smallest vertex
/// ordered by (y, x) -- the canonical start for Minkowski edge merging.
inline std::vector<Cx> rotate_to_bottom(std::vector<Cx> v) {
    auto cmp = [](Cx a, Cx b) {
        if (a.imag() != b.imag()) return a.imag() < b.imag();
        return a.real() < b.real();
    };
    auto it = std::min_element(v.begin(), v.end(), cmp);
    std::rotate(v.begin(), it, v.end());
    return v;
}

/// Minkowski sum of two convex CCW vertex chains (either may be degenerate).
inline std::vector<Cx> minkowski(const std::vector<Cx>& a0, const std::vector<Cx>& b0) {
    if (a0.empty() || b0.empty()) return {};
    if (a0.size() == 1) {
        std::vector<Cx> out = b0;
        for (Cx& p : out) p += a0[0];
        return out;
    }
    if (b0.size() == 1) {
        std::vector<Cx> out = a0;
        for (Cx& p : out) p += b0[0];
        return out;
    }
    std::vector<Cx> a = rotate_to_bottom(a0);
    std::vector<Cx> b = rotate_to_bottom(b0);
    std::size_t n = a.size(), m = b.size();
    auto edge = [](const std::vector<Cx>& v, std::size_t i) { return v[(i + 1) % v.size()] - v[i]; };
    auto ang = [](Cx e) {
        double t = std::atan2(e.imag(), e.real());
        if (t < 0) t += 2.0 * M_PI;
        return t;
    };
    std::vector<Cx> out;
    out.reserve(n + m + 1);
    Cx cur = a[0] + b[0];
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        out.push_back(cur);
        if (j >= m || (i < n && ang(edge(a, i)) <= ang(edge(b, j)))) {
            cur += edge(a, i);
            ++i;
        } else {
            cur += edge(b, j);
            ++j;
        }
    }
    return out;
}

} // namespace geo

/// A compact convex subset of the complex plane. Canonical representation is
/// the CCW vertex chain of a convex polygon; a point and a segment are the
/// degenerate one- and two-vertex cases, and the empty set is representable.
/// Support values over the fixed global angle grid are derived views.
class ConvexRegion {
  public:
    ConvexRegion() : empty_(true) {}

    static ConvexRegion empty_region() { return ConvexRegion(); }
    static ConvexRegion point(Cx p) { return ConvexRegion(std::vector<Cx>{p}); }
    static ConvexRegion segment(Cx a, Cx b) { return ConvexRegion(geo::hull({a, b})); }
    static ConvexRegion from_points(std::vector<Cx> pts) { return ConvexRegion(geo::hull(std::move(pts))); }
    static ConvexRegion disk(Cx center, double radius) {
        if (radius < 0) throw BadParams("disk radius must be nonnegative");
        if (radius == 0) return point(center);
        std::vector<Cx> v = geo::unit_gon(grid_angles());
        for (Cx& p : v) p = center + radius * p;
        return ConvexRegion(std::move(v));
    }
    /// Construct from already-convex CCW vertices (re-canonicalized).
    static ConvexRegion from_hull_vertices(std::vector<Cx> verts) {
        return ConvexRegion(geo::hull(std::move(verts)));
    }

    bool is_empty() const { return empty_; }
    const std::vector<Cx>& vertices() const {
        if (empty_) throw EmptyRegion("empty region has no vertices");
        return verts_;
    }
    bool is_point() const { return !empty_ && verts_.size() == 1; }
    bool is_segment() const { return !empty_ && verts_.size() == 2; }

    double support_value(double theta) const {
        if (empty_) throw EmptyRegion("support of empty region");
        Cx u(std::cos(theta), std::sin(theta));
        double s = -std::numeric_limits<double>::infinity();
        for (Cx v : verts_) s = std::max(s, geo::dot(v, u));
        return s;
    }

    /// Support values over the global grid; empty regions report -inf.
    std::vector<double> support_values() const {
        int k = grid_angles();
        std::vector<double> s(k, -std::numeric_limits<double>::infinity());
        if (empty_) return s;
        for (int i = 0; i < k; ++i) s[i] = support_value(2.0 * M_PI * i / k);
        return s;
    }

    double diameter() const {
        if (empty_) return 0.0;
        double d = 0.0;
        for (std::size_t i = 0; i < verts_.size(); ++i)
            for (std::size_t j = i + 1; j < verts_.size(); ++j) d = std::max(d, std::abs(verts_[i] - verts_[j]));
        return d;
    }

    double area() const {
        if (empty_ || verts_.size() < 3) return 0.0;
        double a = 0.0;
        for (std::size_t i = 0; i < verts_.size(); ++i)
            a += geo::cross(verts_[i], verts_[(i + 1) % verts_.size()]);
        return 0.5 * a;
    }

    /// Deterministic interior representative: the point of the region nearest
    /// to the origin (selection extraction seeds and zero-certificates agree).
    Cx representative() const { return nearest(Cx(0.0, 0.0)); }

    Cx centroid() const {
        if (empty_) throw EmptyRegion("centroid of empty region");
        double a2 = std::abs(area());
        if (verts_.size() >= 3 && a2 > 1e-24) {
            double ax = 0.0;
            Cx c = 0.0;
            for (std::size_t i = 0; i < verts_.size(); ++i) {
                Cx p = verts_[i], q = verts_[(i + 1) % verts_.size()];
                double w = geo::cross(p, q);
                ax += w;
                c += w * (p + q);
            }
            return c / (3.0 * ax);
        }
        Cx s = 0.0;
        for (Cx v : verts_) s += v;
        return s / static_cast<double>(verts_.size());
    }

    /// Exact Euclidean projection onto the region.
    Cx nearest(Cx p) const {
        if (empty_) throw EmptyRegion("projection onto empty region");
        if (verts_.size() == 1) return verts_[0];
        if (verts_.size() == 2) return geo::project_on_segment(p, verts_[0], verts_[1]);
        bool inside = true;
        for (std::size_t i = 0; i < verts_.size(); ++i) {
            if (geo::cross(verts_[(i + 1) % verts_.size()] - verts_[i], p - verts_[i]) < 0) {
                inside = false;
                break;
            }
        }
        if (inside) return p;
        Cx best = verts_[0];
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < verts_.size(); ++i) {
            Cx q = geo::project_on_segment(p, verts_[i], verts_[(i + 1) % verts_.size()]);
            double d = std::abs(p - q);
            if (d < bd) {
                bd = d;
                best = q;
            }
        }
        return best;
    }

    /// Euclidean distance from a point; zero iff the point belongs to the region.
    double inf_dist(Cx p) const { return std::abs(p - nearest(p)); }

    bool contains(Cx p, double tol) const {
        if (empty_) return false;
        return inf_dist(p) <= tol;
    }

    ConvexRegion translated(Cx shift) const {
        if (empty_) return *this;
        std::vector<Cx> v = verts_;
        for (Cx& p : v) p += shift;
        return ConvexRegion(std::move(v));
    }

    /// alpha * R + beta, with complex alpha acting as rotation + scaling.
    ConvexRegion transformed(Cx alpha, Cx beta) const {
        if (empty_) return *this;
        std::vector<Cx> v = verts_;
        for (Cx& p : v) p = alpha * p + beta;
        return ConvexRegion(geo::hull(std::move(v)));
    }

  private:
    explicit ConvexRegion(std::vector<Cx> verts) : verts_(std::move(verts)), empty_(verts_.empty()) {}

    friend ConvexRegion intersect(const ConvexRegion&, const ConvexRegion&);
    friend ConvexRegion fatten(const ConvexRegion&, double);

    std::vector<Cx> verts_; // CCW, canonical
    bool empty_ = true;
};

namespace geo {

/// Clip a segment [a, b] against a CCW polygon; returns surviving endpoints.
inline std::vector<Cx> clip_segment_by_polygon(Cx a, Cx b, const std::vector<Cx>& poly) {
    double t0 = 0.0, t1 = 1.0;
    Cx d = b - a;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Cx p = poly[i], q = poly[(i + 1) % poly.size()];
        Cx e = q - p;
        double s0 = cross(e, a - p);
        double sd = cross(e, d);
        // inside is s(t) = s0 + t*sd >= 0
        if (std::abs(sd) < 1e-300) {
            if (s0 < 0) return {};
            continue;
        }
        double tc = -s0 / sd;
        if (sd > 0)
            t0 = std::max(t0, tc);
        else
            t1 = std::min(t1, tc);
        if (t0 > t1) return {};
    }
    if (t0 > t1) return {};
    return {a + t0 * d, a + t1 * d};
}

/// Sutherland-Hodgman clip of a convex CCW subject by a convex CCW clipper.
inline std::vector<Cx> clip_polygon_by_polygon(std::vector<Cx> subject, const std::vector<Cx>& clip) {
    std::vector<Cx> next;
    for (std::size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
        Cx p = clip[i], q = clip[(i + 1) % clip.size()];
        Cx e = q - p;
        next.clear();
        std::size_t n = subject.size();
        // quick accept: whole subject inside this half-plane
        double minside = std::numeric_limits<double>::infinity();
        for (Cx v : subject) minside = std::min(minside, cross(e, v - p));
        if (minside >= 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            Cx cur = subject[j], nxt = subject[(j + 1) % n];
            double sc = cross(e, cur - p);
            double sn = cross(e, nxt - p);
            if (sc >= 0) next.push_back(cur);
            if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
                double t = sc / (sc - sn);
                next.push_back(cur + t * (nxt - cur));
            }
        }
        subject.swap(next);
    }
    return subject;
}

/// Intersection of two segments, returned as 0-2 endpoints.
inline std::vector<Cx> seg_seg_intersection(Cx a0, Cx a1, Cx b0, Cx b1) {
    Cx d1 = a1 - a0, d2 = b1 - b0;
    double l1 = std::abs(d1), l2 = std::abs(d2);
    double scale = std::max({1.0, std::abs(a0), std::abs(a1), std::abs(b0), std::abs(b1)});
    double denom = cross(d1, d2);
    if (std::abs(denom) > 1e-12 * std::max(l1 * l2, 1e-300)) {
        double t = cross(b0 - a0, d2) / denom;
        double s = cross(b0 - a0, d1) / denom;
        double tt = 1e-9 / std::max(l1, 1e-300) * scale; // parameter tolerance ~1e-9 absolute
        double ts = 1e-9 / std::max(l2, 1e-300) * scale;
        if (t < -tt || t > 1 + tt || s < -ts || s > 1 + ts) return {};
        return {a0 + std::clamp(t, 0.0, 1.0) * d1};
    }
    // near-parallel: require collinearity (distance to the supporting line),
    // then overlap the parameter ranges
    if (l1 < 1e-300) { // a is a point
        if (point_segment_dist(a0, b0, b1) <= 1e-9 * scale) return {a0};
        return {};
    }
    if (std::abs(cross(d1, b0 - a0)) / l1 > 1e-9 * scale ||
        std::abs(cross(d1, b1 - a0)) / l1 > 1e-9 * scale)
        return {};
    double inv = 1.0 / std::norm(d1);
    double u0 = dot(b0 - a0, d1) * inv, u1 = dot(b1 - a0, d1) * inv;
    double lo = std::max(0.0, std::min(u0, u1));
    double hi = std::min(1.0, std::max(u0, u1));
    if (lo > hi + 1e-12) return {};
    hi = std::max(lo, hi);
    return {a0 + lo * d1, a0 + hi * d1};
}

} // namespace geo

/// Exact intersection for the polygon class (degenerate cases included).
inline ConvexRegion intersect(const ConvexRegion& a, const ConvexRegion& b) {
    if (a.is_empty() || b.is_empty()) return ConvexRegion::empty_region();
    const std::vector<Cx>& va = a.vertices();
    const std::vector<Cx>& vb = b.vertices();
    double scale = std::max(geo::coord_scale(va), geo::coord_scale(vb));
    double touch = 1e-9 * scale;

    if (a.is_point()) return b.contains(va[0], touch) ? a : ConvexRegion::empty_region();
    if (b.is_point()) return a.contains(vb[0], touch) ? b : ConvexRegion::empty_region();

    std::vector<Cx> out;
    if (a.is_segment() && b.is_segment())
        out = geo::seg_seg_intersection(va[0], va[1], vb[0], vb[1]);
    else if (a.is_segment())
        out = geo::clip_segment_by_polygon(va[0], va[1], vb);
    else if (b.is_segment())
        out = geo::clip_segment_by_polygon(vb[0], vb[1], va);
    else
        out = geo::clip_polygon_by_polygon(va, vb);
    return ConvexRegion::from_points(std::move(out));
}

inline ConvexRegion intersect(const std::vector<ConvexRegion>& regions) {
    if (regions.empty()) throw BadParams("intersect needs at least one region");
    ConvexRegion acc = regions[0];
    for (std::size_t i = 1; i < regions.size() && !acc.is_empty(); ++i) acc = intersect(acc, regions[i]);
    return acc;
}

/// Minkowski sum with delta times the grid disk (the inscribed K-gon on the
/// global angle grid). Grid fattening is exactly additive:
/// fatten(fatten(r, d1), d2) == fatten(r, d1 + d2).
inline ConvexRegion fatten(const ConvexRegion& r, double delta) {
    if (r.is_empty()) throw EmptyRegion("fatten of empty region");
    if (delta < 0) throw BadParams("fatten requires delta >= 0");
    if (delta == 0) return r;
    std::vector<Cx> disk = geo::unit_gon(grid_angles());
    for (Cx& p : disk) p *= delta;
    return ConvexRegion::from_points(geo::minkowski(r.vertices(), disk));
}

inline double inf_dist(const ConvexRegion& r, Cx p) {
    if (r.is_empty()) throw EmptyRegion("inf_dist from empty region");
    return r.inf_dist(p);
}

/// Hausdorff distance between convex bodies (exact for the polygon class:
/// the supremum is attained at vertices).
inline double hausdorff(const ConvexRegion& a, const ConvexRegion& b) {
    if (a.is_empty() || b.is_empty()) throw EmptyRegion("hausdorff of empty region");
    double d = 0.0;
    for (Cx v : a.vertices()) d = std::max(d, b.inf_dist(v));
    for (Cx v : b.vertices()) d = std::max(d, a.inf_dist(v));
    return d;
}

namespace geo {

/// True when every region is within `band` of the horizontal axis. The
/// selfadjoint fast path: minimax over real intervals is closed-form.
inline bool all_horizontal(const std::vector<ConvexRegion>& regions, double band) {
    for (const ConvexRegion& r : regions)
        for (Cx v : r.vertices())
            if (std::abs(v.imag()) > band) return false;
    return true;
}

} // namespace geo

struct MinimaxCenter {
    Cx center;
    double radius; // min over lambda of max_j dist(lambda, region_j)
};

/// Smallest r such that the r-fattened regions have a common point, with a
/// witness point. Solved by bisection on r over exact intersections
/// (monotone feasibility), which reaches the global optimum of the convex
/// minimax objective.
inline MinimaxCenter center_minimax(const std::vector<ConvexRegion>& regions) {
    if (regions.empty()) throw BadParams("center_minimax needs at least one region");
    for (const ConvexRegion& r : regions)
        if (r.is_empty()) throw EmptyRegion("center_minimax with an empty region");

    ConvexRegion base = intersect(regions);
    if (!base.is_empty()) return {base.representative(), 0.0};

    // interval fast path
    if (geo::all_horizontal(regions, 1e-12)) {
        double hmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (const ConvexRegion& r : regions) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (Cx v : r.vertices()) {
                lo = std::min(lo, v.real());
                hi = std::max(hi, v.real());
            }
            hmax = std::max(hmax, lo);
            gmin = std::min(gmin, hi);
        }
        double rstar = std::max(0.0, 0.5 * (hmax - gmin));
        return {Cx(0.5 * (hmax + gmin), 0.0), rstar};
    }

    auto feasible_set = [&](double r) {
        ConvexRegion acc = fatten(regions[0], r);
        for (std::size_t i = 1; i < regions.size() && !acc.is_empty(); ++i)
            acc = intersect(acc, fatten(regions[i], r));
        return acc;
    };

    double hi = 1e-9;
    for (const ConvexRegion& r : regions) hi = std::max(hi, hausdorff(r, regions[0]));
    hi *= 1.0000001;
    int guard = 0;
    while (feasible_set(hi).is_empty()) {
        hi *= 2.0;
        if (++guard > 64) throw NoConvergence("center_minimax could not bracket feasibility");
    }
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (feasible_set(mid).is_empty())
            lo = mid;
        else
            hi = mid;
    }
    ConvexRegion witness = feasible_set(hi * (1.0 + 1e-12) + 1e-300);
    if (witness.is_empty()) witness = feasible_set(hi * (1.0 + 1e-9) + 1e-15);
    return {witness.is_empty() ? regions[0].representative() : witness.representative(), hi};
}

} // namespace dixlab
