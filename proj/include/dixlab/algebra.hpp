#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dixlab/complex_matrix.hpp"
#include "dixlab/error.hpp"

namespace dixlab {

/// One matrix-block fiber component: a maximal-quotient surrogate (dim x dim
/// full matrix algebra), or a trace probe when is_maximal is false.
struct Block {
    int dim = 1;
    bool has_trace = true;
    bool is_maximal = true;

    bool operator==(const Block&) const = default;
};

/// Base space of the fibered model: Glimm-spectrum surrogate. Discrete bases
/// carry no adjacency; PathGrid bases are uniform samples of [t_min, t_max]
/// and feed the selection engine.
struct Base {
    enum class Kind { Discrete, PathGrid };
    Kind kind = Kind::Discrete;
    int points = 1;
    double t_min = 0.0;
    double t_max = 1.0;

    static Base discrete(int n) {
        if (n < 1) throw BadParams("discrete base needs at least one point");
        Base b;
        b.kind = Kind::Discrete;
        b.points = n;
        return b;
    }
    static Base path(double t_min, double t_max, int m) {
        if (m < 2) throw BadParams("path base needs at least two points");
        if (!(t_min < t_max)) throw BadParams("path base needs t_min < t_max");
        Base b;
        b.kind = Kind::PathGrid;
        b.points = m;
        b.t_min = t_min;
        b.t_max = t_max;
        return b;
    }

    bool is_path() const { return kind == Kind::PathGrid; }
    double dt() const { return is_path() ? (t_max - t_min) / (points - 1) : 0.0; }
    double t(int i) const { return is_path() ? t_min + i * dt() : static_cast<double>(i); }

    bool operator==(const Base&) const = default;
};

/// Finite fibered model of a unital C*-algebra: a base point per Glimm class,
/// a list of matrix blocks per point. Multi-block fibers are formal quotient
/// data (numerical ranges, traces, Glimm topology), which is all the deciders
/// consume.
struct FiberedAlgebra {
    Base base;
    std::vector<std::vector<Block>> fibers; // per point

    int points() const { return base.points; }
    int blocks(int p) const { return static_cast<int>(fibers[p].size()); }
    const Block& block(int p, int b) const { return fibers[p][b]; }

    void check() const {
        if (static_cast<int>(fibers.size()) != base.points)
            throw ShapeMismatch("fiber count does not match base points");
        for (const auto& fiber : fibers) {
            if (fiber.empty()) throw ShapeMismatch("every fiber needs at least one block");
            bool has_max = false;
            for (const Block& b : fiber) {
                if (b.dim < 1) throw BadParams("block dimension must be positive");
                if (b.dim == 1 && !b.has_trace) throw BadParams("one-dimensional blocks carry their trace");
                has_max = has_max || b.is_maximal;
            }
            if (!has_max) throw BadParams("every fiber needs a maximal block");
        }
    }

    std::vector<int> maximal_blocks(int p) const {
        std::vector<int> out;
        for (int b = 0; b < blocks(p); ++b)
            if (fibers[p][b].is_maximal) out.push_back(b);
        return out;
    }
    std::vector<int> traceful_blocks(int p) const {
        std::vector<int> out;
        for (int b = 0; b < blocks(p); ++b)
            if (fibers[p][b].has_trace) out.push_back(b);
        return out;
    }

    bool constant_structure() const {
        for (int p = 1; p < points(); ++p)
            if (fibers[p] != fibers[0]) return false;
        return true;
    }

    bool operator==(const FiberedAlgebra&) const = default;
};

/// Element of the fibered algebra: one matrix per (point, block).
struct Element {
    std::vector<std::vector<CMat>> data; // [point][block]

    const CMat& at(int p, int b) const { return data[p][b]; }
    CMat& at(int p, int b) { return data[p][b]; }

    bool selfadjoint(double tol = 1e-10) const {
        for (const auto& fiber : data)
            for (const CMat& m : fiber)
                if (!is_hermitian(m, tol)) return false;
        return true;
    }

    double norm() const { // sup over fibers of the block operator norms
        double s = 0.0;
        for (const auto& fiber : data)
            for (const CMat& m : fiber) s = std::max(s, operator_norm(m));
        return s;
    }
};

inline Element zero_element(const FiberedAlgebra& a) {
    Element e;
    e.data.resize(a.points());
    for (int p = 0; p < a.points(); ++p)
        for (int b = 0; b < a.blocks(p); ++b) e.data[p].push_back(CMat::zero(a.block(p, b).dim, a.block(p, b).dim));
    return e;
}

inline Element unit_element(const FiberedAlgebra& a) {
    Element e;
    e.data.resize(a.points());
    for (int p = 0; p < a.points(); ++p)
        for (int b = 0; b < a.blocks(p); ++b) e.data[p].push_back(CMat::identity(a.block(p, b).dim));
    return e;
}

inline void check_shape(const FiberedAlgebra& a, const Element& e) {
    if (static_cast<int>(e.data.size()) != a.points()) throw ShapeMismatch("element point count mismatch");
    for (int p = 0; p < a.points(); ++p) {
        if (static_cast<int>(e.data[p].size()) != a.blocks(p)) throw ShapeMismatch("element block count mismatch");
        for (int b = 0; b < a.blocks(p); ++b) {
            const CMat& m = e.at(p, b);
            if (m.rows() != a.block(p, b).dim || m.cols() != a.block(p, b).dim)
                throw ShapeMismatch("element block dimension mismatch");
        }
    }
}

inline Element blockwise(const Element& x, const Element& y, const auto& fn) {
    if (x.data.size() != y.data.size()) throw ShapeMismatch("element point count mismatch");
    Element out;
    out.data.resize(x.data.size());
    for (std::size_t p = 0; p < x.data.size(); ++p) {
        if (x.data[p].size() != y.data[p].size()) throw ShapeMismatch("element block count mismatch");
        for (std::size_t b = 0; b < x.data[p].size(); ++b) out.data[p].push_back(fn(x.data[p][b], y.data[p][b]));
    }
    return out;
}

inline Element operator+(const Element& x, const Element& y) {
    return blockwise(x, y, [](const CMat& a, const CMat& b) { return a + b; });
}
inline Element operator-(const Element& x, const Element& y) {
    return blockwise(x, y, [](const CMat& a, const CMat& b) { return a - b; });
}
inline Element operator*(const Element& x, const Element& y) {
    return blockwise(x, y, [](const CMat& a, const CMat& b) { return a * b; });
}
inline Element operator*(Cx s, const Element& x) {
    Element out = x;
    for (auto& fiber : out.data)
        for (auto& m : fiber) m *= s;
    return out;
}

inline Element adjoint(const Element& x) {
    Element out = x;
    for (auto& fiber : out.data)
        for (auto& m : fiber) m = m.adjoint();
    return out;
}

inline Element real_part(const Element& x) {
    Element out = x;
    for (auto& fiber : out.data)
        for (auto& m : fiber) m = hermitian_part(m);
    return out;
}

inline Element imag_part(const Element& x) {
    Element out = x;
    for (auto& fiber : out.data)
        for (auto& m : fiber) m = antihermitian_part_over_i(m);
    return out;
}

/// Central element: one scalar per base point, acting as that scalar times
/// the identity in every block of the fiber.
using CentralField = std::vector<Cx>;

inline Element central_element(const FiberedAlgebra& a, const CentralField& z) {
    if (static_cast<int>(z.size()) != a.points()) throw ShapeMismatch("central field point count mismatch");
    Element e;
    e.data.resize(a.points());
    for (int p = 0; p < a.points(); ++p)
        for (int b = 0; b < a.blocks(p); ++b) e.data[p].push_back(CMat::scalar(a.block(p, b).dim, z[p]));
    return e;
}

/// Ideal given as an intersection of maximal ideals and trace supports:
/// elements of the ideal vanish at every listed (point, block) pair.
struct IdealDesc {
    std::vector<std::pair<int, int>> zero_set; // sorted (point, block)

    void normalize() {
        std::sort(zero_set.begin(), zero_set.end());
        zero_set.erase(std::unique(zero_set.begin(), zero_set.end()), zero_set.end());
    }
    bool zeroed(int p, int b) const {
        return std::binary_search(zero_set.begin(), zero_set.end(), std::make_pair(p, b));
    }
    bool contains(const Element& e, double tol) const {
        for (auto [p, b] : zero_set)
            if (operator_norm(e.at(p, b)) > tol) return false;
        return true;
    }
    bool operator==(const IdealDesc&) const = default;
};

/// Extreme tracial states per fiber: each traceful block contributes its
/// normalized trace functional. Includes trace probes.
struct TraceSet {
    std::vector<std::vector<int>> blocks_per_point;

    bool empty_at(int p) const { return blocks_per_point[p].empty(); }
};

inline TraceSet trace_set(const FiberedAlgebra& a) {
    TraceSet t;
    t.blocks_per_point.resize(a.points());
    for (int p = 0; p < a.points(); ++p) t.blocks_per_point[p] = a.traceful_blocks(p);
    return t;
}

/// Points whose fiber quotient admits a tracial state.
inline std::vector<int> y_set(const FiberedAlgebra& a) {
    std::vector<int> out;
    for (int p = 0; p < a.points(); ++p)
        if (!a.traceful_blocks(p).empty()) out.push_back(p);
    return out;
}

struct TraceValue {
    bool conflict = false;
    Cx value = 0.0;             // the common value when there is no conflict
    std::vector<Cx> values;     // per traceful block, in block order
    std::vector<int> blocks;    // the traceful block indices
};

/// Common value of the fiber's tracial states on the element, or the list of
/// disagreeing values. Normalized block traces, agreement within 1e-9.
inline TraceValue f_trace(const FiberedAlgebra& a, const Element& e, int p, double tol = 1e-9) {
    std::vector<int> tb = a.traceful_blocks(p);
    if (tb.empty()) throw NotInY("point has no tracial state");
    TraceValue out;
    out.blocks = tb;
    for (int b : tb) out.values.push_back(e.at(p, b).trace() / static_cast<double>(a.block(p, b).dim));
    out.value = out.values[0];
    for (Cx v : out.values)
        if (std::abs(v - out.value) > tol) out.conflict = true;
    return out;
}

/// Largest weakly central ideal: vanish on every maximal block of each fiber
/// with two or more maximal blocks.
inline IdealDesc jwc(const FiberedAlgebra& a) {
    IdealDesc j;
    for (int p = 0; p < a.points(); ++p) {
        std::vector<int> mb = a.maximal_blocks(p);
        if (mb.size() >= 2)
            for (int b : mb) j.zero_set.emplace_back(p, b);
    }
    j.normalize();
    return j;
}

/// Whether the fiber quotient has the Dixmier property with trivial centre:
/// a single maximal block, and any tracial state factors through it (no trace
/// probe outside the maximal block).
inline bool point_in_x(const FiberedAlgebra& a, int p) {
    std::vector<int> mb = a.maximal_blocks(p);
    if (mb.size() != 1) return false;
    for (int b : a.traceful_blocks(p))
        if (b != mb[0]) return false;
    return true;
}

/// Largest ideal with the Dixmier property: over every point outside X, the
/// local ideal I_N vanishes on all maximal blocks and on the support of every
/// tracial state of the fiber.
inline IdealDesc jdp(const FiberedAlgebra& a) {
    IdealDesc j;
    for (int p = 0; p < a.points(); ++p) {
        if (point_in_x(a, p)) continue;
        for (int b : a.maximal_blocks(p)) j.zero_set.emplace_back(p, b);
        for (int b : a.traceful_blocks(p)) j.zero_set.emplace_back(p, b);
    }
    j.normalize();
    return j;
}

/// Globally square-zero element supported on a single (point, block).
inline Element square_zero_lift(const FiberedAlgebra& a, int point, int block, const CMat& m,
                                double tol = 1e-10) {
    if (point < 0 || point >= a.points() || block < 0 || block >= a.blocks(point))
        throw ShapeMismatch("square_zero_lift target out of range");
    if (m.rows() != a.block(point, block).dim) throw ShapeMismatch("lift dimension mismatch");
    if (!is_square_zero(m, tol)) throw NotSquareZero("lift requires a square-zero matrix");
    Element e = zero_element(a);
    e.at(point, block) = m;
    return e;
}

/// Pairs (y_i, z_i) of square-zero matrix units with sum y_i z_i = identity,
/// exactly: y_j = E_{j,j+1 mod n}, z_j = y_j^T.
inline std::vector<std::pair<CMat, CMat>> unit_square_zero_decomposition(int n) {
    if (n < 2) throw DimensionOne("no square-zero decomposition of the unit in dimension one");
    std::vector<std::pair<CMat, CMat>> out;
    for (int j = 0; j < n; ++j) {
        int k = (j + 1) % n;
        out.emplace_back(CMat::unit(n, j, k), CMat::unit(n, k, j));
    }
    return out;
}

inline Element self_commutator(const Element& x) {
    Element xs = adjoint(x);
    return xs * x - x * xs;
}

enum class Side { Left, Right };

/// x*y (Side::Left) or y*x (Side::Right) for blockwise nilpotent x.
inline Element nilpotent_product(const Element& x, const Element& y, Side side, double tol = 1e-10) {
    for (const auto& fiber : x.data)
        for (const CMat& m : fiber)
            if (!is_nilpotent(m, tol)) throw NotNilpotent("element is not blockwise nilpotent");
    return side == Side::Left ? x * y : y * x;
}

struct Diagnostics {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

/// Structural checks plus a lower-semicontinuity probe of the min-over-blocks
/// norm field on PathGrid bases (isolated upward spikes are flagged; they
/// cannot arise from grid samples of a continuous field).
inline Diagnostics validate(const FiberedAlgebra& a, const Element& e) {
    Diagnostics d;
    try {
        a.check();
    } catch (const Error& err) {
        d.errors.push_back(std::string("algebra: ") + err.what());
        return d;
    }
    try {
        check_shape(a, e);
    } catch (const Error& err) {
        d.errors.push_back(std::string("ShapeMismatch: ") + err.what());
        return d;
    }
    for (int p = 0; p < a.points(); ++p)
        for (int b = 0; b < a.blocks(p); ++b)
            if (!e.at(p, b).finite()) d.errors.push_back("NonFinite: block (" + std::to_string(p) + "," +
                                                         std::to_string(b) + ") has NaN/Inf entries");
    if (!d.errors.empty()) return d;

    if (a.base.is_path() && a.points() >= 3) {
        std::vector<double> f(a.points());
        double fmin = 1e300, fmax = -1e300;
        for (int p = 0; p < a.points(); ++p) {
            double v = 1e300;
            for (int b : a.maximal_blocks(p)) v = std::min(v, operator_norm(e.at(p, b)));
            f[p] = v;
            fmin = std::min(fmin, v);
            fmax = std::max(fmax, v);
        }
        double margin = 0.1 * (fmax - fmin) + 1e-9;
        for (int p = 1; p + 1 < a.points(); ++p) {
            if (f[p] > f[p - 1] + margin && f[p] > f[p + 1] + margin)
                d.warnings.push_back("LscWarning: norm field spikes upward at grid point " + std::to_string(p));
        }
    }
    return d;
}

} // namespace dixlab
