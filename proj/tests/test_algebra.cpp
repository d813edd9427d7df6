#include <catch2/catch_amalgamated.hpp>

#include "dixlab/algebra.hpp"
#include "dixlab/catalog.hpp"

using namespace dixlab;

TEST_CASE("validate accepts a well-formed fixture") {
    Fixture f = fixture("FIX-A");
    Diagnostics d = validate(f.algebra, f.elements.at("e11"));
    REQUIRE(d.ok());
    REQUIRE(d.warnings.empty());
}

TEST_CASE("validate reports shape mismatches") {
    Fixture f = fixture("FIX-A");
    Element bad = f.elements.at("e11");
    bad.at(0, 0) = CMat::identity(2); // wrong block dim
    Diagnostics d = validate(f.algebra, bad);
    REQUIRE_FALSE(d.ok());
    REQUIRE(d.errors[0].find("ShapeMismatch") != std::string::npos);
}

TEST_CASE("validate flags upward norm spikes on path grids") {
    Fixture f = fixture("FIX-A");
    Element e = f.elements.at("e11");
    e.at(10, 0) = 5.0 * CMat::identity(3); // isolated spike
    Diagnostics d = validate(f.algebra, e);
    REQUIRE(d.ok());
    REQUIRE_FALSE(d.warnings.empty());
    REQUIRE(d.warnings[0].find("LscWarning") != std::string::npos);
}

TEST_CASE("y_set per fixture") {
    Fixture a = fixture("FIX-A");
    REQUIRE(y_set(a.algebra).size() == static_cast<std::size_t>(a.algebra.points()));
    Fixture e = fixture("FIX-E");
    REQUIRE(y_set(e.algebra).empty());
    Fixture d = fixture("FIX-D");
    REQUIRE(y_set(d.algebra) == std::vector<int>{0});
}

TEST_CASE("f_trace conflict on the endpoint matrix unit") {
    Fixture f = fixture("FIX-A");
    int last = f.algebra.points() - 1;
    TraceValue tv = f_trace(f.algebra, f.elements.at("e11"), last);
    REQUIRE(tv.conflict);
    REQUIRE(tv.values.size() == 2);
    REQUIRE(tv.values[0] == Cx(0.5, 0.0));
    REQUIRE(tv.values[1] == Cx(0.0, 0.0));
}

TEST_CASE("f_trace on single-block fibers is the normalized trace") {
    Fixture f = fixture("FIX-A");
    TraceValue tv = f_trace(f.algebra, f.elements.at("e11"), 0);
    REQUIRE_FALSE(tv.conflict);
    REQUIRE(std::abs(tv.value - Cx(1.0 / 3.0, 0.0)) < 1e-15);

    // blockwise trace-zero element
    Element tz = random_element(5, f.algebra, {.trace_zero = true});
    for (int p = 0; p < f.algebra.points(); ++p) {
        TraceValue t2 = f_trace(f.algebra, tz, p);
        REQUIRE_FALSE(t2.conflict);
        REQUIRE(std::abs(t2.value) < 1e-13);
    }
}

TEST_CASE("f_trace outside Y throws") {
    Fixture f = fixture("FIX-E");
    REQUIRE_THROWS_AS(f_trace(f.algebra, f.elements.at("c"), 0), NotInY);
}

TEST_CASE("jwc zero set") {
    Fixture f = fixture("FIX-A");
    IdealDesc j = jwc(f.algebra);
    int last = f.algebra.points() - 1;
    REQUIRE(j.zero_set == std::vector<std::pair<int, int>>{{last, 0}, {last, 1}});

    Fixture b = fixture("FIX-B");
    IdealDesc jb = jwc(b.algebra);
    REQUIRE(jb.zero_set.size() == static_cast<std::size_t>(2 * b.algebra.points()));

    // all singleton fibers: the whole algebra is weakly central, jwc = A
    FiberedAlgebra single;
    single.base = Base::discrete(3);
    single.fibers.assign(3, {Block{2, true, true}});
    REQUIRE(jwc(single).zero_set.empty());
}

TEST_CASE("jdp equals jwc on the endpoint-pinched fixture") {
    Fixture f = fixture("FIX-A");
    REQUIRE(jdp(f.algebra) == jwc(f.algebra));
}

TEST_CASE("jdp on a single M_3 point is the whole algebra") {
    FiberedAlgebra a;
    a.base = Base::discrete(1);
    a.fibers = {{Block{3, true, true}}};
    REQUIRE(jdp(a).zero_set.empty());
}

TEST_CASE("jdp on the trace-probe fixture zeroes block and probe") {
    Fixture f = fixture("FIX-D");
    IdealDesc j = jdp(f.algebra);
    REQUIRE(j.zero_set == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}});
    REQUIRE_FALSE(point_in_x(f.algebra, 0)); // the probe bypasses the maximal block
}

TEST_CASE("jdp zero set contains the jwc zero set") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        FiberedAlgebra a = random_algebra(seed);
        IdealDesc w = jwc(a), d = jdp(a);
        for (auto pr : w.zero_set) REQUIRE(std::binary_search(d.zero_set.begin(), d.zero_set.end(), pr));
    }
}

TEST_CASE("square_zero_lift") {
    Fixture f = fixture("FIX-A");
    int last = f.algebra.points() - 1;
    Element e = square_zero_lift(f.algebra, last, 0, CMat::unit(2, 0, 1));
    REQUIRE(operator_norm(e.at(last, 1)) == 0.0);
    REQUIRE(operator_norm(e.at(0, 0)) == 0.0);
    Element sq = e * e;
    REQUIRE(sq.norm() == 0.0);
    REQUIRE_THROWS_AS(square_zero_lift(f.algebra, last, 0, CMat::identity(2)), NotSquareZero);
    // zero matrix lifts to the zero element
    REQUIRE(square_zero_lift(f.algebra, last, 0, CMat::zero(2, 2)).norm() == 0.0);
}

TEST_CASE("unit_square_zero_decomposition is exact") {
    for (int n = 2; n <= 6; ++n) {
        auto pairs = unit_square_zero_decomposition(n);
        CMat sum = CMat::zero(n, n);
        for (auto& [y, z] : pairs) {
            REQUIRE((y * y).frobenius() == 0.0);
            REQUIRE((z * z).frobenius() == 0.0);
            sum += y * z;
        }
        REQUIRE((sum - CMat::identity(n)).frobenius() == 0.0); // exact identity
    }
    REQUIRE_THROWS_AS(unit_square_zero_decomposition(1), DimensionOne);
}

TEST_CASE("self_commutator and nilpotent_product") {
    Fixture f = fixture("FIX-A");
    int last = f.algebra.points() - 1;
    Element x = square_zero_lift(f.algebra, last, 0, CMat::unit(2, 0, 1));
    Element c = self_commutator(x);
    CMat expect = CMat::diag({-1.0, 1.0}); // x*x - xx* for E12
    REQUIRE((c.at(last, 0) - expect).frobenius() < 1e-15);

    Element one = unit_element(f.algebra);
    Element xy = nilpotent_product(x, one, Side::Left);
    REQUIRE((xy.at(last, 0) - x.at(last, 0)).frobenius() == 0.0);
    REQUIRE_THROWS_AS(nilpotent_product(one, x, Side::Left), NotNilpotent);

    // blockwise trace of [x*, x] vanishes
    Element r = random_element(9, f.algebra);
    Element sc = self_commutator(r);
    for (int p = 0; p < f.algebra.points(); ++p)
        for (int b = 0; b < f.algebra.blocks(p); ++b) REQUIRE(std::abs(sc.at(p, b).trace()) < 1e-12);
}

TEST_CASE("central elements and ideals") {
    Fixture f = fixture("FIX-A");
    CentralField z(f.algebra.points(), Cx(2.0, -1.0));
    Element e = central_element(f.algebra, z);
    REQUIRE(e.selfadjoint() == false);
    IdealDesc j = jwc(f.algebra);
    REQUIRE_FALSE(j.contains(e, 1e-9));
    REQUIRE(j.contains(zero_element(f.algebra), 1e-9));
}
