#include <catch2/catch_amalgamated.hpp>

#include "dixlab/catalog.hpp"
#include "dixlab/psi.hpp"

using namespace dixlab;

TEST_CASE("psi on the rotating-interval fixture pins to -1 for t < 0") {
    Fixture f = fixture("FIX-B");
    const Element& c = f.elements.at("c");
    for (int p = 0; p < f.algebra.points(); ++p) {
        double t = f.algebra.base.t(p);
        if (std::abs(t + 0.5) > 1e-9) continue;
        ConvexRegion r = psi_point(f.algebra, c, p);
        REQUIRE_FALSE(r.is_empty());
        REQUIRE(r.diameter() < 1e-9);
        REQUIRE(std::abs(r.representative() - Cx(-1, 0)) < 1e-9);
    }
}

TEST_CASE("psi singleton forcing on both sides of zero") {
    Fixture f = fixture("FIX-B");
    const Element& c = f.elements.at("c");
    for (int p = 0; p < f.algebra.points(); ++p) {
        double t = f.algebra.base.t(p);
        ConvexRegion r = psi_point(f.algebra, c, p);
        REQUIRE_FALSE(r.is_empty());
        double sign = t > 0 ? 1.0 : -1.0;
        REQUIRE(r.inf_dist(Cx(sign, 0.0)) < 1e-6);
        REQUIRE(r.diameter() < 1e-6);
    }
}

TEST_CASE("psi of a single-block fiber is the block range") {
    Fixture f = fixture("FIX-A");
    const Element& e = f.elements.at("e12");
    ConvexRegion r = psi_point(f.algebra, e, 0);
    // W(E12 in M_3) is the disk of radius 1/2
    REQUIRE(r.support_value(0.3) == Catch::Approx(0.5).margin(1e-6));
    REQUIRE(r.inf_dist(Cx(0, 0)) == 0.0);
}

TEST_CASE("psi at the pinched endpoint: matrix unit e11") {
    Fixture f = fixture("FIX-A");
    int last = f.algebra.points() - 1;
    ConvexRegion r = psi_point(f.algebra, f.elements.at("e11"), last);
    // W(E11) = [0,1] intersected with {0}
    REQUIRE_FALSE(r.is_empty());
    REQUIRE(r.diameter() < 1e-12);
    REQUIRE(std::abs(r.representative()) < 1e-12);
}

TEST_CASE("psi dominance: contained in every block range") {
    Fixture f = fixture("FIX-B");
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Element e = random_element(seed, f.algebra);
        ElementGeometry g = analyze(f.algebra, e);
        for (int p = 0; p < f.algebra.points(); p += 7) {
            if (g.psi[p].is_empty()) continue;
            auto spsi = g.psi[p].support_values();
            for (int b : f.algebra.maximal_blocks(p)) {
                auto sb = g.block_range[p][b].support_values();
                for (std::size_t i = 0; i < spsi.size(); ++i) REQUIRE(spsi[i] <= sb[i] + 1e-9);
            }
        }
    }
}

TEST_CASE("psi_r bridges separated singletons") {
    // two fixed blocks with ranges {-1} and {+1} in one fiber
    FiberedAlgebra a;
    a.base = Base::discrete(1);
    a.fibers = {{Block{1, true, true}, Block{1, true, true}}};
    Element e = zero_element(a);
    e.at(0, 0) = CMat(1, 1, {Cx(-1, 0)});
    e.at(0, 1) = CMat(1, 1, {Cx(1, 0)});
    REQUIRE_FALSE(psi_r_point(a, e, 0, 1.5).is_empty()); // fattening covers the gap 2
    ConvexRegion big = psi_r_point(a, e, 0, 1.5);
    REQUIRE(big.inf_dist(Cx(0, 0)) < 1e-6);
    REQUIRE(psi_r_point(a, e, 0, 0.5).is_empty());
    REQUIRE_THROWS_AS(psi_r_point(a, e, 0, 0.0), BadParams);
}

TEST_CASE("psi_r is nested in r and converges to psi") {
    Fixture f = fixture("FIX-C", 0.5);
    const Element& c = f.elements.at("c");
    ElementGeometry g = analyze(f.algebra, c);
    int mid = f.algebra.points() / 2;
    ConvexRegion r1 = psi_r_point(f.algebra, g, mid, 0.1);
    ConvexRegion r2 = psi_r_point(f.algebra, g, mid, 0.3);
    auto s1 = r1.support_values();
    auto s2 = r2.support_values();
    for (std::size_t i = 0; i < s1.size(); ++i) REQUIRE(s1[i] <= s2[i] + 1e-9);

    // r -> 0 limit equals psi when psi nonempty
    ConvexRegion p0 = g.psi[mid];
    ConvexRegion tiny = psi_r_point(f.algebra, g, mid, 1e-7);
    REQUIRE(hausdorff(p0, tiny) < 1e-6);
}

TEST_CASE("envelopes of selfadjoint elements bracket psi") {
    FiberedAlgebra a;
    a.base = Base::discrete(1);
    a.fibers = {{Block{2, true, true}, Block{2, true, true}}};
    Element e = zero_element(a);
    e.at(0, 0) = CMat::diag({1.0, -1.0});
    e.at(0, 1) = CMat::diag({2.0, 0.0});
    Envelopes env = envelopes(a, e);
    REQUIRE(env.h[0] == Catch::Approx(0.0));
    REQUIRE(env.g[0] == Catch::Approx(1.0));

    // single block: h = lambda_min, g = lambda_max
    FiberedAlgebra one;
    one.base = Base::discrete(1);
    one.fibers = {{Block{3, true, true}}};
    Element x = random_element(3, one, {.selfadjoint = true});
    Envelopes e2 = envelopes(one, x);
    auto ev = hermitian_eigenvalues(x.at(0, 0));
    REQUIRE(e2.h[0] == Catch::Approx(ev.front()));
    REQUIRE(e2.g[0] == Catch::Approx(ev.back()));

    REQUIRE_THROWS_AS(envelopes(one, random_element(4, one)), NotSelfadjoint);
}

TEST_CASE("selfadjoint consistency: psi equals the envelope interval") {
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
        FiberedAlgebra a = random_algebra(seed, {.max_points = 4, .max_blocks = 3, .max_dim = 4});
        Element e = random_element(seed * 7 + 1, a, {.selfadjoint = true});
        ElementGeometry g = analyze(a, e);
        Envelopes env = envelopes(a, e);
        for (int p = 0; p < a.points(); ++p) {
            if (env.h[p] > env.g[p] + 1e-9) {
                REQUIRE(g.psi[p].is_empty());
            } else if (env.g[p] > env.h[p] + 1e-9) {
                REQUIRE_FALSE(g.psi[p].is_empty());
                ConvexRegion seg = ConvexRegion::segment(Cx(env.h[p], 0), Cx(env.g[p], 0));
                REQUIRE(hausdorff(g.psi[p], seg) <= 1e-7);
            } // razor-thin intervals may resolve either way
        }
    }
}

TEST_CASE("psi endpoint example: e11 envelopes vanish at the pinch") {
    Fixture f = fixture("FIX-A");
    Envelopes env = envelopes(f.algebra, f.elements.at("e11"));
    int last = f.algebra.points() - 1;
    REQUIRE(env.h[last] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(env.g[last] == Catch::Approx(0.0).margin(1e-12));
}
