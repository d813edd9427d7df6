#include <catch2/catch_amalgamated.hpp>

#include "dixlab/convex_region.hpp"
#include "dixlab/rng.hpp"

using namespace dixlab;

namespace {

ConvexRegion random_region(Rng& rng, double span = 2.0) {
    int n = 1 + static_cast<int>(rng.integer(7));
    std::vector<Cx> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(rng.uniform(-span, span), rng.uniform(-span, span));
    return ConvexRegion::from_points(pts);
}

} // namespace

TEST_CASE("intersect of real intervals") {
    ConvexRegion a = ConvexRegion::segment(Cx(-1, 0), Cx(1, 0));
    ConvexRegion b = ConvexRegion::segment(Cx(0, 0), Cx(2, 0));
    ConvexRegion c = intersect(a, b);
    REQUIRE_FALSE(c.is_empty());
    REQUIRE(c.inf_dist(Cx(0, 0)) < 1e-12);
    REQUIRE(c.inf_dist(Cx(1, 0)) < 1e-12);
    REQUIRE(c.inf_dist(Cx(-0.5, 0)) == Catch::Approx(0.5));
}

TEST_CASE("intersect of transversal segments is the pinned point") {
    // [-1,1] meets the segment from -1 to -1+2i exactly at -1
    ConvexRegion a = ConvexRegion::segment(Cx(-1, 0), Cx(1, 0));
    ConvexRegion b = ConvexRegion::segment(Cx(-1, 0), Cx(-1, 2));
    ConvexRegion c = intersect(a, b);
    REQUIRE_FALSE(c.is_empty());
    REQUIRE(c.diameter() < 1e-12);
    REQUIRE(std::abs(c.representative() - Cx(-1, 0)) < 1e-12);
}

TEST_CASE("intersect of disjoint disks is empty") {
    ConvexRegion a = ConvexRegion::disk(Cx(0, 0), 1.0);
    ConvexRegion b = ConvexRegion::disk(Cx(3, 0), 1.0);
    REQUIRE(intersect(a, b).is_empty());
}

TEST_CASE("intersect monotone: result supports dominated by members") {
    Rng rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<ConvexRegion> rs = {random_region(rng), random_region(rng), random_region(rng)};
        ConvexRegion c = intersect(rs);
        if (c.is_empty()) continue;
        for (const auto& r : rs) {
            auto sc = c.support_values();
            auto sr = r.support_values();
            for (std::size_t i = 0; i < sc.size(); ++i) REQUIRE(sc[i] <= sr[i] + 1e-9);
        }
    }
}

TEST_CASE("fatten point to grid disk") {
    ConvexRegion d = fatten(ConvexRegion::point(Cx(0, 0)), 1.0);
    REQUIRE(d.support_value(0.0) == Catch::Approx(1.0));
    REQUIRE(d.support_value(M_PI / 2) == Catch::Approx(1.0));
    REQUIRE(d.inf_dist(Cx(0, 0)) == 0.0);
}

TEST_CASE("fatten by zero is the identity") {
    ConvexRegion r = ConvexRegion::segment(Cx(0, 0), Cx(1, 0));
    ConvexRegion f = fatten(r, 0.0);
    REQUIRE(hausdorff(r, f) == 0.0);
}

TEST_CASE("fatten of unit square obeys the Steiner formula") {
    ConvexRegion sq = ConvexRegion::from_points({Cx(0, 0), Cx(1, 0), Cx(1, 1), Cx(0, 1)});
    ConvexRegion f = fatten(sq, 0.5);
    double expected = 1.0 + 4 * 0.5 + M_PI * 0.25;
    REQUIRE(f.area() == Catch::Approx(expected).margin(1e-3));
    // support values each +0.5 on the grid
    auto s0 = sq.support_values();
    auto s1 = f.support_values();
    for (std::size_t i = 0; i < s0.size(); ++i) REQUIRE(s1[i] == Catch::Approx(s0[i] + 0.5).margin(1e-9));
}

TEST_CASE("fatten is additive in delta") {
    Rng rng(29);
    for (int rep = 0; rep < 50; ++rep) {
        ConvexRegion r = random_region(rng);
        double d1 = rng.uniform(0.0, 1.0), d2 = rng.uniform(0.0, 1.0);
        ConvexRegion lhs = fatten(fatten(r, d1), d2);
        ConvexRegion rhs = fatten(r, d1 + d2);
        REQUIRE(hausdorff(lhs, rhs) <= 1e-9);
    }
}

TEST_CASE("fatten of empty region throws") {
    REQUIRE_THROWS_AS(fatten(ConvexRegion::empty_region(), 0.5), EmptyRegion);
}

TEST_CASE("inf_dist examples") {
    ConvexRegion seg = ConvexRegion::segment(Cx(0, 0), Cx(1, 0));
    REQUIRE(inf_dist(seg, Cx(2, 0)) == Catch::Approx(1.0));
    ConvexRegion d = ConvexRegion::disk(Cx(0, 0), 1.0);
    REQUIRE(inf_dist(d, Cx(0, 0)) == 0.0);
    ConvexRegion seg2 = ConvexRegion::segment(Cx(-1, 0), Cx(1, 0));
    REQUIRE(inf_dist(seg2, Cx(0, 1)) == Catch::Approx(1.0)); // projection oracle
    REQUIRE_THROWS_AS(inf_dist(ConvexRegion::empty_region(), Cx(0, 0)), EmptyRegion);
}

TEST_CASE("hausdorff basics and metric axioms") {
    ConvexRegion a = ConvexRegion::point(Cx(0, 0));
    ConvexRegion b = ConvexRegion::point(Cx(3, 0));
    REQUIRE(hausdorff(a, a) == 0.0);
    REQUIRE(hausdorff(a, b) == Catch::Approx(3.0));
    ConvexRegion s1 = ConvexRegion::segment(Cx(0, 0), Cx(1, 0));
    ConvexRegion s2 = ConvexRegion::segment(Cx(0, 0), Cx(2, 0));
    REQUIRE(hausdorff(s1, s2) == Catch::Approx(1.0)); // support-function oracle

    Rng rng(31);
    for (int rep = 0; rep < 1000; ++rep) {
        ConvexRegion x = random_region(rng), y = random_region(rng), z = random_region(rng);
        double dxy = hausdorff(x, y), dyz = hausdorff(y, z), dxz = hausdorff(x, z);
        REQUIRE(dxy >= 0.0);
        REQUIRE(dxy == Catch::Approx(hausdorff(y, x)).margin(1e-12));
        REQUIRE(dxz <= dxy + dyz + 1e-9);
    }
}

TEST_CASE("center_minimax trivial and symmetric cases") {
    auto one = center_minimax({ConvexRegion::point(Cx(0, 0))});
    REQUIRE(one.radius == 0.0);
    REQUIRE(std::abs(one.center) < 1e-12);

    auto two = center_minimax({ConvexRegion::point(Cx(-1, 0)), ConvexRegion::point(Cx(1, 0))});
    REQUIRE(two.radius == Catch::Approx(1.0).margin(1e-8));
    REQUIRE(std::abs(two.center) < 1e-8);

    // r* = 0 with witness at the pinned point -1
    auto pinned = center_minimax(
        {ConvexRegion::segment(Cx(-1, 0), Cx(1, 0)), ConvexRegion::segment(Cx(-1, 0), Cx(-1, 2))});
    REQUIRE(pinned.radius == 0.0);
    REQUIRE(std::abs(pinned.center - Cx(-1, 0)) < 1e-9);
}

TEST_CASE("center_minimax radius is zero exactly when intersection nonempty") {
    Rng rng(37);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<ConvexRegion> rs = {random_region(rng), random_region(rng)};
        ConvexRegion c = intersect(rs);
        auto mm = center_minimax(rs);
        if (c.is_empty())
            REQUIRE(mm.radius > 1e-8);
        else
            REQUIRE(mm.radius <= 1e-8);
        if (!c.is_empty()) {
            for (const auto& r : rs) REQUIRE(r.inf_dist(mm.center) <= 1e-7);
        }
    }
}

TEST_CASE("minimax center of intervals uses the closed form") {
    auto mm = center_minimax(
        {ConvexRegion::segment(Cx(-3, 0), Cx(-2, 0)), ConvexRegion::segment(Cx(2, 0), Cx(4, 0))});
    REQUIRE(mm.radius == Catch::Approx(2.0));
    REQUIRE(mm.center.real() == Catch::Approx(0.0));
    REQUIRE(mm.center.imag() == 0.0);
}
