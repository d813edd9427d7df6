#include <catch2/catch_amalgamated.hpp>

#include "dixlab/catalog.hpp"
#include "dixlab/selection.hpp"

using namespace dixlab;

namespace {

SelectionProblem psi_problem(const Fixture& f, const std::string& el, double lipschitz) {
    SelectionProblem prob;
    prob.base = f.algebra.base;
    prob.regions = psi(f.algebra, f.elements.at(el));
    prob.lipschitz = lipschitz;
    return prob;
}

} // namespace

TEST_CASE("constant region family admits a constant selection") {
    SelectionProblem prob;
    prob.base = Base::path(0, 1, 11);
    prob.regions.assign(11, ConvexRegion::disk(Cx(1, 1), 0.5));
    prob.lipschitz = 0.0;
    SelectionOutcome out = feasible(prob);
    REQUIRE(out.feasible);
    for (int i = 1; i < 11; ++i) REQUIRE(std::abs(out.selection[i] - out.selection[0]) < 1e-12);
}

TEST_CASE("ellipse-opened fixture is feasible at rate 20") {
    Fixture f = fixture("FIX-C", 0.5);
    SelectionProblem prob = psi_problem(f, "c", 20.0);
    SelectionOutcome out = feasible(prob);
    REQUIRE(out.feasible);
    // extracted selection lies in the regions and moves within the budget
    double step = prob.step_bound();
    for (int i = 0; i < f.algebra.points(); ++i) {
        REQUIRE(prob.regions[i].inf_dist(out.selection[i]) <= 1e-7);
        if (i > 0) REQUIRE(std::abs(out.selection[i] - out.selection[i - 1]) <= step * (1 + 1e-9));
    }
}

TEST_CASE("rotating-interval fixture is infeasible across zero at small steps") {
    Fixture f = fixture("FIX-B");
    SelectionProblem prob = psi_problem(f, "c", 20.0); // step = 20 * 0.05 = 1 < 2
    SelectionOutcome out = feasible(prob);
    REQUIRE_FALSE(out.feasible);
    double t_witness = f.algebra.base.t(out.witness_cell);
    REQUIRE(std::abs(t_witness) < 0.1); // the cell straddling zero
    REQUIRE_FALSE(out.bad_pin);
}

TEST_CASE("feasible is monotone in the rate budget") {
    Fixture f = fixture("FIX-C", 0.3);
    SelectionProblem prob = psi_problem(f, "c", 0.0);
    bool prev = false;
    for (double rate : {1.0, 4.0, 16.0, 64.0, 256.0}) {
        prob.lipschitz = rate;
        bool now = feasible(prob).feasible;
        if (prev) REQUIRE(now);
        prev = now;
    }
    REQUIRE(prev); // large budget always feasible for nonempty regions
}

TEST_CASE("pins restrict and certify selections") {
    SelectionProblem prob;
    prob.base = Base::path(0, 1, 5);
    prob.regions.assign(5, ConvexRegion::segment(Cx(-1, 0), Cx(1, 0)));
    prob.pins[0] = Cx(-0.5, 0);
    prob.pins[4] = Cx(0.5, 0);
    prob.lipschitz = 2.0; // step 0.5, gap 1.0 over 4 cells: fine
    SelectionOutcome out = feasible(prob);
    REQUIRE(out.feasible);
    REQUIRE(out.selection[0] == Cx(-0.5, 0));
    REQUIRE(out.selection[4] == Cx(0.5, 0));

    prob.lipschitz = 0.2; // step 0.05, too tight for the pin gap
    REQUIRE_FALSE(feasible(prob).feasible);

    prob.lipschitz = 2.0;
    prob.pins[2] = Cx(0, 3); // violates its own region
    SelectionOutcome bad = feasible(prob);
    REQUIRE_FALSE(bad.feasible);
    REQUIRE(bad.bad_pin);
    REQUIRE(bad.witness_cell == 2);
}

TEST_CASE("min_max_step detects the forced jump") {
    Fixture f = fixture("FIX-B", 0.0, 40); // dt = 1/20
    SelectionProblem prob = psi_problem(f, "c", 1.0);
    double s = min_max_step(prob);
    REQUIRE(s >= 1.9); // jump from -1 to +1 across the zero cell
    REQUIRE(s <= 2.1);
}

TEST_CASE("min_max_step shrinks under refinement for the opened fixture") {
    double prev = 1e300;
    for (int m : {20, 40, 80}) {
        Fixture f = fixture("FIX-C", 0.5, m);
        SelectionProblem prob = psi_problem(f, "c", 1.0);
        double s = min_max_step(prob);
        REQUIRE(s < prev);
        prev = s;
    }
}

TEST_CASE("min_max_step of constant regions is zero") {
    SelectionProblem prob;
    prob.base = Base::path(0, 1, 9);
    prob.regions.assign(9, ConvexRegion::disk(Cx(0, 0), 1.0));
    REQUIRE(min_max_step(prob) == 0.0);
}

TEST_CASE("min_max_step throws when a region is empty") {
    SelectionProblem prob;
    prob.base = Base::path(0, 1, 3);
    prob.regions.assign(3, ConvexRegion::disk(Cx(0, 0), 1.0));
    prob.regions[1] = ConvexRegion::empty_region();
    REQUIRE_THROWS_AS(min_max_step(prob), InfeasibleAtAnyStep);
}

TEST_CASE("dist_to_center of a central element is zero") {
    Fixture f = fixture("FIX-A");
    CentralField z(f.algebra.points(), Cx(0.7, -0.2));
    Element e = central_element(f.algebra, z);
    REQUIRE(dist_to_center(f.algebra, e) <= 1e-8);
}

TEST_CASE("dist_to_center vanishes for the rotating-interval element") {
    Fixture f = fixture("FIX-B");
    REQUIRE(dist_to_center(f.algebra, f.elements.at("c")) <= 1e-6);
}

TEST_CASE("dist_to_center of separated singletons is the minimax radius") {
    FiberedAlgebra a;
    a.base = Base::discrete(1);
    a.fibers = {{Block{1, true, true}, Block{1, true, true}}};
    Element e = zero_element(a);
    e.at(0, 0) = CMat(1, 1, {Cx(-1, 0)});
    e.at(0, 1) = CMat(1, 1, {Cx(1, 0)});
    REQUIRE(dist_to_center(a, e) == Catch::Approx(1.0).margin(1e-8));
    REQUIRE(dist_to_center_via_bisection(a, e) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("bisection route matches the pointwise route on discrete bases") {
    Fixture f = fixture("FIX-A");
    FiberedAlgebra d = discretize(f.algebra);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Element e = random_element(seed, d, {.selfadjoint = true});
        double direct = dist_to_center(d, e);
        double bisect = dist_to_center_via_bisection(d, e);
        REQUIRE(bisect == Catch::Approx(direct).margin(1e-6));
    }
}
