#include <cmath>

#include "doctest.h"
#include "pdfw/bruteforce.hpp"
#include "pdfw/diagnostics.hpp"
#include "pdfw/polytope.hpp"

using namespace pdfw;

namespace {

Objective quadratic(Vec target) {
    Objective f;
    f.dim = static_cast<int>(target.size());
    f.convex = true;
    f.smoothness = 2.0;
    f.value = [target](const Vec& g) { return norm2_sq(g - target); };
    f.gradient = [target](const Vec& g) { return 2.0 * (g - target); };
    return f;
}

Objective linear(Vec c) {
    Objective f;
    f.dim = static_cast<int>(c.size());
    f.convex = true;
    f.smoothness = 0.0;
    f.value = [c](const Vec& g) { return dot(c, g); };
    f.gradient = [c](const Vec&) { return c; };
    return f;
}

// One-state instance whose polytope is the unit interval [0, 1].
ProblemInstance interval(Objective f, std::vector<Vec> rows = {}, Vec rhs = {}) {
    ProblemInstance inst;
    inst.name = "interval";
    inst.states = StateModel::single();
    inst.decision_sets = {DecisionSet::finite({{0.0}, {1.0}})};
    inst.objective = std::move(f);
    inst.constraints =
        rows.empty() ? LinearConstraints::none(1) : LinearConstraints::from_rows(rows, rhs);
    inst.validate();
    return inst;
}

// Two states p = (1/2, 1/2) with segment hulls along each axis; the polytope
// is the box [0, 0.5]^2.
ProblemInstance two_state_box(Objective f) {
    ProblemInstance inst;
    inst.name = "two-state-box";
    inst.states = StateModel::uniform(2);
    inst.decision_sets = {DecisionSet::finite({{0.0, 0.0}, {1.0, 0.0}}),
                          DecisionSet::finite({{0.0, 0.0}, {0.0, 1.0}})};
    inst.objective = std::move(f);
    inst.constraints = LinearConstraints::none(2);
    inst.validate();
    return inst;
}

}  // namespace

TEST_CASE("fw_gap on the unit interval") {
    Objective sq;
    sq.dim = 1;
    sq.convex = true;
    sq.smoothness = 2.0;
    sq.value = [](const Vec& g) { return g[0] * g[0]; };
    sq.gradient = [](const Vec& g) { return Vec{2.0 * g[0]}; };
    auto inst = interval(sq);
    auto poly = MixturePolytope::from_instance(inst);

    CHECK(fw_gap(inst, poly, {1.0}) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fw_gap(inst, poly, {0.0}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("fw_gap with an active linear constraint") {
    auto inst = interval(quadratic({0.3}), {{1.0}}, {0.5});
    auto poly = MixturePolytope::from_instance(inst);
    // grad f(1) = 1.4, best v = 0, gap = 1.4 * (1 - 0)
    CHECK(fw_gap(inst, poly, {1.0}) == doctest::Approx(1.4).epsilon(1e-9));
}

TEST_CASE("fw_gap reports an empty feasible region") {
    auto inst = interval(quadratic({0.3}), {{1.0}}, {-1.0});
    auto poly = MixturePolytope::from_instance(inst);
    CHECK_THROWS_AS(fw_gap(inst, poly, {0.5}), infeasible_error);
}

TEST_CASE("dist_to_polytope on a segment and a mixture box") {
    auto seg = MixturePolytope{{1.0}, {{{0.0, 0.0}, {1.0, 0.0}}}, 2};
    CHECK(dist_to_polytope(seg, {0.5, 1.0}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dist_to_polytope(seg, {0.3, 0.0}) <= 1e-6);

    auto inst = two_state_box(quadratic({0.0, 0.0}));
    auto poly = MixturePolytope::from_instance(inst);
    // nearest point of [0, 0.5]^2 to (1, 1) is (0.5, 0.5)
    CHECK(dist_to_polytope(poly, {1.0, 1.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(dist_to_polytope(poly, {1.0, 1.0}) == doctest::Approx(pdfw::bruteforce::grid_dist(poly, {1.0, 1.0})).epsilon(1e-5));
}

TEST_CASE("membership test via the feasibility LP") {
    auto inst = two_state_box(quadratic({0.0, 0.0}));
    auto poly = MixturePolytope::from_instance(inst);
    CHECK(poly.contains(Vec{0.25, 0.25}));
    CHECK(poly.contains(Vec{0.0, 0.0}));
    CHECK(poly.contains(Vec{0.5, 0.5}));
    CHECK_FALSE(poly.contains(Vec{0.51, 0.0}));
    CHECK_FALSE(poly.contains(Vec{-0.01, 0.2}));
}

TEST_CASE("decomposed LMO agrees with the mixture LP route") {
    auto inst = two_state_box(quadratic({0.0, 0.0}));
    auto poly = MixturePolytope::from_instance(inst);
    Rng rng = Rng::from_seed(11);
    for (int t = 0; t < 50; ++t) {
        Vec cost{rng.next_range(-1.0, 1.0), rng.next_range(-1.0, 1.0)};
        const Vec direct = poly.lmo(cost);
        const auto via_lp = constrained_lmo(poly, cost, LinearConstraints::none(2));
        REQUIRE(via_lp.status == lp::Status::Optimal);
        CHECK(dot(cost, direct) == doctest::Approx(via_lp.value).epsilon(1e-9));
    }
}

TEST_CASE("solve_gamma_star finds interior and boundary optima") {
    SUBCASE("feasible target is the optimum") {
        auto inst = two_state_box(quadratic({0.2, 0.3}));
        auto poly = MixturePolytope::from_instance(inst);
        auto r = solve_gamma_star(inst, poly);
        CHECK(r.value <= 1e-7);
        CHECK(dist2(r.gamma_star, Vec{0.2, 0.3}) <= 1e-3);
    }
    SUBCASE("linear objective with an active constraint") {
        auto inst = interval(linear({-1.0}), {{1.0}}, {0.5});
        auto poly = MixturePolytope::from_instance(inst);
        auto r = solve_gamma_star(inst, poly);
        CHECK(r.gamma_star[0] == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(r.value == doctest::Approx(-0.5).epsilon(1e-8));
    }
    SUBCASE("nonconvex objectives are refused") {
        auto inst = two_state_box(quadratic({0.2, 0.3}));
        inst.objective.convex = false;
        auto poly = MixturePolytope::from_instance(inst);
        CHECK_THROWS_AS(solve_gamma_star(inst, poly), unsupported_instance);
    }
    SUBCASE("empty feasible regions are reported") {
        auto inst = two_state_box(quadratic({0.2, 0.3}));
        inst.constraints = LinearConstraints::from_rows({{1.0, 0.0}}, {-1.0});
        auto poly = MixturePolytope::from_instance(inst);
        CHECK_THROWS_AS(solve_gamma_star(inst, poly), infeasible_error);
    }
    SUBCASE("matches the grid oracle on a constrained mixture") {
        auto inst = two_state_box(quadratic({0.6, 0.6}));
        inst.constraints = LinearConstraints::from_rows({{1.0, 1.0}}, {0.6});
        auto poly = MixturePolytope::from_instance(inst);
        auto r = solve_gamma_star(inst, poly);
        CHECK(r.value == doctest::Approx(pdfw::bruteforce::grid_min_objective(inst, poly)).epsilon(1e-4));
    }
}

TEST_CASE("fw_gap dominates convex suboptimality on feasible points") {
    auto inst = two_state_box(quadratic({0.6, 0.6}));
    inst.constraints = LinearConstraints::from_rows({{1.0, 1.0}}, {0.6});
    auto poly = MixturePolytope::from_instance(inst);
    const auto star = solve_gamma_star(inst, poly);
    CHECK(fw_gap(inst, poly, star.gamma_star) <= 1e-6);

    Rng rng = Rng::from_seed(3);
    for (int t = 0; t < 25; ++t) {
        Vec g{rng.next_range(0.0, 0.5), rng.next_range(0.0, 0.5)};
        if (g[0] + g[1] > 0.6) continue;  // stay feasible
        const double gap = fw_gap(inst, poly, g);
        CHECK(gap >= -1e-9);
        CHECK(gap >= inst.objective.value(g) - star.value - 1e-7);
    }
}

TEST_CASE("certify_slater margins") {
    SUBCASE("interval with gamma <= 0.5") {
        auto inst = interval(linear({1.0}), {{1.0}}, {0.5});
        auto poly = MixturePolytope::from_instance(inst);
        auto cert = certify_slater(inst, poly);
        REQUIRE(cert.has_value());
        CHECK(cert->margin == doctest::Approx(0.5).epsilon(1e-9));
        const Vec r = inst.constraints.residual(cert->witness_mean);
        CHECK(r[0] <= -cert->margin + 1e-9);
    }
    SUBCASE("boundary-only constraint yields no certificate") {
        auto inst = interval(linear({1.0}), {{1.0}}, {0.0});
        auto poly = MixturePolytope::from_instance(inst);
        CHECK_FALSE(certify_slater(inst, poly).has_value());
    }
    SUBCASE("two constraints match the grid search") {
        auto inst = two_state_box(quadratic({0.0, 0.0}));
        inst.constraints = LinearConstraints::from_rows({{1.0, 0.5}, {0.25, 1.0}}, {0.4, 0.3});
        auto poly = MixturePolytope::from_instance(inst);
        auto cert = certify_slater(inst, poly);
        REQUIRE(cert.has_value());
        CHECK(cert->margin == doctest::Approx(pdfw::bruteforce::grid_slater_margin(inst, poly)).epsilon(1e-4));
    }
    SUBCASE("requires at least one constraint") {
        auto inst = interval(linear({1.0}));
        auto poly = MixturePolytope::from_instance(inst);
        CHECK_THROWS_AS(certify_slater(inst, poly), contract_error);
    }
}

TEST_CASE("lagrange_certificate extracts the active multiplier") {
    auto inst = interval(quadratic({0.8}), {{1.0}}, {0.5});
    auto poly = MixturePolytope::from_instance(inst);
    auto star = solve_gamma_star(inst, poly);
    CHECK(star.gamma_star[0] == doctest::Approx(0.5).epsilon(1e-7));
    auto cert = lagrange_certificate(inst, poly, star.gamma_star);
    REQUIRE(cert.lambda.size() == 1);
    // KKT at the boundary: lambda = -f'(0.5) = 0.6
    CHECK(cert.lambda[0] == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(cert.checked_gap <= 1e-7);
}

TEST_CASE("lagrange multiplier is zero when the optimum is interior") {
    auto inst = two_state_box(quadratic({0.2, 0.2}));
    inst.constraints = LinearConstraints::from_rows({{1.0, 0.0}}, {0.45});
    auto poly = MixturePolytope::from_instance(inst);
    auto star = solve_gamma_star(inst, poly);
    auto cert = lagrange_certificate(inst, poly, star.gamma_star);
    CHECK(cert.lambda[0] == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(cert.checked_gap <= 1e-7);
}

TEST_CASE("fw_gap matches the grid oracle on random points") {
    auto inst = two_state_box(quadratic({0.6, 0.1}));
    inst.constraints = LinearConstraints::from_rows({{1.0, 1.0}}, {0.7});
    auto poly = MixturePolytope::from_instance(inst);
    Rng rng = Rng::from_seed(19);
    for (int t = 0; t < 5; ++t) {
        Vec g{rng.next_range(0.0, 1.0), rng.next_range(0.0, 1.0)};
        CHECK(fw_gap(inst, poly, g) ==
              doctest::Approx(pdfw::bruteforce::grid_fw_gap(inst, poly, g)).epsilon(1e-4));
        CHECK(fw_gap(inst, poly, g) ==
              doctest::Approx(pdfw::bruteforce::geo_fw_gap(inst, poly, g)).epsilon(1e-9));
    }
}

TEST_CASE("planar geometry oracles agree with hand values") {
    // interval case, frozen 1.4 example
    auto inst1 = interval(quadratic({0.3}), {{1.0}}, {0.5});
    auto poly1 = MixturePolytope::from_instance(inst1);
    CHECK(pdfw::bruteforce::geo_fw_gap(inst1, poly1, {1.0}) == doctest::Approx(1.4));
    CHECK(pdfw::bruteforce::geo_dist(poly1, {1.3}) == doctest::Approx(0.3));
    CHECK(pdfw::bruteforce::geo_dist(poly1, {0.4}) == doctest::Approx(0.0));

    // planar mixture box [0, 0.5]^2
    auto inst2 = two_state_box(quadratic({0.0, 0.0}));
    auto poly2 = MixturePolytope::from_instance(inst2);
    CHECK(pdfw::bruteforce::geo_dist(poly2, {1.0, 1.0}) == doctest::Approx(std::sqrt(0.5)));
    CHECK(pdfw::bruteforce::geo_dist(poly2, {0.25, 0.1}) == doctest::Approx(0.0));
    CHECK(pdfw::bruteforce::geo_dist(poly2, {0.25, -0.2}) == doctest::Approx(0.2));
    // gap of f = ||.||^2 at (0.5, 0.5): grad (1,1), min over box is 0 at origin
    CHECK(pdfw::bruteforce::geo_fw_gap(inst2, poly2, {0.5, 0.5}) == doctest::Approx(1.0));
}

TEST_CASE("perturbation property is exact for linear objectives") {
    auto inst = two_state_box(linear({0.8, -0.4}));
    inst.bounds = compute_bounds(inst);
    auto poly = MixturePolytope::from_instance(inst);
    // gap(x) - gap(y) = <grad, x - y> for constant gradients, so the
    // (2DL + M)||x - y|| envelope with L = 0 is met with slack
    std::vector<std::pair<Vec, Vec>> pairs;
    Rng rng = Rng::from_seed(23);
    for (int k = 0; k < 20; ++k)
        pairs.push_back({{rng.next_unit(), rng.next_unit()}, {rng.next_unit(), rng.next_unit()}});
    pairs.push_back({{0.3, 0.3}, {0.3, 0.3}});  // identical pair, both sides zero
    const auto rep = gap_perturbation_check(inst, poly, pairs);
    CHECK(rep.passed);
}
