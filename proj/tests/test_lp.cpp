#include "doctest.h"
#include "pdfw/lp.hpp"
#include "pdfw/rng.hpp"

using namespace pdfw;
using namespace pdfw::lp;

TEST_CASE("maximize x1 + x2 over the unit simplex face") {
    Problem p;
    p.cost = {1.0, 1.0};
    p.maximize = true;
    p.add_row({1.0, 1.0}, Sense::LE, 1.0);
    auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.certificate_slack <= 1e-9);
}

TEST_CASE("contradictory bounds are infeasible") {
    Problem p;
    p.cost = {1.0};
    p.add_row({1.0}, Sense::GE, 2.0);
    p.add_row({1.0}, Sense::LE, 1.0);
    CHECK(solve(p).status == Status::Infeasible);
}

TEST_CASE("maximize x with no upper bound is unbounded") {
    Problem p;
    p.cost = {1.0};
    p.maximize = true;
    CHECK(solve(p).status == Status::Unbounded);
}

TEST_CASE("equality rows and nontrivial bounds") {
    // min 2x + 3y  s.t. x + y = 1, x in [0.2, inf), y in [0, 0.5]
    Problem p;
    p.cost = {2.0, 3.0};
    p.lower = {0.2, 0.0};
    p.upper = {kNoUpper, 0.5};
    p.add_row({1.0, 1.0}, Sense::EQ, 1.0);
    auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[0] == doctest::Approx(1.0));
    CHECK(s.x[1] == doctest::Approx(0.0));
    CHECK(s.value == doctest::Approx(2.0));
}

TEST_CASE("shadow prices match the objective change for an active row") {
    // min -x1 - 2 x2 s.t. x1 + x2 <= 4, x2 <= 3
    Problem p;
    p.cost = {-1.0, -2.0};
    p.add_row({1.0, 1.0}, Sense::LE, 4.0);
    p.add_row({0.0, 1.0}, Sense::LE, 3.0);
    auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.value == doctest::Approx(-7.0));
    CHECK(s.row_duals[0] == doctest::Approx(-1.0));
    CHECK(s.row_duals[1] == doctest::Approx(-1.0));
    CHECK(std::abs(s.value - s.dual_value) <= 1e-7 * (1.0 + std::abs(s.value)));
}

TEST_CASE("strong duality holds on random dense LPs") {
    Rng rng = Rng::from_seed(2024);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_index(4));
        const int m = 1 + static_cast<int>(rng.next_index(4));
        Problem p;
        p.cost.resize(n);
        for (auto& c : p.cost) c = rng.next_range(-2.0, 2.0);
        p.upper.assign(n, 1.0);
        p.lower.assign(n, 0.0);
        for (int i = 0; i < m; ++i) {
            Vec row(n);
            for (auto& a : row) a = rng.next_range(-1.0, 1.0);
            const double rhs = rng.next_range(-0.5, 1.5);
            p.add_row(std::move(row), i % 3 == 2 ? Sense::GE : Sense::LE, rhs);
        }
        auto s = solve(p);
        if (s.status != Status::Optimal) continue;
        ++solved;
        CHECK(std::abs(s.value - s.dual_value) <= 1e-7 * (1.0 + std::abs(s.value)));
        CHECK(s.certificate_slack <= 1e-9);
        for (int i = 0; i < m; ++i) {
            const double lhs = dot(p.rows[i], s.x);
            if (p.senses[i] == Sense::LE) CHECK(lhs <= p.rhs[i] + 1e-8);
            if (p.senses[i] == Sense::GE) CHECK(lhs >= p.rhs[i] - 1e-8);
        }
    }
    CHECK(solved > 20);
}

TEST_CASE("degenerate cycling-prone LP still terminates under Bland") {
    // Beale's classic cycling example for the wrong pivoting rule.
    Problem p;
    p.cost = {-0.75, 150.0, -0.02, 6.0};
    p.add_row({0.25, -60.0, -0.04, 9.0}, Sense::LE, 0.0);
    p.add_row({0.5, -90.0, -0.02, 3.0}, Sense::LE, 0.0);
    p.add_row({0.0, 0.0, 1.0, 0.0}, Sense::LE, 1.0);
    auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.value == doctest::Approx(-0.05));
}
