#include "doctest.h"
#include "pdfw/core.hpp"

using namespace pdfw;

TEST_CASE("lmo over finite vertices enumerates and breaks ties by lowest index") {
    auto set = DecisionSet::finite({{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}});
    CHECK(lmo(set, Vec{1.0, 2.0}) == Vec{1.0, 0.0});

    auto two = DecisionSet::finite({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(lmo(two, Vec{0.0, 0.0}) == Vec{1.0, 0.0});
}

TEST_CASE("lmo over a box follows the sign rule with lower on zero cost") {
    auto set = DecisionSet::box({0.0, 0.0}, {1.0, 1.0});
    CHECK(lmo(set, Vec{1.0, -1.0}) == Vec{0.0, 1.0});
    CHECK(lmo(set, Vec{0.0, 2.0}) == Vec{0.0, 0.0});
}

TEST_CASE("lmo over a simplex picks the first minimal coordinate vertex") {
    auto set = DecisionSet::simplex(3, 2.0);
    CHECK(lmo(set, Vec{3.0, -1.0, -1.0}) == Vec{0.0, 2.0, 0.0});
    CHECK(lmo(set, Vec{1.0, 1.0, 1.0}) == Vec{2.0, 0.0, 0.0});
}

TEST_CASE("lmo rejects dimension mismatches") {
    auto set = DecisionSet::finite({{1.0, 0.0}});
    CHECK_THROWS_AS(lmo(set, Vec{1.0, 2.0, 3.0}), contract_error);
}

TEST_CASE("finite vertex lists are deduplicated") {
    auto set = DecisionSet::finite({{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    CHECK(set.vertices.size() == 2);
}

TEST_CASE("queue_update truncates at zero") {
    auto c = LinearConstraints::from_rows({{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5});
    auto q = QueueState::zero(2);
    auto q1 = queue_update(q, Vec{1.0, 0.0}, c);
    CHECK(q1.q == Vec{0.5, 0.0});

    // q=(2,1), residuals (-3, 0.5) -> (0, 1.5)
    auto c2 = LinearConstraints::from_rows({{1.0, 0.0}, {0.0, 1.0}}, {4.0, -0.5});
    QueueState q2{{2.0, 1.0}};
    auto q3 = queue_update(q2, Vec{1.0, 0.0}, c2);
    CHECK(q3.q[0] == doctest::Approx(0.0));
    CHECK(q3.q[1] == doctest::Approx(1.5));
}

TEST_CASE("queue_update with no constraints is a no-op on an empty queue") {
    auto c = LinearConstraints::none(2);
    auto q = QueueState::zero(0);
    CHECK(queue_update(q, Vec{1.0, 1.0}, c).q.empty());
}

TEST_CASE("pdfw_cost combines the penalty gradient and queue-weighted rows") {
    auto c = LinearConstraints::from_rows({{1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0});
    CHECK(pdfw_cost(2.0, Vec{1.0, 1.0}, QueueState{{1.0, 0.0}}, c) == Vec{3.0, 2.0});
    CHECK(pdfw_cost(1.0, Vec{0.0, 0.0}, QueueState::zero(2), c) == Vec{0.0, 0.0});
    CHECK(pdfw_cost(0.0, Vec{5.0, 5.0}, QueueState{{1.0, 1.0}}, c) == Vec{1.0, 1.0});
}

namespace {

ProblemInstance line_instance(double grad_sign) {
    ProblemInstance inst;
    inst.name = "line";
    inst.states = StateModel::single();
    inst.decision_sets = {DecisionSet::finite({{0.0, 0.0}, {1.0, 0.0}})};
    inst.objective.dim = 2;
    inst.objective.convex = true;
    inst.objective.smoothness = 0.0;
    inst.objective.value = [grad_sign](const Vec& g) { return grad_sign * g[0]; };
    inst.objective.gradient = [grad_sign](const Vec&) { return Vec{grad_sign, 0.0}; };
    inst.constraints = LinearConstraints::none(2);
    inst.validate();
    return inst;
}

}  // namespace

TEST_CASE("pdfw_step on a two-point segment") {
    ResolvedConfig cfg{1, 1.0, 0.5, 0};

    auto inc = line_instance(1.0);  // gradient (1,0) prefers the origin
    auto r = pdfw_step(inc, cfg, zeros(2), QueueState::zero(0), 0);
    CHECK(r.x == Vec{0.0, 0.0});
    CHECK(r.gamma_next == Vec{0.0, 0.0});

    auto dec = line_instance(-1.0);
    auto r2 = pdfw_step(dec, cfg, zeros(2), QueueState::zero(0), 0);
    CHECK(r2.x == Vec{1.0, 0.0});
    CHECK(r2.gamma_next == Vec{0.5, 0.0});
}

TEST_CASE("pdfw_step lets a large queue dominate the gradient") {
    auto inst = line_instance(-1.0);
    inst.constraints = LinearConstraints::from_rows({{1.0, 0.0}}, {0.0});
    ResolvedConfig cfg{1, 1.0, 0.5, 0};
    auto r = pdfw_step(inst, cfg, zeros(2), QueueState{{10.0}}, 0);
    CHECK(r.x == Vec{0.0, 0.0});  // cost on x1 is -1 + 10 = 9
}

TEST_CASE("state sampler is reproducible and inverse-CDF consistent") {
    StateModel sm = StateModel{{}, {0.2, 0.5, 0.3}};
    sm.validate();
    Rng a = Rng::stream(42, 0);
    Rng b = Rng::stream(42, 0);
    std::vector<int> seq_a, seq_b;
    for (int i = 0; i < 200; ++i) {
        seq_a.push_back(sm.sample(a));
        seq_b.push_back(sm.sample(b));
    }
    CHECK(seq_a == seq_b);

    long long counts[3] = {0, 0, 0};
    Rng c = Rng::stream(7, 0);
    const int n = 200000;
    for (int i = 0; i < n; ++i) ++counts[sm.sample(c)];
    CHECK(std::abs(counts[0] / double(n) - 0.2) < 0.01);
    CHECK(std::abs(counts[1] / double(n) - 0.5) < 0.01);
}

TEST_CASE("schedules resolve V and eta from the horizon") {
    AlgoConfig cfg;
    cfg.T = 1000;
    cfg.schedule = Schedule::CubeRoot;
    auto r = resolve(cfg);
    CHECK(r.V == doctest::Approx(10.0));
    CHECK(r.eta == doctest::Approx(0.01));

    cfg.schedule = Schedule::SquareRoot;
    auto s = resolve(cfg);
    CHECK(s.V == doctest::Approx(31.6227766));
    CHECK(s.eta == doctest::Approx(1.0 / 31.6227766));

    cfg.schedule = Schedule::Fixed;
    cfg.eta = 1.5;
    CHECK_THROWS_AS(resolve(cfg), contract_error);
}

TEST_CASE("probabilities must sum to one") {
    StateModel bad{{}, {0.5, 0.4}};
    CHECK_THROWS_AS(bad.validate(), contract_error);
}
