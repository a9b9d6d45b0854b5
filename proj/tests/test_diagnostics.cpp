#include <cmath>

#include "doctest.h"
#include "pdfw/diagnostics.hpp"
#include "pdfw/problems.hpp"

using namespace pdfw;

namespace {

ProblemInstance box_instance(Objective f) {
    ProblemInstance inst;
    inst.name = "box";
    inst.states = StateModel::single();
    inst.decision_sets = {DecisionSet::box({0.0, 0.0}, {1.0, 1.0})};
    inst.objective = std::move(f);
    inst.constraints = LinearConstraints::none(2);
    inst.validate();
    return inst;
}

}  // namespace

TEST_CASE("compute_bounds on a linear objective over the unit box") {
    auto inst = box_instance(problems::linear_objective({-1.0, -1.0}));
    auto bc = compute_bounds(inst);
    CHECK(bc.M == doctest::Approx(std::sqrt(2.0)));
    CHECK(bc.K == doctest::Approx(2.0));
    CHECK(bc.L == 0.0);
    CHECK(bc.D == doctest::Approx(std::sqrt(2.0)));
    CHECK(bc.certified);
}

TEST_CASE("compute_bounds residual bound on a single-vertex set") {
    ProblemInstance inst;
    inst.states = StateModel::single();
    inst.decision_sets = {DecisionSet::finite({{1.0, 0.0}})};
    inst.objective = problems::linear_objective({0.0, 0.0});
    inst.constraints = LinearConstraints::from_rows({{1.0, 0.0}}, {0.0});
    inst.validate();
    auto bc = compute_bounds(inst);
    CHECK(bc.B == doctest::Approx(1.0));
    CHECK(bc.b_squared == doctest::Approx(1.0));
}

TEST_CASE("compute_bounds on a quadratic over the unit box") {
    auto inst = box_instance(problems::quadratic_objective({0.0, 0.0}));
    auto bc = compute_bounds(inst);
    CHECK(bc.M == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(bc.K == doctest::Approx(2.0));
    CHECK(bc.L == doctest::Approx(2.0));
}

TEST_CASE("compute_bounds falls back to sampling without closed forms") {
    Objective f = problems::quadratic_objective({0.0, 0.0});
    f.box_sup_abs = nullptr;
    f.box_sup_grad_norm = nullptr;
    auto inst = box_instance(std::move(f));
    auto bc = compute_bounds(inst);
    CHECK_FALSE(bc.certified);
    CHECK(bc.K <= 2.0 + 1e-12);
    CHECK(bc.K >= 1.5);  // sampled lower estimate of the true 2.0
    CHECK(bc.M <= 2.0 * std::sqrt(2.0) + 1e-12);
}

TEST_CASE("fit_rate recovers exact decay exponents") {
    std::vector<std::pair<double, double>> one_over_t, inv_sqrt, flat;
    for (double T : {100.0, 1000.0, 10000.0}) {
        one_over_t.push_back({T, 3.7 / T});
        inv_sqrt.push_back({T, 0.9 / std::sqrt(T)});
        flat.push_back({T, 0.42});
    }
    CHECK(fit_rate(one_over_t).slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit_rate(inv_sqrt).slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit_rate(flat).slope == doctest::Approx(0.0));
}

TEST_CASE("fit_rate excludes nonpositive errors") {
    std::vector<std::pair<double, double>> s{{10.0, 1.0}, {100.0, 0.1}, {1000.0, -0.5}, {10000.0, 0.001}};
    auto r = fit_rate(s);
    CHECK(r.excluded == 1);
    CHECK(r.used == 3);
}

TEST_CASE("slater_constant evaluates the closed form") {
    BoundConstants degenerate;  // all zeros
    CHECK(slater_constant(degenerate, 1.0, 0.0) == doctest::Approx(1.0));

    BoundConstants bc;
    bc.B = 1.0;
    bc.b_squared = 1.0;
    bc.L = 0.0;
    bc.D = 1.0;
    bc.M = 0.0;
    bc.K = 0.0;
    CHECK(slater_constant(bc, 1.0, 0.0) == doctest::Approx(38.81733244630646).epsilon(1e-9));

    // monotone in each constant
    BoundConstants bigger = bc;
    bigger.K = 0.5;
    CHECK(slater_constant(bigger, 1.0, 0.0) > slater_constant(bc, 1.0, 0.0));
    bigger = bc;
    bigger.M = 0.5;
    CHECK(slater_constant(bigger, 1.0, 0.0) > slater_constant(bc, 1.0, 0.0));
    bigger = bc;
    bigger.D = 2.0;
    CHECK(slater_constant(bigger, 1.0, 1.0) > slater_constant(bc, 1.0, 1.0));
    CHECK_THROWS_AS(slater_constant(bc, 0.0, 0.0), contract_error);
}

TEST_CASE("drift_test on a strictly decreasing synthetic process") {
    Rng rng = Rng::from_seed(5);
    Vec z{50.0};
    for (int t = 0; t < 2000; ++t)
        z.push_back(std::max(z.back() + rng.next_range(-1.0, -0.5), 0.0));
    DriftTestConfig cfg;
    cfg.t0 = 4;
    cfg.delta_max = 1.0;
    cfg.xi = 0.5;
    cfg.lambda_threshold = 50.0;  // large enough that E Z(t) stays below the bound
    auto rep = drift_test({z}, cfg);
    CHECK(rep.one_step_ok);
    CHECK((rep.decrease_ok || rep.decrease_vacuous));
    CHECK(rep.expectation_ok);
}

TEST_CASE("drift_test on a biased random walk matches the lemma bound") {
    // +-1 walk: drift -0.5 above 10, +0.5 below; delta_max = 1, xi = 0.5.
    Rng rng = Rng::from_seed(77);
    Vec z{0.0};
    const int steps = 1000000;
    z.reserve(steps + 1);
    for (int t = 0; t < steps; ++t) {
        const double p_up = z.back() > 10.0 ? 0.25 : 0.75;
        const double u = rng.next_unit() < p_up ? 1.0 : -1.0;
        z.push_back(std::max(z.back() + u, 0.0));
    }
    DriftTestConfig cfg;
    cfg.t0 = 1;
    cfg.delta_max = 1.0;
    cfg.xi = 0.5;
    cfg.lambda_threshold = 10.0 + 1.0;  // conditional drift fully -0.5 above this
    auto rep = drift_test({z}, cfg);
    CHECK(rep.one_step_ok);
    CHECK_FALSE(rep.decrease_vacuous);
    CHECK(rep.decrease_ok);
    // E Z(t) <= lambda + (4 d^2/xi) t0 ln(1 + (8 d^2/xi^2) e^{xi/4d}) ~ 39.9
    CHECK(rep.expectation_ok);
    CHECK(rep.max_mean_norm < rep.expectation_bound);
}

TEST_CASE("gradient and smoothness audits accept the shipped families") {
    const Vec lo{0.0, 0.0}, hi{1.0, 1.0};
    auto quad = problems::quadratic_objective({0.3, 0.7});
    CHECK(check_gradient(quad, lo, hi, 10, 1) <= 1e-5);
    CHECK(check_smoothness(quad, lo, hi, 200, 2) <= quad.smoothness + 1e-9);

    auto sig = problems::default_sigmoidal(2);
    CHECK(check_gradient(sig, lo, hi, 10, 3) <= 1e-5);
    CHECK(check_smoothness(sig, lo, hi, 200, 4) <= sig.smoothness + 1e-9);
}

TEST_CASE("theorem bound formulas specialize consistently") {
    BoundConstants bc;
    bc.K = 1.0;
    bc.M = 2.0;
    bc.D = 1.5;
    bc.B = 0.5;
    bc.b_squared = 0.25;
    bc.L = 2.0;
    const long long T = 1000;

    const double t13 = std::cbrt(double(T));
    auto general = convex_bounds_general(bc, t13, 1.0 / (t13 * t13), T);
    auto special = convex_bounds_cuberoot(bc, T);
    CHECK(general.suboptimality == doctest::Approx(special.suboptimality).epsilon(1e-12));
    CHECK(general.violation == doctest::Approx(special.violation).epsilon(1e-12));

    auto ng = nonconvex_bounds_general(bc, t13, 1.0 / (t13 * t13), T);
    auto ns = nonconvex_bounds_cuberoot(bc, T);
    CHECK(ng.gap == doctest::Approx(ns.gap).epsilon(1e-12));
    CHECK(ng.qnorm_over_t == doctest::Approx(ns.qnorm_over_t).epsilon(1e-12));
    CHECK(ng.dist_sq == doctest::Approx(ns.dist_sq).epsilon(1e-12));
    CHECK(ng.violation(1.0) == doctest::Approx(ns.violation(1.0)).epsilon(1e-12));
}
