#include <cmath>

#include "doctest.h"
#include "pdfw/algorithms.hpp"
#include "pdfw/distributed.hpp"
#include "pdfw/problems.hpp"

using namespace pdfw;
using dist::GraphTopology;
using dist::Node;

namespace {

// One-dimensional node with local rates {0, v_max}, quadratic pulls on both
// the local variable and the shared box variable.
Node quad_node(double v_max, double gamma_target, double theta_target, int n_states = 1) {
    Node n;
    n.states = n_states == 1 ? StateModel::single() : StateModel::uniform(n_states);
    for (int s = 0; s < n_states; ++s) {
        const double hi = v_max * (1.0 + 0.25 * s);
        n.sets.push_back(DecisionSet::finite({{0.0}, {hi}}));
    }
    n.objective = dist::separable(problems::quadratic_objective({gamma_target}),
                                  problems::quadratic_objective({theta_target}));
    n.theta_set = DecisionSet::box({0.0}, {1.0});
    return n;
}

AlgoConfig cube_cfg(long long T, std::uint64_t seed) {
    AlgoConfig cfg;
    cfg.T = T;
    cfg.schedule = Schedule::CubeRoot;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("graph construction validates shape and connectivity") {
    auto cycle = GraphTopology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(cycle.neighbors[0] == std::vector<int>{1, 3});
    CHECK(cycle.adjacent(2, 3));
    CHECK_FALSE(cycle.adjacent(0, 2));

    CHECK_THROWS_AS(GraphTopology::from_edges(3, {{0, 1}}), dist::graph_error);   // disconnected
    CHECK_THROWS_AS(GraphTopology::from_edges(2, {{0, 0}}), dist::graph_error);   // self-loop
    CHECK_THROWS_AS(GraphTopology::from_edges(2, {{0, 1}, {1, 0}}), dist::graph_error);
    CHECK(GraphTopology::from_edges(1, {}).K == 1);  // single node is connected
}

TEST_CASE("node_step_theta follows the box rule on the combined cost") {
    Node n = quad_node(1.0, 0.5, 0.5);
    const Vec gamma{0.0}, beta{0.0};

    // all queues zero, grad_theta f = 2(0 - 0.5) = -1 -> upper corner
    CHECK(dist::node_step_theta(n, gamma, beta, {0.0}, 1.0) == Vec{1.0});
    // positive gradient -> lower corner
    Node pos = quad_node(1.0, 0.5, -0.3);  // grad at 0 is +0.6
    CHECK(dist::node_step_theta(pos, gamma, beta, {0.0}, 1.0) == Vec{0.0});
    // V = 0 with negative net queue pressure -> upper corner
    CHECK(dist::node_step_theta(pos, gamma, beta, {-2.0}, 0.0) == Vec{1.0});
    // symmetric queues cancel: decision depends only on the gradient
    CHECK(dist::node_step_theta(n, gamma, beta, {7.25 - 7.25}, 1.0) == Vec{1.0});
}

TEST_CASE("node_step_x minimizes the local linearization") {
    Node n = quad_node(1.0, 0.9, 0.5);
    // grad at gamma = 0 is 2(0 - 0.9) < 0 -> far vertex
    CHECK(dist::node_step_x(n, 0, {0.0}, {0.0}, 1.0) == Vec{1.0});
    // zero gradient -> lowest-index vertex
    Node flat = quad_node(1.0, 0.0, 0.5);
    CHECK(dist::node_step_x(flat, 0, {0.0}, {0.0}, 1.0) == Vec{0.0});
}

TEST_CASE("edge_queue_update truncates entrywise") {
    CHECK(dist::edge_queue_update({0.0}, {0.3}, {0.3}) == Vec{0.0});
    CHECK(dist::edge_queue_update({1.0}, {0.0}, {2.0}) == Vec{0.0});
    CHECK(dist::edge_queue_update({0.0}, {0.5}, {0.2}) == Vec{0.3});
}

TEST_CASE("single node with no shared variable equals plain PDFW exactly") {
    auto graph = GraphTopology::from_edges(1, {});
    Node n;
    n.states = StateModel::uniform(2);
    n.sets = {DecisionSet::finite({{0.0, 0.0}, {1.0, 0.2}, {0.3, 0.9}}),
              DecisionSet::finite({{0.0, 0.0}, {0.5, 0.5}})};
    n.objective = dist::gamma_only(problems::quadratic_objective({0.4, 0.3}));

    auto cfg = cube_cfg(500, 13);
    auto d = dist::run_distributed(graph, {n}, cfg);

    ProblemInstance inst;
    inst.name = "single";
    inst.states = n.states;
    inst.decision_sets = n.sets;
    inst.objective = problems::quadratic_objective({0.4, 0.3});
    inst.constraints = LinearConstraints::none(2);
    auto c = run_pdfw(inst, cfg);

    CHECK(d.nodes[0].xs == c.trace.xs);
    CHECK(d.nodes[0].gammas == c.trace.gammas);
    CHECK(d.alpha == c.trace.alpha);
    CHECK(d.gamma_alpha[0] == c.gamma_alpha);
}

TEST_CASE("stacked instance reproduces the distributed run exactly") {
    SUBCASE("two-node path") {
        auto graph = GraphTopology::from_edges(2, {{0, 1}});
        std::vector<Node> nodes{quad_node(1.0, 0.7, 0.2, 2), quad_node(0.8, 0.3, 0.8)};
        auto cfg = cube_cfg(800, 21);
        auto d = dist::run_distributed(graph, nodes, cfg);

        auto inst = dist::to_instance(graph, nodes);
        auto c = run_pdfw(inst, cfg);
        const auto lay = dist::stacked_layout(nodes);

        REQUIRE(c.trace.dim == lay.total_dim);
        for (long long t = 0; t < cfg.T; ++t) {
            for (int i = 0; i < 2; ++i) {
                const int di = nodes[i].d();
                for (int j = 0; j < di; ++j) {
                    CHECK(c.trace.x(t)[lay.gamma_offset[i] + j] == d.nodes[i].x(t, di)[j]);
                    CHECK(c.trace.gamma(t)[lay.gamma_offset[i] + j] == d.nodes[i].gamma(t, di)[j]);
                }
                CHECK(c.trace.x(t)[lay.theta_offset[i]] == d.nodes[i].theta(t, 1)[0]);
                CHECK(c.trace.gamma(t)[lay.theta_offset[i]] == d.nodes[i].beta(t, 1)[0]);
            }
            // consensus queue rows in edge order
            for (std::size_t e = 0; e < d.edge_order.size(); ++e)
                CHECK(c.trace.queue(t + 1)[e] == d.edge_queue(static_cast<int>(e), t + 1)[0]);
        }
        CHECK(c.trace.alpha == d.alpha);
    }
    SUBCASE("four-node cycle, shorter horizon") {
        auto graph = GraphTopology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
        std::vector<Node> nodes{quad_node(1.0, 0.5, 0.1), quad_node(1.0, 0.5, 0.9),
                                quad_node(1.0, 0.5, 0.3), quad_node(1.0, 0.5, 0.7)};
        auto cfg = cube_cfg(300, 34);
        auto d = dist::run_distributed(graph, nodes, cfg);
        auto inst = dist::to_instance(graph, nodes);
        CHECK(inst.decision_sets[0].vertices.size() == 256);
        auto c = run_pdfw(inst, cfg);
        const auto lay = dist::stacked_layout(nodes);
        bool all_equal = true;
        for (long long t = 0; t < cfg.T && all_equal; ++t)
            for (int i = 0; i < 4; ++i) {
                all_equal = all_equal &&
                            c.trace.x(t)[lay.gamma_offset[i]] == d.nodes[i].x(t, 1)[0] &&
                            c.trace.x(t)[lay.theta_offset[i]] == d.nodes[i].theta(t, 1)[0];
            }
        CHECK(all_equal);
    }
}

TEST_CASE("identical symmetric nodes stay in consensus") {
    auto graph = GraphTopology::from_edges(2, {{0, 1}});
    std::vector<Node> nodes{quad_node(1.0, 0.5, 0.65), quad_node(1.0, 0.5, 0.65)};
    auto cfg = cube_cfg(400, 8);
    auto d = dist::run_distributed(graph, nodes, cfg);
    CHECK(d.nodes[0].betas == d.nodes[1].betas);
    CHECK(d.beta_alpha[0] == d.beta_alpha[1]);
}

TEST_CASE("edge queues dominate the summed consensus violations") {
    auto graph = GraphTopology::from_edges(3, {{0, 1}, {1, 2}});
    std::vector<Node> nodes{quad_node(1.0, 0.4, 0.1, 2), quad_node(1.0, 0.6, 0.9),
                            quad_node(0.5, 0.2, 0.5, 2)};
    auto cfg = cube_cfg(600, 55);
    auto d = dist::run_distributed(graph, nodes, cfg);
    for (std::size_t e = 0; e < d.edge_order.size(); ++e) {
        const auto [i, j] = d.edge_order[e];
        double running = 0.0;
        for (long long t = 0; t < cfg.T; ++t)
            running += d.nodes[i].theta(t, 1)[0] - d.nodes[j].theta(t, 1)[0];
        CHECK(running <= d.edge_queue(static_cast<int>(e), cfg.T)[0] + 1e-9);
    }
}

TEST_CASE("beta path mean equals the exact alpha expectation") {
    auto graph = GraphTopology::from_edges(2, {{0, 1}});
    std::vector<Node> nodes{quad_node(1.0, 0.5, 0.2), quad_node(1.0, 0.5, 0.8)};
    auto cfg = cube_cfg(200, 3);
    auto d = dist::run_distributed(graph, nodes, cfg);
    for (int i = 0; i < 2; ++i) {
        double sum = 0.0;
        for (long long t = -1; t <= cfg.T - 2; ++t) sum += d.nodes[i].beta(t, 1)[0];
        CHECK(d.beta_path_mean[i][0] == doctest::Approx(sum / double(cfg.T)).epsilon(1e-12));
    }
}

TEST_CASE("consensus residual shrinks with the horizon") {
    auto graph = GraphTopology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    std::vector<Node> nodes{quad_node(1.0, 0.5, 0.1), quad_node(1.0, 0.5, 0.9),
                            quad_node(1.0, 0.5, 0.3), quad_node(1.0, 0.5, 0.7)};
    auto residual = [&](long long T) {
        auto d = dist::run_distributed(graph, nodes, cube_cfg(T, 7));
        double r = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                r = std::max(r, std::abs(d.beta_path_mean[i][0] - d.beta_path_mean[j][0]));
        return r;
    };
    const double r3 = residual(1000), r5 = residual(100000);
    CHECK(r5 < r3);
}
