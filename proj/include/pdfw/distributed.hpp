#pragma once

#include <filesystem>

#include "pdfw/core.hpp"

namespace pdfw::dist {

struct graph_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Undirected connected graph over nodes 0..K-1.
struct GraphTopology {
    int K = 0;
    std::vector<std::pair<int, int>> edges;      // normalized i < j
    std::vector<std::vector<int>> neighbors;     // sorted ascending

    // Validates: indices in range, no self-loops, no duplicates, connected.
    static GraphTopology from_edges(int K, std::vector<std::pair<int, int>> edges);

    bool adjacent(int i, int j) const;
};

// Local objective f(gamma, theta); gradients taken per block.
struct NodeObjective {
    int d = 0;  // gamma dimension
    int p = 0;  // theta dimension
    std::function<double(const Vec&, const Vec&)> value;
    std::function<Vec(const Vec&, const Vec&)> grad_gamma;
    std::function<Vec(const Vec&, const Vec&)> grad_theta;
    bool convex = false;
    double smoothness = 0.0;
    // Retained by separable()/gamma_only() so network files can round-trip.
    Objective gamma_part, theta_part;
};

// f(gamma, theta) = f_gamma(gamma) + f_theta(theta).
NodeObjective separable(const Objective& f_gamma, const Objective& f_theta);
NodeObjective gamma_only(const Objective& f_gamma);  // p = 0, no shared variable

struct Node {
    StateModel states;
    std::vector<DecisionSet> sets;  // per local state
    NodeObjective objective;
    DecisionSet theta_set;          // Box in R^p (ignored when p = 0)

    int d() const { return objective.d; }
    int p() const { return objective.p; }
    void validate() const;
};

// Step 1: x = argmin over the slot's set of <grad_gamma f(gamma, beta), x>.
// The positive factor V leaves the argmin unchanged and keeps the cost
// bit-identical to the stacked centralized run.
Vec node_step_x(const Node& node, int state_index, const Vec& gamma_prev, const Vec& beta_prev,
                double V);

// Step 2: theta = argmin over Theta of
//   V <grad_theta f(gamma, beta), theta> + <queue_diff, theta>,
// where queue_diff = sum_{j in N(i)} (Q_ij - Q_ji) is the only queue
// information a node may see.
Vec node_step_theta(const Node& node, const Vec& gamma_prev, const Vec& beta_prev,
                    const Vec& queue_diff, double V);

// Q_ij' = max{Q_ij + theta_i - theta_j, 0} entrywise.
Vec edge_queue_update(const Vec& q_ij, const Vec& theta_i, const Vec& theta_j);

struct NodeTrace {
    std::vector<double> xs;      // T * d
    std::vector<double> thetas;  // T * p
    std::vector<double> gammas;  // (T+1) * d, starting at gamma_{-1}
    std::vector<double> betas;   // (T+1) * p, starting at beta_{-1}

    std::span<const double> x(long long t, int d) const {
        return {xs.data() + static_cast<std::size_t>(t) * d, static_cast<std::size_t>(d)};
    }
    std::span<const double> theta(long long t, int p) const {
        return {thetas.data() + static_cast<std::size_t>(t) * p, static_cast<std::size_t>(p)};
    }
    std::span<const double> gamma(long long t, int d) const {
        return {gammas.data() + static_cast<std::size_t>(t + 1) * d, static_cast<std::size_t>(d)};
    }
    std::span<const double> beta(long long t, int p) const {
        return {betas.data() + static_cast<std::size_t>(t + 1) * p, static_cast<std::size_t>(p)};
    }
};

struct DistResult {
    long long T = 0;
    int p = 0;
    long long alpha = -1;
    std::vector<NodeTrace> nodes;
    // Ordered neighbor pairs (i, j ascending within each i) and their queue
    // series, (T+1) * p each.
    std::vector<std::pair<int, int>> edge_order;
    std::vector<std::vector<double>> edge_queues;
    std::vector<Vec> gamma_alpha;
    std::vector<Vec> beta_alpha;
    // Exact per-node mean of beta_t over t in {-1, ..., T-2}; equals
    // E[beta_alpha | trajectory] without sampling noise.
    std::vector<Vec> beta_path_mean;

    std::span<const double> edge_queue(int e, long long t) const {
        return {edge_queues[static_cast<std::size_t>(e)].data() + static_cast<std::size_t>(t) * p,
                static_cast<std::size_t>(p)};
    }
};

// Synchronous rounds with one-round-delay lossless queue exchange; local
// states are drawn by decomposing one product-state draw per round so the
// run matches the stacked centralized instance draw for draw. A single
// shared alpha stream selects the output index at every node.
DistResult run_distributed(const GraphTopology& graph, const std::vector<Node>& nodes,
                           const AlgoConfig& cfg);

// Offsets of each node's gamma and theta block inside the stacked vector
// [gamma_0 .. gamma_{K-1}, theta_0 .. theta_{K-1}].
struct StackedLayout {
    std::vector<int> gamma_offset;
    std::vector<int> theta_offset;
    int total_dim = 0;
};
StackedLayout stacked_layout(const std::vector<Node>& nodes);

// The product state model shared by the simulator and the stacked instance.
StateModel product_state_model(const std::vector<Node>& nodes);

// Rewrites the distributed problem as a single ProblemInstance: product
// states, product decision sets (finite gamma sets and box corners
// enumerated), summed objective, and one consensus row theta_i <= theta_j
// per ordered neighbor pair and coordinate. Requires finite per-node sets.
ProblemInstance to_instance(const GraphTopology& graph, const std::vector<Node>& nodes,
                            const std::string& name = "stacked");

struct Network {
    GraphTopology graph;
    std::vector<Node> nodes;
    std::string name;
};

// Network files: version field, the graph as an edge list, the shared box,
// and per-node states and separable objectives (see README for the schema).
void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace pdfw::dist
