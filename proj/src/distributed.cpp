#include "pdfw/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "../src/objective_json.hpp"

namespace pdfw::dist {

GraphTopology GraphTopology::from_edges(int K, std::vector<std::pair<int, int>> edges) {
    if (K < 1) throw graph_error("graph: need at least one node");
    GraphTopology g;
    g.K = K;
    g.neighbors.assign(static_cast<std::size_t>(K), {});
    for (auto [i, j] : edges) {
        if (i == j) throw graph_error("graph: self-loop");
        if (i < 0 || j < 0 || i >= K || j >= K) throw graph_error("graph: node index out of range");
        if (i > j) std::swap(i, j);
        if (g.adjacent(i, j)) throw graph_error("graph: duplicate edge");
        g.edges.emplace_back(i, j);
        g.neighbors[static_cast<std::size_t>(i)].push_back(j);
        g.neighbors[static_cast<std::size_t>(j)].push_back(i);
    }
    for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());

    // connectivity by traversal
    std::vector<char> seen(static_cast<std::size_t>(K), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : g.neighbors[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != K) throw graph_error("graph: not connected");
    return g;
}

bool GraphTopology::adjacent(int i, int j) const {
    const auto& nb = neighbors[static_cast<std::size_t>(i)];
    return std::find(nb.begin(), nb.end(), j) != nb.end();
}

NodeObjective separable(const Objective& f_gamma, const Objective& f_theta) {
    NodeObjective f;
    f.d = f_gamma.dim;
    f.p = f_theta.dim;
    f.convex = f_gamma.convex && f_theta.convex;
    f.smoothness = std::max(f_gamma.smoothness, f_theta.smoothness);
    f.value = [f_gamma, f_theta](const Vec& g, const Vec& th) {
        return f_gamma.value(g) + f_theta.value(th);
    };
    f.grad_gamma = [f_gamma](const Vec& g, const Vec&) { return f_gamma.gradient(g); };
    f.grad_theta = [f_theta](const Vec&, const Vec& th) { return f_theta.gradient(th); };
    f.gamma_part = f_gamma;
    f.theta_part = f_theta;
    return f;
}

NodeObjective gamma_only(const Objective& f_gamma) {
    NodeObjective f;
    f.d = f_gamma.dim;
    f.p = 0;
    f.convex = f_gamma.convex;
    f.smoothness = f_gamma.smoothness;
    f.value = [f_gamma](const Vec& g, const Vec&) { return f_gamma.value(g); };
    f.grad_gamma = [f_gamma](const Vec& g, const Vec&) { return f_gamma.gradient(g); };
    f.grad_theta = [](const Vec&, const Vec&) { return Vec{}; };
    f.gamma_part = f_gamma;
    return f;
}

void Node::validate() const {
    states.validate();
    if (static_cast<int>(sets.size()) != states.count())
        throw contract_error("Node: one decision set per state required");
    for (const auto& s : sets) {
        s.validate();
        if (s.dim() != d()) throw contract_error("Node: set dimension mismatch");
    }
    if (p() > 0) {
        if (theta_set.kind != SetKind::Box)
            throw contract_error("Node: theta set must be a box");
        if (theta_set.dim() != p()) throw contract_error("Node: theta dimension mismatch");
    }
    if (!objective.value || !objective.grad_gamma)
        throw contract_error("Node: objective callbacks missing");
}

Vec node_step_x(const Node& node, int state_index, const Vec& gamma_prev, const Vec& beta_prev,
                double V) {
    Vec cost = node.objective.grad_gamma(gamma_prev, beta_prev);
    for (double& c : cost) c *= V;
    return lmo(node.sets[static_cast<std::size_t>(state_index)], cost);
}

Vec node_step_theta(const Node& node, const Vec& gamma_prev, const Vec& beta_prev,
                    const Vec& queue_diff, double V) {
    Vec cost = node.objective.grad_theta(gamma_prev, beta_prev);
    if (cost.size() != queue_diff.size())
        throw contract_error("node_step_theta: queue diff dimension mismatch");
    for (std::size_t k = 0; k < cost.size(); ++k) cost[k] = V * cost[k] + queue_diff[k];
    return lmo(node.theta_set, cost);
}

Vec edge_queue_update(const Vec& q_ij, const Vec& theta_i, const Vec& theta_j) {
    if (q_ij.size() != theta_i.size() || q_ij.size() != theta_j.size())
        throw contract_error("edge_queue_update: dimension mismatch");
    Vec next(q_ij.size());
    for (std::size_t k = 0; k < q_ij.size(); ++k) {
        const double grown = q_ij[k] + (theta_i[k] - theta_j[k]);
        next[k] = grown > 0.0 ? grown : 0.0;
    }
    return next;
}

StateModel product_state_model(const std::vector<Node>& nodes) {
    StateModel m;
    m.probabilities = {1.0};
    for (const auto& node : nodes) {
        Vec next;
        next.reserve(m.probabilities.size() * node.states.probabilities.size());
        for (double p : m.probabilities)
            for (double q : node.states.probabilities) next.push_back(p * q);
        m.probabilities = std::move(next);
    }
    return m;
}

namespace {

// Decomposes a product state index (node 0 most significant).
std::vector<int> decompose_state(const std::vector<Node>& nodes, long long idx) {
    std::vector<int> s(nodes.size(), 0);
    for (std::size_t i = nodes.size(); i-- > 0;) {
        const int n = nodes[i].states.count();
        s[i] = static_cast<int>(idx % n);
        idx /= n;
    }
    return s;
}

}  // namespace

StackedLayout stacked_layout(const std::vector<Node>& nodes) {
    StackedLayout lay;
    int off = 0;
    for (const auto& node : nodes) {
        lay.gamma_offset.push_back(off);
        off += node.d();
    }
    for (const auto& node : nodes) {
        lay.theta_offset.push_back(off);
        off += node.p();
    }
    lay.total_dim = off;
    return lay;
}

DistResult run_distributed(const GraphTopology& graph, const std::vector<Node>& nodes,
                           const AlgoConfig& cfg) {
    if (static_cast<int>(nodes.size()) != graph.K)
        throw contract_error("run_distributed: one node per graph vertex");
    for (const auto& n : nodes) n.validate();
    const int p = nodes.front().p();
    for (const auto& n : nodes)
        if (n.p() != p) throw contract_error("run_distributed: shared theta dimension differs");
    const ResolvedConfig rc = resolve(cfg);
    const long long T = rc.T;
    const int K = graph.K;

    DistResult out;
    out.T = T;
    out.p = p;
    out.nodes.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        auto& tr = out.nodes[static_cast<std::size_t>(i)];
        const int d = nodes[static_cast<std::size_t>(i)].d();
        tr.xs.assign(static_cast<std::size_t>(T) * d, 0.0);
        tr.thetas.assign(static_cast<std::size_t>(T) * p, 0.0);
        tr.gammas.assign(static_cast<std::size_t>(T + 1) * d, 0.0);
        tr.betas.assign(static_cast<std::size_t>(T + 1) * p, 0.0);
    }
    for (int i = 0; i < K; ++i)
        for (int j : graph.neighbors[static_cast<std::size_t>(i)]) out.edge_order.emplace_back(i, j);
    out.edge_queues.assign(out.edge_order.size(),
                           std::vector<double>(static_cast<std::size_t>(T + 1) * p, 0.0));
    const auto edge_index = [&](int i, int j) {
        for (std::size_t e = 0; e < out.edge_order.size(); ++e)
            if (out.edge_order[e] == std::make_pair(i, j)) return static_cast<int>(e);
        throw contract_error("run_distributed: missing edge");
    };

    const StateModel product = product_state_model(nodes);
    Rng state_rng = Rng::stream(rc.seed, 0);
    Rng alpha_rng = Rng::stream(rc.seed, 1);

    std::vector<Vec> gamma, beta, theta_now(static_cast<std::size_t>(K), Vec(static_cast<std::size_t>(p), 0.0));
    std::vector<Vec> queues(out.edge_order.size(), Vec(static_cast<std::size_t>(p), 0.0));
    for (int i = 0; i < K; ++i) {
        gamma.push_back(zeros(nodes[static_cast<std::size_t>(i)].d()));
        beta.push_back(zeros(p));
    }
    std::vector<Vec> beta_sum(static_cast<std::size_t>(K), Vec(static_cast<std::size_t>(p), 0.0));

    for (long long t = 0; t < T; ++t) {
        const int prod_state = product.sample(state_rng);
        const auto local_state = decompose_state(nodes, prod_state);

        // beta path mean accumulates gamma_{t-1} values: t in {-1..T-2}
        for (int i = 0; i < K; ++i)
            for (int k = 0; k < p; ++k)
                beta_sum[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +=
                    beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];

        // Step 1 and 2 for every node from the previous round's state; the
        // round barrier means all decisions use Q(t), gamma_{t-1}, beta_{t-1}.
        std::vector<Vec> x_now(static_cast<std::size_t>(K));
        for (int i = 0; i < K; ++i) {
            const auto& node = nodes[static_cast<std::size_t>(i)];
            x_now[static_cast<std::size_t>(i)] =
                node_step_x(node, local_state[static_cast<std::size_t>(i)],
                            gamma[static_cast<std::size_t>(i)], beta[static_cast<std::size_t>(i)], rc.V);
            if (p > 0) {
                Vec qdiff(static_cast<std::size_t>(p), 0.0);
                for (int j : graph.neighbors[static_cast<std::size_t>(i)]) {
                    const auto& q_out = queues[static_cast<std::size_t>(edge_index(i, j))];
                    const auto& q_in = queues[static_cast<std::size_t>(edge_index(j, i))];
                    for (int k = 0; k < p; ++k)
                        qdiff[static_cast<std::size_t>(k)] +=
                            q_out[static_cast<std::size_t>(k)] - q_in[static_cast<std::size_t>(k)];
                }
                theta_now[static_cast<std::size_t>(i)] =
                    node_step_theta(node, gamma[static_cast<std::size_t>(i)],
                                    beta[static_cast<std::size_t>(i)], qdiff, rc.V);
            }
        }

        // Step 3: averaging updates and entrywise queue updates.
        for (int i = 0; i < K; ++i) {
            const int d = nodes[static_cast<std::size_t>(i)].d();
            auto& tr = out.nodes[static_cast<std::size_t>(i)];
            for (int j = 0; j < d; ++j) {
                const double xj = x_now[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                tr.xs[static_cast<std::size_t>(t) * d + j] = xj;
                gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    (1.0 - rc.eta) * gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                    rc.eta * xj;
                tr.gammas[static_cast<std::size_t>(t + 1) * d + j] =
                    gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            for (int k = 0; k < p; ++k) {
                const double thk = theta_now[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                tr.thetas[static_cast<std::size_t>(t) * p + k] = thk;
                beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                    (1.0 - rc.eta) * beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                    rc.eta * thk;
                tr.betas[static_cast<std::size_t>(t + 1) * p + k] =
                    beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            }
        }
        for (std::size_t e = 0; e < out.edge_order.size(); ++e) {
            const auto [i, j] = out.edge_order[e];
            queues[e] = edge_queue_update(queues[e], theta_now[static_cast<std::size_t>(i)],
                                          theta_now[static_cast<std::size_t>(j)]);
            for (int k = 0; k < p; ++k)
                out.edge_queues[e][static_cast<std::size_t>(t + 1) * p + k] =
                    queues[e][static_cast<std::size_t>(k)];
        }
    }

    out.alpha = -1 + alpha_rng.next_index(T);
    for (int i = 0; i < K; ++i) {
        const int d = nodes[static_cast<std::size_t>(i)].d();
        const auto& tr = out.nodes[static_cast<std::size_t>(i)];
        out.gamma_alpha.emplace_back(tr.gamma(out.alpha, d).begin(), tr.gamma(out.alpha, d).end());
        out.beta_alpha.emplace_back(tr.beta(out.alpha, p).begin(), tr.beta(out.alpha, p).end());
        Vec mean = beta_sum[static_cast<std::size_t>(i)];
        for (double& v : mean) v /= static_cast<double>(T);
        out.beta_path_mean.push_back(std::move(mean));
    }
    return out;
}

ProblemInstance to_instance(const GraphTopology& graph, const std::vector<Node>& nodes,
                            const std::string& name) {
    if (static_cast<int>(nodes.size()) != graph.K)
        throw contract_error("to_instance: one node per graph vertex");
    for (const auto& n : nodes) {
        n.validate();
        for (const auto& s : n.sets)
            if (s.kind != SetKind::FiniteVertices)
                throw unsupported_instance("to_instance: finite per-node sets required");
    }
    const int K = graph.K;
    const int p = nodes.front().p();
    const StackedLayout lay = stacked_layout(nodes);

    ProblemInstance inst;
    inst.name = name;
    inst.states = product_state_model(nodes);

    // Product decision sets: per-node vertex choices (node 0 most
    // significant), then per-node box corners of Theta, preserving each
    // block's own tie order.
    const long long n_product_states = inst.states.count();
    for (long long ps = 0; ps < n_product_states; ++ps) {
        const auto local = decompose_state(nodes, ps);
        std::vector<Vec> verts{zeros(lay.total_dim)};
        for (int i = 0; i < K; ++i) {
            const auto& node_verts =
                nodes[static_cast<std::size_t>(i)].sets[static_cast<std::size_t>(local[static_cast<std::size_t>(i)])].vertices;
            std::vector<Vec> expanded;
            expanded.reserve(verts.size() * node_verts.size());
            for (const auto& base : verts)
                for (const auto& nv : node_verts) {
                    Vec v = base;
                    for (int j = 0; j < nodes[static_cast<std::size_t>(i)].d(); ++j)
                        v[static_cast<std::size_t>(lay.gamma_offset[static_cast<std::size_t>(i)] + j)] =
                            nv[static_cast<std::size_t>(j)];
                    expanded.push_back(std::move(v));
                }
            verts = std::move(expanded);
        }
        if (p > 0) {
            for (int i = 0; i < K; ++i) {
                const auto corners = nodes[static_cast<std::size_t>(i)].theta_set.generators();
                std::vector<Vec> expanded;
                expanded.reserve(verts.size() * corners.size());
                for (const auto& base : verts)
                    for (const auto& c : corners) {
                        Vec v = base;
                        for (int k = 0; k < p; ++k)
                            v[static_cast<std::size_t>(lay.theta_offset[static_cast<std::size_t>(i)] + k)] =
                                c[static_cast<std::size_t>(k)];
                        expanded.push_back(std::move(v));
                    }
                verts = std::move(expanded);
            }
        }
        DecisionSet set;
        set.kind = SetKind::FiniteVertices;
        set.vertices = std::move(verts);  // product combinations are distinct by construction
        inst.decision_sets.push_back(std::move(set));
    }

    // Summed objective over the blocks.
    std::vector<NodeObjective> objs;
    for (const auto& n : nodes) objs.push_back(n.objective);
    Objective f;
    f.dim = lay.total_dim;
    f.convex = true;
    f.smoothness = 0.0;
    for (const auto& o : objs) {
        f.convex = f.convex && o.convex;
        f.smoothness = std::max(f.smoothness, o.smoothness);
    }
    const auto slice = [](const Vec& z, int off, int len) {
        return Vec(z.begin() + off, z.begin() + off + len);
    };
    std::vector<int> dims;
    for (const auto& n : nodes) dims.push_back(n.d());
    f.value = [objs, lay, dims, p, slice](const Vec& z) {
        double v = 0.0;
        for (std::size_t i = 0; i < objs.size(); ++i)
            v += objs[i].value(slice(z, lay.gamma_offset[i], dims[i]),
                               slice(z, lay.theta_offset[i], p));
        return v;
    };
    f.gradient = [objs, lay, dims, p, slice](const Vec& z) {
        Vec g(z.size(), 0.0);
        for (std::size_t i = 0; i < objs.size(); ++i) {
            const Vec gg = objs[i].grad_gamma(slice(z, lay.gamma_offset[i], dims[i]),
                                              slice(z, lay.theta_offset[i], p));
            for (int j = 0; j < dims[i]; ++j) g[static_cast<std::size_t>(lay.gamma_offset[i] + j)] = gg[static_cast<std::size_t>(j)];
            if (p > 0) {
                const Vec gt = objs[i].grad_theta(slice(z, lay.gamma_offset[i], dims[i]),
                                                  slice(z, lay.theta_offset[i], p));
                for (int k = 0; k < p; ++k)
                    g[static_cast<std::size_t>(lay.theta_offset[i] + k)] = gt[static_cast<std::size_t>(k)];
            }
        }
        return g;
    };
    inst.objective = std::move(f);

    // Consensus rows theta_i - theta_j <= 0, ordered exactly like the
    // simulator's edge queues.
    std::vector<Vec> rows;
    for (int i = 0; i < K; ++i)
        for (int j : graph.neighbors[static_cast<std::size_t>(i)])
            for (int k = 0; k < p; ++k) {
                Vec row(static_cast<std::size_t>(lay.total_dim), 0.0);
                row[static_cast<std::size_t>(lay.theta_offset[static_cast<std::size_t>(i)] + k)] = 1.0;
                row[static_cast<std::size_t>(lay.theta_offset[static_cast<std::size_t>(j)] + k)] = -1.0;
                rows.push_back(std::move(row));
            }
    inst.constraints = rows.empty()
                           ? LinearConstraints::none(lay.total_dim)
                           : LinearConstraints::from_rows(rows, Vec(rows.size(), 0.0));
    inst.validate();
    return inst;
}

// --- network files (JSON, version 1) ----------------------------------------
//
// {
//   "version": 1, "name": "...",
//   "graph": {"nodes": K, "edges": [[i, j], ...]},
//   "nodes": [ { "states": [ {"probability": p, "vertices": [[..]]}, ... ],
//               "objective_gamma": {...}, "objective_theta": {...},
//               "theta_box": {"lower": [..], "upper": [..]} }, ... ]
// }
// objective_* use the same encoding as instance files; objective_theta and
// theta_box are omitted for nodes with no shared variable.

void save_network(const Network& net, const std::filesystem::path& path) {
    nlohmann::json j;
    j["version"] = 1;
    j["name"] = net.name;
    j["graph"] = {{"nodes", net.graph.K}, {"edges", net.graph.edges}};
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : net.nodes) {
        nlohmann::json nj;
        nlohmann::json states = nlohmann::json::array();
        for (int s = 0; s < n.states.count(); ++s) {
            const auto& set = n.sets[static_cast<std::size_t>(s)];
            if (set.kind != SetKind::FiniteVertices)
                throw problems::load_error("save_network: finite per-node sets required");
            states.push_back({{"probability", n.states.probabilities[static_cast<std::size_t>(s)]},
                              {"vertices", set.vertices}});
        }
        nj["states"] = std::move(states);
        if (n.objective.gamma_part.family.empty() ||
            (n.p() > 0 && n.objective.theta_part.family.empty()))
            throw problems::load_error("save_network: node objective is not separable/serializable");
        nj["objective_gamma"] = problems::detail::objective_to_json(n.objective.gamma_part);
        if (n.p() > 0) {
            nj["objective_theta"] = problems::detail::objective_to_json(n.objective.theta_part);
            nj["theta_box"] = {{"lower", n.theta_set.lower}, {"upper", n.theta_set.upper}};
        }
        nodes.push_back(std::move(nj));
    }
    j["nodes"] = std::move(nodes);
    std::ofstream out(path);
    if (!out) throw problems::load_error("save_network: cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw problems::load_error("load_network: cannot read " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw problems::load_error("load_network: " + path.string() + ": " + e.what());
    }
    if (j.value("version", 0) != 1)
        throw problems::load_error("load_network: unsupported version in " + path.string());

    Network net;
    net.name = j.value("name", path.stem().string());
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("graph").at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    net.graph = GraphTopology::from_edges(j.at("graph").at("nodes").get<int>(), std::move(edges));

    for (const auto& nj : j.at("nodes")) {
        Node n;
        for (const auto& st : nj.at("states")) {
            n.states.probabilities.push_back(st.at("probability").get<double>());
            n.sets.push_back(DecisionSet::finite(st.at("vertices").get<std::vector<Vec>>()));
        }
        const Objective fg = problems::detail::objective_from_json(nj.at("objective_gamma"));
        if (nj.contains("objective_theta")) {
            const Objective ft = problems::detail::objective_from_json(nj.at("objective_theta"));
            n.objective = separable(fg, ft);
            n.theta_set = DecisionSet::box(nj.at("theta_box").at("lower").get<Vec>(),
                                           nj.at("theta_box").at("upper").get<Vec>());
        } else {
            n.objective = gamma_only(fg);
        }
        n.validate();
        net.nodes.push_back(std::move(n));
    }
    if (static_cast<int>(net.nodes.size()) != net.graph.K)
        throw problems::load_error("load_network: node count does not match the graph");
    return net;
}

}  // namespace pdfw::dist
