#include "pdfw/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pdfw {

MixturePolytope MixturePolytope::from_instance(const ProblemInstance& inst) {
    MixturePolytope poly;
    poly.dim = inst.dim();
    poly.probs = inst.states.probabilities;
    poly.vertices.reserve(inst.decision_sets.size());
    for (const auto& s : inst.decision_sets) poly.vertices.push_back(s.generators());
    return poly;
}

int MixturePolytope::total_vertices() const {
    int n = 0;
    for (const auto& vs : vertices) n += static_cast<int>(vs.size());
    return n;
}

Vec MixturePolytope::point(const std::vector<int>& key) const {
    Vec p = zeros(dim);
    for (int s = 0; s < n_states(); ++s)
        axpy(probs[static_cast<std::size_t>(s)],
             vertices[static_cast<std::size_t>(s)][static_cast<std::size_t>(key[static_cast<std::size_t>(s)])], p);
    return p;
}

Vec MixturePolytope::point_of_weights(const std::vector<Vec>& weights) const {
    Vec p = zeros(dim);
    for (int s = 0; s < n_states(); ++s) {
        const auto& vs = vertices[static_cast<std::size_t>(s)];
        const auto& w = weights[static_cast<std::size_t>(s)];
        for (std::size_t k = 0; k < vs.size(); ++k)
            axpy(probs[static_cast<std::size_t>(s)] * w[k], vs[k], p);
    }
    return p;
}

std::vector<int> MixturePolytope::lmo_key(std::span<const double> cost) const {
    std::vector<int> key(static_cast<std::size_t>(n_states()), 0);
    for (int s = 0; s < n_states(); ++s) {
        const auto& vs = vertices[static_cast<std::size_t>(s)];
        int best = 0;
        double best_val = dot(vs[0], cost);
        for (std::size_t k = 1; k < vs.size(); ++k) {
            const double v = dot(vs[k], cost);
            if (v < best_val) {
                best_val = v;
                best = static_cast<int>(k);
            }
        }
        key[static_cast<std::size_t>(s)] = best;
    }
    return key;
}

Vec MixturePolytope::lmo(std::span<const double> cost) const { return point(lmo_key(cost)); }

bool MixturePolytope::contains(std::span<const double> p, double tol) const {
    // Feasibility LP: weights on the simplexes reproducing p coordinatewise.
    lp::Problem prob;
    const int nv = total_vertices();
    prob.cost.assign(static_cast<std::size_t>(nv), 0.0);
    int col = 0;
    std::vector<Vec> coord_rows(static_cast<std::size_t>(dim), Vec(static_cast<std::size_t>(nv), 0.0));
    for (int s = 0; s < n_states(); ++s) {
        Vec simplex_row(static_cast<std::size_t>(nv), 0.0);
        for (const auto& v : vertices[static_cast<std::size_t>(s)]) {
            simplex_row[static_cast<std::size_t>(col)] = 1.0;
            for (int j = 0; j < dim; ++j)
                coord_rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(col)] =
                    probs[static_cast<std::size_t>(s)] * v[static_cast<std::size_t>(j)];
            ++col;
        }
        prob.add_row(std::move(simplex_row), lp::Sense::EQ, 1.0);
    }
    for (int j = 0; j < dim; ++j) {
        // |v(w)_j - p_j| <= tol as a pair of inequalities keeps the LP feasible
        // under floating-point roundoff for genuine members.
        prob.add_row(coord_rows[static_cast<std::size_t>(j)], lp::Sense::LE, p[static_cast<std::size_t>(j)] + tol);
        prob.add_row(coord_rows[static_cast<std::size_t>(j)], lp::Sense::GE, p[static_cast<std::size_t>(j)] - tol);
    }
    return lp::solve(prob).status == lp::Status::Optimal;
}

ConstrainedLmoResult constrained_lmo(const MixturePolytope& poly, std::span<const double> cost,
                                     const LinearConstraints& constraints) {
    if (static_cast<int>(cost.size()) != poly.dim)
        throw contract_error("constrained_lmo: cost dimension mismatch");
    const int nv = poly.total_vertices();
    const int n_cons = constraints.count();
    lp::Problem prob;
    prob.cost.assign(static_cast<std::size_t>(nv), 0.0);

    std::vector<Vec> cons_rows(static_cast<std::size_t>(n_cons), Vec(static_cast<std::size_t>(nv), 0.0));
    std::vector<Vec> simplex_rows;
    int col = 0;
    for (int s = 0; s < poly.n_states(); ++s) {
        Vec srow(static_cast<std::size_t>(nv), 0.0);
        for (const auto& v : poly.vertices[static_cast<std::size_t>(s)]) {
            const double p = poly.probs[static_cast<std::size_t>(s)];
            prob.cost[static_cast<std::size_t>(col)] = p * dot(v, cost);
            srow[static_cast<std::size_t>(col)] = 1.0;
            for (int i = 0; i < n_cons; ++i)
                cons_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] =
                    p * dot(constraints.A.row(i), v);
            ++col;
        }
        simplex_rows.push_back(std::move(srow));
    }
    for (auto& r : simplex_rows) prob.add_row(std::move(r), lp::Sense::EQ, 1.0);
    for (int i = 0; i < n_cons; ++i)
        prob.add_row(std::move(cons_rows[static_cast<std::size_t>(i)]), lp::Sense::LE,
                     constraints.b[static_cast<std::size_t>(i)]);

    const auto sol = lp::solve(prob);
    ConstrainedLmoResult r;
    r.status = sol.status;
    if (sol.status != lp::Status::Optimal) return r;
    r.value = sol.value;
    r.point = zeros(poly.dim);
    col = 0;
    for (int s = 0; s < poly.n_states(); ++s)
        for (const auto& v : poly.vertices[static_cast<std::size_t>(s)])
            axpy(poly.probs[static_cast<std::size_t>(s)] * sol.x[static_cast<std::size_t>(col++)], v, r.point);
    r.constraint_duals.assign(static_cast<std::size_t>(n_cons), 0.0);
    for (int i = 0; i < n_cons; ++i)
        r.constraint_duals[static_cast<std::size_t>(i)] =
            sol.row_duals[static_cast<std::size_t>(poly.n_states() + i)];
    return r;
}

double fw_gap(const ProblemInstance& inst, const MixturePolytope& poly, const Vec& gamma) {
    if (static_cast<int>(gamma.size()) != poly.dim)
        throw contract_error("fw_gap: gamma dimension mismatch");
    const Vec grad = inst.objective.gradient(gamma);
    const auto r = constrained_lmo(poly, grad, inst.constraints);
    if (r.status != lp::Status::Optimal)
        throw infeasible_error("fw_gap: empty feasible region");
    return dot(grad, gamma) - r.value;
}

namespace {

// Away-step Frank-Wolfe state shared by the projection and gamma* solvers.
struct AtomSet {
    std::vector<Vec> atoms;
    Vec weights;
    Vec current;  // sum of weights * atoms, re-synced every iteration

    void sync(int dim) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (total > 0.0 && std::abs(total - 1.0) > 1e-15)
            for (double& w : weights) w /= total;
        current = zeros(dim);
        for (std::size_t a = 0; a < atoms.size(); ++a) axpy(weights[a], atoms[a], current);
    }

    int find(const Vec& p, double tol) const {
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            double diff = 0.0;
            for (std::size_t j = 0; j < p.size(); ++j) diff = std::max(diff, std::abs(atoms[a][j] - p[j]));
            if (diff <= tol) return static_cast<int>(a);
        }
        return -1;
    }

    void drop_small() {
        for (std::size_t a = atoms.size(); a-- > 0;) {
            if (weights[a] <= 1e-14) {
                atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(a));
                weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(a));
            }
        }
    }

    // Applies a Frank-Wolfe step of size t toward atom s (appended if new),
    // or an away step of size t from atom a_idx when toward == false.
    void step_toward(const Vec& s, double t, double tol) {
        for (double& w : weights) w *= (1.0 - t);
        const int idx = find(s, tol);
        if (idx >= 0)
            weights[static_cast<std::size_t>(idx)] += t;
        else {
            atoms.push_back(s);
            weights.push_back(t);
        }
        drop_small();
    }

    void step_away(int a_idx, double t) {
        for (double& w : weights) w *= (1.0 + t);
        weights[static_cast<std::size_t>(a_idx)] -= t;
        drop_small();
    }
};

constexpr int kMaxFwIterations = 500000;

}  // namespace

Projection project_to_polytope(const MixturePolytope& poly, const Vec& gamma, double gap_tol) {
    if (static_cast<int>(gamma.size()) != poly.dim)
        throw contract_error("dist_to_polytope: dimension mismatch");
    Vec neg(gamma);
    for (double& v : neg) v = -v;

    AtomSet set;
    set.atoms.push_back(poly.lmo(neg));  // maximizes <gamma, v>
    set.weights.push_back(1.0);
    set.sync(poly.dim);

    for (int it = 0; it < kMaxFwIterations; ++it) {
        set.sync(poly.dim);
        const Vec grad = set.current - gamma;
        const Vec s = poly.lmo(grad);
        const double gap = dot(grad, set.current) - dot(grad, s);
        if (gap <= gap_tol) break;

        int away = 0;
        double away_val = dot(grad, set.atoms[0]);
        for (std::size_t a = 1; a < set.atoms.size(); ++a) {
            const double v = dot(grad, set.atoms[a]);
            if (v > away_val) {
                away_val = v;
                away = static_cast<int>(a);
            }
        }
        const double gap_away = away_val - dot(grad, set.current);

        if (gap >= gap_away) {
            const Vec d = s - set.current;
            const double dd = norm2_sq(d);
            if (dd <= 0.0) break;
            const double t = std::clamp(-dot(grad, d) / dd, 0.0, 1.0);
            if (t <= 0.0) break;
            set.step_toward(s, t, 1e-12);
        } else {
            const Vec d = set.current - set.atoms[static_cast<std::size_t>(away)];
            const double dd = norm2_sq(d);
            const double w = set.weights[static_cast<std::size_t>(away)];
            const double t_max = w / (1.0 - std::min(w, 1.0 - 1e-16));
            if (dd <= 0.0) break;
            const double t = std::clamp(-dot(grad, d) / dd, 0.0, t_max);
            if (t <= 0.0) break;
            set.step_away(away, t);
        }
    }
    set.sync(poly.dim);
    return Projection{set.current, dist2(set.current, gamma)};
}

double dist_to_polytope(const MixturePolytope& poly, const Vec& gamma, double gap_tol) {
    return project_to_polytope(poly, gamma, gap_tol).distance;
}

GammaStarResult solve_gamma_star(const ProblemInstance& inst, const MixturePolytope& poly,
                                 double gap_tol) {
    if (!inst.objective.convex)
        throw unsupported_instance("solve_gamma_star: nonconvex objective has no reference optimum");
    const auto& f = inst.objective;

    const auto start = constrained_lmo(poly, zeros(poly.dim), inst.constraints);
    if (start.status != lp::Status::Optimal)
        throw infeasible_error("solve_gamma_star: empty feasible region");

    AtomSet set;
    set.atoms.push_back(start.point);
    set.weights.push_back(1.0);
    set.sync(poly.dim);

    // Exact line search along d via bisection on the directional derivative;
    // phi'(t) = <grad f(v + t d), d> is nondecreasing for convex f.
    const auto line_search = [&](const Vec& v, const Vec& d, double t_max) {
        const auto deriv = [&](double t) {
            Vec p(v);
            axpy(t, d, p);
            return dot(f.gradient(p), d);
        };
        if (deriv(t_max) <= 0.0) return t_max;
        double lo = 0.0, hi = t_max;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (deriv(mid) <= 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    for (int it = 0; it < kMaxFwIterations; ++it) {
        set.sync(poly.dim);
        const Vec grad = f.gradient(set.current);
        const auto r = constrained_lmo(poly, grad, inst.constraints);
        if (r.status != lp::Status::Optimal)
            throw infeasible_error("solve_gamma_star: feasible region vanished");
        const double gap = dot(grad, set.current) - r.value;
        if (gap <= gap_tol) break;

        int away = 0;
        double away_val = dot(grad, set.atoms[0]);
        for (std::size_t a = 1; a < set.atoms.size(); ++a) {
            const double v = dot(grad, set.atoms[a]);
            if (v > away_val) {
                away_val = v;
                away = static_cast<int>(a);
            }
        }
        const double gap_away = away_val - dot(grad, set.current);

        if (gap >= gap_away) {
            const Vec d = r.point - set.current;
            const double t = line_search(set.current, d, 1.0);
            if (t <= 0.0) break;
            set.step_toward(r.point, t, 1e-11);
        } else {
            const Vec d = set.current - set.atoms[static_cast<std::size_t>(away)];
            const double w = set.weights[static_cast<std::size_t>(away)];
            const double t_max = w / (1.0 - std::min(w, 1.0 - 1e-16));
            const double t = line_search(set.current, d, t_max);
            if (t <= 0.0) break;
            set.step_away(away, t);
        }
    }
    set.sync(poly.dim);
    return GammaStarResult{set.current, f.value(set.current)};
}

std::optional<SlaterCertificate> certify_slater(const ProblemInstance& inst,
                                                const MixturePolytope& poly) {
    const int n_cons = inst.constraints.count();
    if (n_cons < 1) throw contract_error("certify_slater: requires at least one constraint");

    // Variables: mixture weights, then the margin epsilon (maximized).
    const int nv = poly.total_vertices();
    lp::Problem prob;
    prob.cost.assign(static_cast<std::size_t>(nv + 1), 0.0);
    prob.cost[static_cast<std::size_t>(nv)] = 1.0;
    prob.maximize = true;

    int col = 0;
    std::vector<Vec> cons_rows(static_cast<std::size_t>(n_cons), Vec(static_cast<std::size_t>(nv + 1), 0.0));
    std::vector<Vec> simplex_rows;
    for (int s = 0; s < poly.n_states(); ++s) {
        Vec srow(static_cast<std::size_t>(nv + 1), 0.0);
        for (const auto& v : poly.vertices[static_cast<std::size_t>(s)]) {
            srow[static_cast<std::size_t>(col)] = 1.0;
            for (int i = 0; i < n_cons; ++i)
                cons_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] =
                    poly.probs[static_cast<std::size_t>(s)] * dot(inst.constraints.A.row(i), v);
            ++col;
        }
        simplex_rows.push_back(std::move(srow));
    }
    for (auto& r : simplex_rows) prob.add_row(std::move(r), lp::Sense::EQ, 1.0);
    for (int i = 0; i < n_cons; ++i) {
        cons_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(nv)] = 1.0;
        prob.add_row(std::move(cons_rows[static_cast<std::size_t>(i)]), lp::Sense::LE,
                     inst.constraints.b[static_cast<std::size_t>(i)]);
    }

    const auto sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal || sol.value <= 1e-9) return std::nullopt;

    SlaterCertificate cert;
    cert.margin = sol.value;
    col = 0;
    for (int s = 0; s < poly.n_states(); ++s) {
        const auto n_k = poly.vertices[static_cast<std::size_t>(s)].size();
        Vec w(n_k, 0.0);
        double total = 0.0;
        for (std::size_t k = 0; k < n_k; ++k) {
            w[k] = std::max(0.0, sol.x[static_cast<std::size_t>(col++)]);
            total += w[k];
        }
        if (total > 0.0)
            for (double& v : w) v /= total;
        cert.witness.push_back(std::move(w));
    }
    cert.witness_mean = poly.point_of_weights(cert.witness);
    return cert;
}

LagrangeCertificate lagrange_certificate(const ProblemInstance& inst, const MixturePolytope& poly,
                                         const Vec& gamma_star, int n_samples, std::uint64_t seed) {
    const Vec grad = inst.objective.gradient(gamma_star);
    const auto r = constrained_lmo(poly, grad, inst.constraints);
    if (r.status != lp::Status::Optimal)
        throw infeasible_error("lagrange_certificate: empty feasible region");

    LagrangeCertificate cert;
    const int n_cons = inst.constraints.count();
    cert.lambda.assign(static_cast<std::size_t>(n_cons), 0.0);
    for (int i = 0; i < n_cons; ++i)
        cert.lambda[static_cast<std::size_t>(i)] =
            std::max(0.0, -r.constraint_duals[static_cast<std::size_t>(i)]);

    // Validate f(v) + <lambda, Av-b> >= f(gamma*) on random mixtures and on
    // every pure vertex key combination reachable by single-state swaps.
    const double f_star = inst.objective.value(gamma_star);
    double worst = -std::numeric_limits<double>::infinity();
    Rng rng = Rng::from_seed(seed);
    const auto consider = [&](const Vec& v) {
        const double viol = f_star - inst.objective.value(v) -
                            dot(cert.lambda, inst.constraints.residual(v));
        worst = std::max(worst, viol);
    };
    for (int t = 0; t < n_samples; ++t) {
        std::vector<Vec> w;
        for (const auto& vs : poly.vertices) {
            Vec ws(vs.size());
            double total = 0.0;
            for (double& x : ws) {
                x = -std::log(1.0 - rng.next_unit());
                total += x;
            }
            if (total <= 0.0) {
                ws.assign(ws.size(), 1.0 / static_cast<double>(ws.size()));
            } else {
                for (double& x : ws) x /= total;
            }
            w.push_back(std::move(ws));
        }
        consider(poly.point_of_weights(w));
    }
    for (int s = 0; s < poly.n_states(); ++s)
        for (std::size_t k = 0; k < poly.vertices[static_cast<std::size_t>(s)].size(); ++k) {
            std::vector<int> key(static_cast<std::size_t>(poly.n_states()), 0);
            key[static_cast<std::size_t>(s)] = static_cast<int>(k);
            consider(poly.point(key));
        }
    cert.checked_gap = worst;
    return cert;
}

}  // namespace pdfw
