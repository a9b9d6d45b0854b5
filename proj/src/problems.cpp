#include "pdfw/problems.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "objective_json.hpp"
#include "pdfw/diagnostics.hpp"
#include "pdfw/polytope.hpp"

namespace pdfw::problems {

using nlohmann::json;

Objective quadratic_objective(Vec target) {
    Objective f;
    f.dim = static_cast<int>(target.size());
    f.convex = true;
    f.smoothness = 2.0;
    f.value = [target](const Vec& g) { return norm2_sq(g - target); };
    f.gradient = [target](const Vec& g) { return 2.0 * (g - target); };
    const auto corner_max = [target](const Vec& lo, const Vec& hi) {
        double k = 0.0;
        for (std::size_t j = 0; j < target.size(); ++j) {
            const double a = lo[j] - target[j], b = hi[j] - target[j];
            k += std::max(a * a, b * b);
        }
        return k;
    };
    f.box_sup_abs = corner_max;
    f.box_sup_grad_norm = [corner_max](const Vec& lo, const Vec& hi) {
        return 2.0 * std::sqrt(corner_max(lo, hi));
    };
    f.family = "quadratic";
    f.params = {std::move(target)};
    return f;
}

Objective linear_objective(Vec c, double offset) {
    Objective f;
    f.dim = static_cast<int>(c.size());
    f.convex = true;
    f.smoothness = 0.0;
    f.value = [c, offset](const Vec& g) { return dot(c, g) + offset; };
    f.gradient = [c](const Vec&) { return c; };
    f.box_sup_abs = [c, offset](const Vec& lo, const Vec& hi) {
        double fmax = offset, fmin = offset;
        for (std::size_t j = 0; j < c.size(); ++j) {
            fmax += std::max(c[j] * lo[j], c[j] * hi[j]);
            fmin += std::min(c[j] * lo[j], c[j] * hi[j]);
        }
        return std::max(std::abs(fmax), std::abs(fmin));
    };
    f.box_sup_grad_norm = [c](const Vec&, const Vec&) { return norm2(c); };
    f.family = "linear";
    f.params = {std::move(c)};
    f.offset = offset;
    return f;
}

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Objective sigmoidal_objective(Vec amplitude, Vec steepness, Vec threshold) {
    const auto d = amplitude.size();
    if (steepness.size() != d || threshold.size() != d)
        throw contract_error("sigmoidal_objective: parameter size mismatch");
    Objective f;
    f.dim = static_cast<int>(d);
    f.convex = false;
    double lmax = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        lmax = std::max(lmax, amplitude[j] * steepness[j] * steepness[j] / 4.0);
    f.smoothness = lmax;
    f.value = [=](const Vec& g) {
        double v = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            v -= amplitude[j] * logistic(steepness[j] * (g[j] - threshold[j]));
        return v;
    };
    f.gradient = [=](const Vec& g) {
        Vec out(d);
        for (std::size_t j = 0; j < d; ++j) {
            const double s = logistic(steepness[j] * (g[j] - threshold[j]));
            out[j] = -amplitude[j] * steepness[j] * s * (1.0 - s);
        }
        return out;
    };
    f.box_sup_abs = [=](const Vec&, const Vec& hi) {
        // Terms are negative and decreasing in g, so |f| peaks at the upper corner.
        double k = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            k += amplitude[j] * logistic(steepness[j] * (hi[j] - threshold[j]));
        return k;
    };
    f.box_sup_grad_norm = [=](const Vec& lo, const Vec& hi) {
        double m2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double zlo = steepness[j] * (lo[j] - threshold[j]);
            const double zhi = steepness[j] * (hi[j] - threshold[j]);
            double sp;  // max of s(1-s) over [zlo, zhi], peak 1/4 at z = 0
            if (zlo <= 0.0 && zhi >= 0.0) {
                sp = 0.25;
            } else {
                const double z = std::abs(zlo) < std::abs(zhi) ? zlo : zhi;
                const double s = logistic(z);
                sp = s * (1.0 - s);
            }
            const double gj = amplitude[j] * steepness[j] * sp;
            m2 += gj * gj;
        }
        return std::sqrt(m2);
    };
    f.family = "sigmoidal";
    f.params = {std::move(amplitude), std::move(steepness), std::move(threshold)};
    return f;
}

Objective default_sigmoidal(int d) {
    const auto n = static_cast<std::size_t>(d);
    return sigmoidal_objective(Vec(n, 1.0), Vec(n, 10.0), Vec(n, 0.5));
}

namespace {

// Probabilities bounded away from zero: half uniform, half Dirichlet(1).
Vec draw_probabilities(int n_states, Rng& rng) {
    Vec p(static_cast<std::size_t>(n_states));
    double total = 0.0;
    for (double& v : p) {
        v = -std::log(1.0 - rng.next_unit());
        total += v;
    }
    for (double& v : p) v = 0.5 / n_states + 0.5 * (v / total);
    double sum = 0.0;
    for (double v : p) sum += v;
    p.back() += 1.0 - sum;  // exact renormalization
    return p;
}

GeneratedInstance make_scheduling(int d, int n_states, std::uint64_t seed, bool convex) {
    if (d < 1 || n_states < 1) throw contract_error("make_scheduling: d, n_states >= 1");
    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng = Rng::from_seed(Rng::mix(seed, static_cast<std::uint64_t>(attempt)));
        ProblemInstance inst;
        inst.states.probabilities = draw_probabilities(n_states, rng);

        for (int s = 0; s < n_states; ++s) {
            std::vector<Vec> verts{zeros(d)};  // idle decision always available
            for (int k = 0; k < 3; ++k) {
                Vec v(static_cast<std::size_t>(d));
                for (double& x : v) x = rng.next_range(0.0, 1.0);
                verts.push_back(std::move(v));
            }
            inst.decision_sets.push_back(DecisionSet::finite(std::move(verts)));
        }

        if (convex) {
            Vec g(static_cast<std::size_t>(d));
            for (double& x : g) x = rng.next_range(0.0, 1.0);
            inst.objective = quadratic_objective(std::move(g));
        } else {
            inst.objective = default_sigmoidal(d);
        }

        // Per-user constraints with rhs above the uniform-mixture centroid.
        auto poly = MixturePolytope::from_instance(inst);
        std::vector<Vec> w;
        for (const auto& vs : poly.vertices)
            w.emplace_back(vs.size(), 1.0 / static_cast<double>(vs.size()));
        const Vec centroid = poly.point_of_weights(w);
        std::vector<Vec> rows;
        Vec rhs;
        for (int i = 0; i < d; ++i) {
            Vec e(static_cast<std::size_t>(d), 0.0);
            e[static_cast<std::size_t>(i)] = 1.0;
            rows.push_back(std::move(e));
            rhs.push_back(centroid[static_cast<std::size_t>(i)] + rng.next_range(0.1, 0.4));
        }
        inst.constraints = LinearConstraints::from_rows(rows, rhs);
        inst.name = std::string(convex ? "convex" : "sigmoidal") + "-sched-d" +
                    std::to_string(d) + "-s" + std::to_string(n_states) + "-seed" +
                    std::to_string(seed);
        inst.validate();

        const auto cert = certify_slater(inst, poly);
        if (!cert) continue;
        inst.bounds = compute_bounds(inst);

        GeneratedInstance out;
        out.certificates.slater_margin = cert->margin;
        if (convex) {
            const auto star = solve_gamma_star(inst, poly);
            out.certificates.gamma_star = star.gamma_star;
            out.certificates.f_star = star.value;
        }
        out.instance = std::move(inst);
        return out;
    }
    throw generation_error("make_scheduling: no Slater point after 100 draws");
}

}  // namespace

GeneratedInstance make_convex_scheduling(int d, int n_states, std::uint64_t seed) {
    return make_scheduling(d, n_states, seed, true);
}

GeneratedInstance make_sigmoidal_scheduling(int d, int n_states, std::uint64_t seed) {
    return make_scheduling(d, n_states, seed, false);
}

ProblemInstance make_deterministic(std::vector<Vec> vertices, Objective objective,
                                   std::vector<Vec> a_rows, Vec b, const std::string& name) {
    ProblemInstance inst;
    inst.name = name;
    inst.states = StateModel::single();
    inst.decision_sets = {DecisionSet::finite(std::move(vertices))};
    inst.objective = std::move(objective);
    inst.constraints = a_rows.empty() ? LinearConstraints::none(inst.objective.dim)
                                      : LinearConstraints::from_rows(a_rows, std::move(b));
    inst.validate();
    return inst;
}

namespace {

GeneratedInstance finish_reference(ProblemInstance inst, bool solve_star) {
    inst.validate();
    auto poly = MixturePolytope::from_instance(inst);
    inst.bounds = compute_bounds(inst);
    GeneratedInstance out;
    const auto cert = certify_slater(inst, poly);
    if (cert) out.certificates.slater_margin = cert->margin;
    if (solve_star) {
        const auto star = solve_gamma_star(inst, poly);
        out.certificates.gamma_star = star.gamma_star;
        out.certificates.f_star = star.value;
    }
    out.instance = std::move(inst);
    return out;
}

}  // namespace

GeneratedInstance reference_convex() {
    ProblemInstance inst;
    inst.name = "reference-convex";
    inst.states.probabilities = {0.6, 0.4};
    inst.decision_sets = {
        DecisionSet::finite({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}),
        DecisionSet::finite({{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}}),
    };
    inst.objective = quadratic_objective({0.30, 0.25});
    inst.constraints =
        LinearConstraints::from_rows({{1.0, 0.0}, {0.0, 1.0}}, {0.55, 0.55});
    return finish_reference(std::move(inst), true);
}

GeneratedInstance reference_sigmoidal() {
    ProblemInstance inst;
    inst.name = "reference-sigmoidal";
    inst.states.probabilities = {0.6, 0.4};
    inst.decision_sets = {
        DecisionSet::finite({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}),
        DecisionSet::finite({{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}}),
    };
    inst.objective = default_sigmoidal(2);
    inst.constraints =
        LinearConstraints::from_rows({{1.0, 0.0}, {0.0, 1.0}}, {0.55, 0.55});
    return finish_reference(std::move(inst), false);
}

GeneratedInstance reference_deterministic() {
    ProblemInstance inst = make_deterministic(
        {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, default_sigmoidal(2),
        {{1.0, 0.0}}, {0.7}, "reference-deterministic");
    return finish_reference(std::move(inst), false);
}

dist::Network reference_cycle4() {
    dist::Network net;
    net.name = "reference-cycle4";
    net.graph = dist::GraphTopology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    const double targets[4] = {0.1, 0.9, 0.3, 0.7};
    for (double c : targets) {
        dist::Node n;
        n.states = StateModel::single();
        n.sets = {DecisionSet::finite({{0.0}, {1.0}})};
        n.objective =
            dist::separable(quadratic_objective({0.5}), quadratic_objective({c}));
        n.theta_set = DecisionSet::box({0.0}, {1.0});
        net.nodes.push_back(std::move(n));
    }
    return net;
}

// --- JSON schema (version 1) ------------------------------------------------
//
// {
//   "version": 1,
//   "name": "...",
//   "dimension": d,
//   "states": [ {"probability": p, "vertices": [[..]]}
//             | {"probability": p, "box": {"lower": [..], "upper": [..]}}
//             | {"probability": p, "simplex": {"dim": d, "scale": s}} ],
//   "objective": {"kind": "quadratic", "target": [..]}
//              | {"kind": "linear", "coefficients": [..], "offset": o}
//              | {"kind": "sigmoidal", "amplitude": [..], "steepness": [..],
//                 "threshold": [..]},
//   "constraints": {"rows": [[..]], "rhs": [..]},
//   "certificates": {"slater_margin": m, "gamma_star": [..], "f_star": v}
// }

namespace {

json set_to_json(const DecisionSet& s) {
    json j;
    switch (s.kind) {
        case SetKind::FiniteVertices:
            j["vertices"] = s.vertices;
            break;
        case SetKind::Box:
            j["box"] = {{"lower", s.lower}, {"upper", s.upper}};
            break;
        case SetKind::Simplex:
            j["simplex"] = {{"dim", s.simplex_dim}, {"scale", s.scale}};
            break;
    }
    return j;
}

DecisionSet set_from_json(const json& j) {
    if (j.contains("vertices"))
        return DecisionSet::finite(j.at("vertices").get<std::vector<Vec>>());
    if (j.contains("box"))
        return DecisionSet::box(j.at("box").at("lower").get<Vec>(),
                                j.at("box").at("upper").get<Vec>());
    if (j.contains("simplex"))
        return DecisionSet::simplex(j.at("simplex").at("dim").get<int>(),
                                    j.at("simplex").at("scale").get<double>());
    throw load_error("instance file: unknown decision-set kind");
}

}  // namespace

void save_instance(const ProblemInstance& inst, const Certificates& certs,
                   const std::filesystem::path& path) {
    json j;
    j["version"] = 1;
    j["name"] = inst.name;
    j["dimension"] = inst.dim();
    json states = json::array();
    for (int s = 0; s < inst.states.count(); ++s) {
        json st = set_to_json(inst.decision_sets[static_cast<std::size_t>(s)]);
        st["probability"] = inst.states.probabilities[static_cast<std::size_t>(s)];
        if (!inst.states.names.empty()) st["name"] = inst.states.names[static_cast<std::size_t>(s)];
        states.push_back(std::move(st));
    }
    j["states"] = std::move(states);
    j["objective"] = detail::objective_to_json(inst.objective);
    if (inst.constraints.count() > 0) {
        std::vector<Vec> rows;
        for (int i = 0; i < inst.constraints.count(); ++i) {
            const auto r = inst.constraints.A.row(i);
            rows.emplace_back(r.begin(), r.end());
        }
        j["constraints"] = {{"rows", rows}, {"rhs", inst.constraints.b}};
    }
    json c;
    if (certs.slater_margin) c["slater_margin"] = *certs.slater_margin;
    if (certs.gamma_star) c["gamma_star"] = *certs.gamma_star;
    if (certs.f_star) c["f_star"] = *certs.f_star;
    if (!c.empty()) j["certificates"] = std::move(c);

    std::ofstream out(path);
    if (!out) throw load_error("save_instance: cannot write " + path.string());
    out << j.dump(2) << "\n";
}

GeneratedInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw load_error("load_instance: cannot read " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw load_error("load_instance: " + path.string() + ": " + e.what());
    }
    if (j.value("version", 0) != 1)
        throw load_error("load_instance: unsupported version in " + path.string());

    GeneratedInstance out;
    ProblemInstance& inst = out.instance;
    inst.name = j.value("name", path.stem().string());
    for (const auto& st : j.at("states")) {
        inst.states.probabilities.push_back(st.at("probability").get<double>());
        if (st.contains("name")) inst.states.names.push_back(st.at("name").get<std::string>());
        inst.decision_sets.push_back(set_from_json(st));
    }
    if (!inst.states.names.empty() &&
        inst.states.names.size() != inst.states.probabilities.size())
        throw load_error("load_instance: partially named states");
    inst.objective = detail::objective_from_json(j.at("objective"));
    if (j.contains("constraints")) {
        inst.constraints = LinearConstraints::from_rows(
            j.at("constraints").at("rows").get<std::vector<Vec>>(),
            j.at("constraints").at("rhs").get<Vec>());
    } else {
        inst.constraints = LinearConstraints::none(inst.objective.dim);
    }
    if (j.value("dimension", inst.objective.dim) != inst.objective.dim)
        throw load_error("load_instance: dimension field mismatch");
    inst.validate();

    const auto poly = MixturePolytope::from_instance(inst);
    if (!poly.contains(zeros(inst.dim())))
        throw load_error("load_instance: origin is not in the achievable-mean polytope");
    inst.bounds = compute_bounds(inst);

    if (j.contains("certificates")) {
        const auto& c = j.at("certificates");
        if (c.contains("slater_margin")) {
            const double declared = c.at("slater_margin").get<double>();
            const auto cert = certify_slater(inst, poly);
            if (!cert || std::abs(cert->margin - declared) > 1e-6)
                throw load_error("load_instance: Slater certificate failed re-verification");
            out.certificates.slater_margin = declared;
        }
        if (c.contains("gamma_star") || c.contains("f_star")) {
            if (!c.contains("gamma_star") || !c.contains("f_star"))
                throw load_error("load_instance: gamma_star and f_star must come together");
            const Vec declared_point = c.at("gamma_star").get<Vec>();
            const double declared_value = c.at("f_star").get<double>();
            const auto star = solve_gamma_star(inst, poly);
            if (std::abs(star.value - declared_value) > 1e-6 ||
                std::abs(inst.objective.value(declared_point) - declared_value) > 1e-6)
                throw load_error("load_instance: gamma_star certificate failed re-verification");
            out.certificates.gamma_star = declared_point;
            out.certificates.f_star = declared_value;
        }
    }
    return out;
}

}  // namespace pdfw::problems
