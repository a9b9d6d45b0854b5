#include "pdfw/core.hpp"

#include <algorithm>
#include <cmath>

namespace pdfw {

void StateModel::validate() const {
    if (probabilities.empty()) throw contract_error("StateModel: no states");
    double sum = 0.0;
    for (double p : probabilities) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw contract_error("StateModel: probabilities must be nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw contract_error("StateModel: probabilities must sum to 1");
    if (!names.empty() && names.size() != probabilities.size())
        throw contract_error("StateModel: name/probability count mismatch");
}

int DecisionSet::dim() const {
    switch (kind) {
        case SetKind::FiniteVertices:
            return vertices.empty() ? 0 : static_cast<int>(vertices.front().size());
        case SetKind::Box:
            return static_cast<int>(lower.size());
        case SetKind::Simplex:
            return simplex_dim;
    }
    return 0;
}

void DecisionSet::validate() const {
    switch (kind) {
        case SetKind::FiniteVertices: {
            if (vertices.empty()) throw contract_error("DecisionSet: empty vertex list");
            const std::size_t d = vertices.front().size();
            for (const auto& v : vertices) {
                if (v.size() != d) throw contract_error("DecisionSet: ragged vertex list");
                if (!all_finite(v)) throw contract_error("DecisionSet: non-finite vertex");
            }
            break;
        }
        case SetKind::Box: {
            if (lower.empty() || lower.size() != upper.size())
                throw contract_error("DecisionSet: bad box bounds");
            for (std::size_t j = 0; j < lower.size(); ++j)
                if (!(lower[j] <= upper[j]) || !std::isfinite(lower[j]) || !std::isfinite(upper[j]))
                    throw contract_error("DecisionSet: box lower > upper");
            break;
        }
        case SetKind::Simplex:
            if (simplex_dim < 1 || !(scale > 0.0) || !std::isfinite(scale))
                throw contract_error("DecisionSet: bad simplex");
            break;
    }
}

std::vector<Vec> DecisionSet::generators() const {
    switch (kind) {
        case SetKind::FiniteVertices:
            return vertices;
        case SetKind::Box: {
            const int d = dim();
            if (d > 24) throw contract_error("DecisionSet: box dimension too large to enumerate");
            std::vector<Vec> out;
            out.reserve(std::size_t{1} << d);
            for (std::uint32_t c = 0; c < (std::uint32_t{1} << d); ++c) {
                Vec v(static_cast<std::size_t>(d));
                for (int j = 0; j < d; ++j) v[j] = (c >> j) & 1u ? upper[j] : lower[j];
                out.push_back(std::move(v));
            }
            return out;
        }
        case SetKind::Simplex: {
            std::vector<Vec> out;
            out.reserve(static_cast<std::size_t>(simplex_dim));
            for (int j = 0; j < simplex_dim; ++j) {
                Vec v(static_cast<std::size_t>(simplex_dim), 0.0);
                v[j] = scale;
                out.push_back(std::move(v));
            }
            return out;
        }
    }
    return {};
}

DecisionSet DecisionSet::finite(std::vector<Vec> verts) {
    DecisionSet s;
    s.kind = SetKind::FiniteVertices;
    for (auto& v : verts) {
        bool dup = false;
        for (const auto& w : s.vertices)
            if (w == v) {
                dup = true;
                break;
            }
        if (!dup) s.vertices.push_back(std::move(v));
    }
    s.validate();
    return s;
}

DecisionSet DecisionSet::box(Vec lo, Vec hi) {
    DecisionSet s;
    s.kind = SetKind::Box;
    s.lower = std::move(lo);
    s.upper = std::move(hi);
    s.validate();
    return s;
}

DecisionSet DecisionSet::simplex(int d, double scale) {
    DecisionSet s;
    s.kind = SetKind::Simplex;
    s.simplex_dim = d;
    s.scale = scale;
    s.validate();
    return s;
}

LinearConstraints LinearConstraints::from_rows(const std::vector<Vec>& rows, Vec rhs) {
    if (rows.size() != rhs.size()) throw contract_error("LinearConstraints: row/rhs mismatch");
    const int n = static_cast<int>(rows.size());
    const int d = n > 0 ? static_cast<int>(rows.front().size()) : 0;
    LinearConstraints c;
    c.A = Matrix(n, d);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            throw contract_error("LinearConstraints: ragged rows");
        if (!all_finite(rows[i])) throw contract_error("LinearConstraints: non-finite row");
        for (int j = 0; j < d; ++j) c.A(i, j) = rows[i][j];
    }
    c.b = std::move(rhs);
    return c;
}

void ProblemInstance::validate() const {
    states.validate();
    if (static_cast<int>(decision_sets.size()) != states.count())
        throw contract_error("ProblemInstance: one decision set per state required");
    const int d = dim();
    if (d < 1) throw contract_error("ProblemInstance: empty dimension");
    for (const auto& s : decision_sets) {
        s.validate();
        if (s.dim() != d) throw contract_error("ProblemInstance: decision-set dimension mismatch");
    }
    if (constraints.count() > 0 && constraints.dim() != d)
        throw contract_error("ProblemInstance: constraint dimension mismatch");
    if (!objective.value || !objective.gradient)
        throw contract_error("ProblemInstance: objective callbacks missing");
}

std::vector<Vec> ProblemInstance::ambient_generators() const {
    std::vector<Vec> gens;
    gens.push_back(zeros(dim()));
    for (const auto& s : decision_sets)
        for (auto& g : s.generators()) gens.push_back(std::move(g));
    return gens;
}

ResolvedConfig resolve(const AlgoConfig& cfg) {
    if (cfg.T < 1) throw contract_error("AlgoConfig: T must be >= 1");
    ResolvedConfig r{cfg.T, cfg.V, cfg.eta, cfg.seed};
    switch (cfg.schedule) {
        case Schedule::Fixed:
            break;
        case Schedule::CubeRoot: {
            const double c = std::cbrt(static_cast<double>(cfg.T));
            r.V = c;
            r.eta = 1.0 / (c * c);
            break;
        }
        case Schedule::SquareRoot: {
            const double s = std::sqrt(static_cast<double>(cfg.T));
            r.V = s;
            r.eta = 1.0 / s;
            break;
        }
    }
    if (!(r.V > 0.0)) throw contract_error("AlgoConfig: V must be positive");
    if (!(r.eta > 0.0 && r.eta < 1.0))
        throw contract_error("AlgoConfig: eta must lie in (0, 1)");
    return r;
}

int lmo_index(const DecisionSet& set, std::span<const double> cost) {
    if (set.kind != SetKind::FiniteVertices)
        throw contract_error("lmo_index: finite vertex set required");
    if (static_cast<int>(cost.size()) != set.dim())
        throw contract_error("lmo: cost dimension mismatch");
    int best = 0;
    double best_val = dot(set.vertices[0], cost);
    for (std::size_t k = 1; k < set.vertices.size(); ++k) {
        const double v = dot(set.vertices[k], cost);
        if (v < best_val) {
            best_val = v;
            best = static_cast<int>(k);
        }
    }
    return best;
}

Vec lmo(const DecisionSet& set, std::span<const double> cost) {
    if (!all_finite(cost)) throw contract_error("lmo: non-finite cost");
    switch (set.kind) {
        case SetKind::FiniteVertices:
            return set.vertices[static_cast<std::size_t>(lmo_index(set, cost))];
        case SetKind::Box: {
            if (cost.size() != set.lower.size())
                throw contract_error("lmo: cost dimension mismatch");
            Vec x(set.lower.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = cost[j] < 0.0 ? set.upper[j] : set.lower[j];
            return x;
        }
        case SetKind::Simplex: {
            if (static_cast<int>(cost.size()) != set.simplex_dim)
                throw contract_error("lmo: cost dimension mismatch");
            int best = 0;
            for (int j = 1; j < set.simplex_dim; ++j)
                if (cost[j] < cost[best]) best = j;
            Vec x(static_cast<std::size_t>(set.simplex_dim), 0.0);
            x[best] = set.scale;
            return x;
        }
    }
    throw contract_error("lmo: unknown set kind");
}

QueueState queue_update(const QueueState& q, std::span<const double> x,
                        const LinearConstraints& c) {
    if (q.count() != c.count()) throw contract_error("queue_update: queue/constraint mismatch");
    QueueState next = q;
    for (int i = 0; i < c.count(); ++i) {
        const double grown = q.q[i] + dot(c.A.row(i), x) - c.b[i];
        next.q[i] = grown > 0.0 ? grown : 0.0;
    }
    return next;
}

Vec pdfw_cost(double V, const Vec& grad, const QueueState& q, const LinearConstraints& c) {
    if (c.count() != q.count()) throw contract_error("pdfw_cost: queue/constraint mismatch");
    if (c.count() > 0 && c.dim() != static_cast<int>(grad.size()))
        throw contract_error("pdfw_cost: gradient/constraint dimension mismatch");
    Vec cost(grad.size());
    for (std::size_t j = 0; j < grad.size(); ++j) cost[j] = V * grad[j];
    for (int i = 0; i < c.count(); ++i) {
        const auto row = c.A.row(i);
        for (std::size_t j = 0; j < cost.size(); ++j) cost[j] += row[j] * q.q[i];
    }
    return cost;
}

StepResult pdfw_step(const ProblemInstance& inst, const ResolvedConfig& cfg,
                     const Vec& gamma_prev, const QueueState& q, int state_index) {
    if (state_index < 0 || state_index >= inst.states.count())
        throw contract_error("pdfw_step: state index out of range");
    const Vec grad = inst.objective.gradient(gamma_prev);
    const Vec cost = pdfw_cost(cfg.V, grad, q, inst.constraints);
    StepResult r;
    r.x = lmo(inst.decision_sets[static_cast<std::size_t>(state_index)], cost);
    r.gamma_next.resize(gamma_prev.size());
    for (std::size_t j = 0; j < gamma_prev.size(); ++j)
        r.gamma_next[j] = (1.0 - cfg.eta) * gamma_prev[j] + cfg.eta * r.x[j];
    r.q_next = queue_update(q, r.x, inst.constraints);
    return r;
}

}  // namespace pdfw
