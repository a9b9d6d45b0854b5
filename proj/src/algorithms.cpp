#include "pdfw/algorithms.hpp"

#include <chrono>
#include <cmath>

namespace pdfw {

namespace {

constexpr std::uint64_t kStateStream = 0;
constexpr std::uint64_t kAlphaStream = 1;
constexpr std::uint64_t kPhase2Salt = 0x70686173u;  // decorrelates phase-2 states

RunTrace make_trace(int dim, int n_constraints, long long T) {
    RunTrace tr;
    tr.dim = dim;
    tr.n_constraints = n_constraints;
    tr.T = T;
    tr.xs.assign(static_cast<std::size_t>(T) * dim, 0.0);
    tr.gammas.assign(static_cast<std::size_t>(T + 1) * dim, 0.0);
    tr.queues.assign(static_cast<std::size_t>(T + 1) * n_constraints, 0.0);
    return tr;
}

// Shared slot loop: `decide` maps (t, state, gamma_prev, queue) to x_t.
template <typename Decide>
RunResult run_loop(const ProblemInstance& inst, const ResolvedConfig& cfg, Decide&& decide) {
    const auto t_start = std::chrono::steady_clock::now();
    const int d = inst.dim();
    const int n = inst.constraints.count();
    const long long T = cfg.T;

    RunResult out;
    out.trace = make_trace(d, n, T);
    auto& tr = out.trace;

    Rng state_rng = Rng::stream(cfg.seed, kStateStream);
    Rng alpha_rng = Rng::stream(cfg.seed, kAlphaStream);

    Vec gamma(static_cast<std::size_t>(d), 0.0);  // gamma_{-1} = 0
    QueueState q = QueueState::zero(n);
    Vec x_sum(static_cast<std::size_t>(d), 0.0);

    for (long long t = 0; t < T; ++t) {
        const int s = inst.states.sample(state_rng);
        const Vec x = decide(t, s, gamma, q);
        for (int j = 0; j < d; ++j) {
            tr.xs[static_cast<std::size_t>(t) * d + j] = x[static_cast<std::size_t>(j)];
            x_sum[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
            gamma[static_cast<std::size_t>(j)] =
                (1.0 - cfg.eta) * gamma[static_cast<std::size_t>(j)] + cfg.eta * x[static_cast<std::size_t>(j)];
            tr.gammas[static_cast<std::size_t>(t + 1) * d + j] = gamma[static_cast<std::size_t>(j)];
        }
        q = queue_update(q, x, inst.constraints);
        for (int i = 0; i < n; ++i)
            tr.queues[static_cast<std::size_t>(t + 1) * n + i] = q.q[static_cast<std::size_t>(i)];
    }

    tr.x_bar.assign(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j)
        tr.x_bar[static_cast<std::size_t>(j)] = x_sum[static_cast<std::size_t>(j)] / static_cast<double>(T);
    tr.alpha = -1 + alpha_rng.next_index(T);
    tr.gamma_alpha.assign(tr.gamma(tr.alpha).begin(), tr.gamma(tr.alpha).end());

    out.f_xbar = inst.objective.value(tr.x_bar);
    out.violations = inst.constraints.residual(tr.x_bar);
    out.gamma_alpha = tr.gamma_alpha;
    out.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

}  // namespace

RunResult run_pdfw(const ProblemInstance& inst, const AlgoConfig& cfg) {
    inst.validate();
    const ResolvedConfig rc = resolve(cfg);
    return run_loop(inst, rc, [&](long long, int s, const Vec& gamma, const QueueState& q) {
        const Vec grad = inst.objective.gradient(gamma);
        const Vec cost = pdfw_cost(rc.V, grad, q, inst.constraints);
        return lmo(inst.decision_sets[static_cast<std::size_t>(s)], cost);
    });
}

RunResult run_dpp(const ProblemInstance& inst, const AlgoConfig& cfg) {
    inst.validate();
    for (const auto& set : inst.decision_sets)
        if (set.kind != SetKind::FiniteVertices)
            throw unsupported_instance("run_dpp: per-slot argmin needs finite vertex sets");
    const ResolvedConfig rc = resolve(cfg);
    return run_loop(inst, rc, [&](long long, int s, const Vec&, const QueueState& q) {
        const auto& verts = inst.decision_sets[static_cast<std::size_t>(s)].vertices;
        int best = 0;
        double best_val = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < verts.size(); ++k) {
            double val = rc.V * inst.objective.value(verts[k]);
            const Vec r = inst.constraints.residual(verts[k]);
            val += dot(q.q, r);
            if (val < best_val) {
                best_val = val;
                best = static_cast<int>(k);
            }
        }
        return verts[static_cast<std::size_t>(best)];
    });
}

RunResult run_pd_gradient(const ProblemInstance& inst, double beta, long long T,
                          std::uint64_t seed) {
    if (!(beta > 0.0 && beta < 1.0))
        throw contract_error("run_pd_gradient: beta must lie in (0, 1)");
    AlgoConfig cfg;
    cfg.T = T;
    cfg.V = 1.0 / beta;
    cfg.eta = beta;
    cfg.seed = seed;
    cfg.schedule = Schedule::Fixed;
    return run_pdfw(inst, cfg);
}

TrackingResult run_tracking_fw(const ProblemInstance& inst, const Vec& target, long long T,
                               std::uint64_t seed) {
    inst.validate();
    if (T < 1) throw contract_error("run_tracking_fw: T must be >= 1");
    if (static_cast<int>(target.size()) != inst.dim() || !all_finite(target))
        throw contract_error("run_tracking_fw: bad target");

    const int d = inst.dim();
    Rng state_rng = Rng::stream(seed, kStateStream);
    Vec gamma(static_cast<std::size_t>(d), 0.0);
    Vec x_sum(static_cast<std::size_t>(d), 0.0);
    TrackingResult out;

    for (long long t = 0; t < T; ++t) {
        const int s = inst.states.sample(state_rng);
        const Vec cost = gamma - target;
        const Vec x = lmo(inst.decision_sets[static_cast<std::size_t>(s)], cost);
        const double eta_t = 1.0 / static_cast<double>(t + 1);
        for (int j = 0; j < d; ++j) {
            x_sum[static_cast<std::size_t>(j)] += x[static_cast<std::size_t>(j)];
            gamma[static_cast<std::size_t>(j)] =
                (1.0 - eta_t) * gamma[static_cast<std::size_t>(j)] + eta_t * x[static_cast<std::size_t>(j)];
            const double run_avg = x_sum[static_cast<std::size_t>(j)] / static_cast<double>(t + 1);
            out.max_average_identity_error = std::max(
                out.max_average_identity_error, std::abs(gamma[static_cast<std::size_t>(j)] - run_avg));
        }
    }
    out.x_bar.assign(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j)
        out.x_bar[static_cast<std::size_t>(j)] = x_sum[static_cast<std::size_t>(j)] / static_cast<double>(T);
    out.gamma_final = gamma;
    return out;
}

TwoPhaseResult run_two_phase(const ProblemInstance& inst, const AlgoConfig& cfg) {
    TwoPhaseResult out;
    out.phase1 = run_pdfw(inst, cfg);
    out.target = out.phase1.gamma_alpha;
    const auto tracking =
        run_tracking_fw(inst, out.target, cfg.T, Rng::mix(cfg.seed, kPhase2Salt));
    out.phase2_xbar = tracking.x_bar;
    out.tracking_error = dist2(out.phase2_xbar, out.target);
    out.phase2_identity_error = tracking.max_average_identity_error;
    return out;
}

}  // namespace pdfw
