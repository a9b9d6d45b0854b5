#include "pdfw/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace pdfw {

BoundConstants compute_bounds(const ProblemInstance& inst) {
    const auto gens = inst.ambient_generators();
    const int d = inst.dim();
    BoundConstants bc;

    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            bc.D = std::max(bc.D, dist2(gens[i], gens[j]));

    for (const auto& g : gens) {
        const Vec r = inst.constraints.residual(g);
        double sq = 0.0;
        for (double ri : r) sq += ri * ri;
        bc.b_squared = std::max(bc.b_squared, sq);
    }
    bc.B = std::sqrt(bc.b_squared);

    Vec lo(static_cast<std::size_t>(d), 0.0), hi(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        for (const auto& g : gens) {
            lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(j)]);
            hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], g[static_cast<std::size_t>(j)]);
        }
    }

    bc.L = inst.objective.smoothness;
    if (inst.objective.box_sup_abs && inst.objective.box_sup_grad_norm) {
        bc.K = inst.objective.box_sup_abs(lo, hi);
        bc.M = inst.objective.box_sup_grad_norm(lo, hi);
        bc.certified = true;
    } else {
        // Sampled lower estimates only; flagged non-certified.
        bc.certified = false;
        Rng rng = Rng::from_seed(0x5eedb0b5);
        for (int t = 0; t < 4096; ++t) {
            Vec p(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j)
                p[static_cast<std::size_t>(j)] =
                    rng.next_range(lo[static_cast<std::size_t>(j)], hi[static_cast<std::size_t>(j)]);
            bc.K = std::max(bc.K, std::abs(inst.objective.value(p)));
            bc.M = std::max(bc.M, norm2(inst.objective.gradient(p)));
        }
        for (const auto& g : gens) {
            bc.K = std::max(bc.K, std::abs(inst.objective.value(g)));
            bc.M = std::max(bc.M, norm2(inst.objective.gradient(g)));
        }
    }
    return bc;
}

FitResult fit_rate(const std::vector<std::pair<double, double>>& series) {
    FitResult r;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [T, err] : series) {
        if (!(err > 0.0) || !(T > 0.0)) {
            ++r.excluded;
            continue;
        }
        const double x = std::log(T);
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++r.used;
    }
    if (r.used < 2) throw contract_error("fit_rate: need at least two positive points");
    const double n = static_cast<double>(r.used);
    r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return r;
}

double drift_lambda_threshold(const BoundConstants& bc, double V, double eta, double eps,
                              double t0) {
    if (!(eps > 0.0) || !(t0 >= 1.0)) throw contract_error("drift_lambda_threshold: bad eps/t0");
    const double d2 = bc.D * bc.D;
    return ((V * bc.L * eta * d2 + bc.b_squared + 2.0 * V * bc.M * bc.D) * t0 +
            4.0 * V * bc.K / eta + eps * bc.B * t0 * t0 + eps * eps * t0 * t0) /
           (eps * t0);
}

double drift_expectation_bound(const DriftTestConfig& cfg) {
    const double d2 = cfg.delta_max * cfg.delta_max;
    return cfg.lambda_threshold +
           (4.0 * d2 / cfg.xi) * cfg.t0 *
               std::log(1.0 + (8.0 * d2 / (cfg.xi * cfg.xi)) *
                                   std::exp(cfg.xi / (4.0 * cfg.delta_max)));
}

DriftReport drift_test(const std::vector<Vec>& norm_series, const DriftTestConfig& cfg) {
    if (norm_series.empty()) throw contract_error("drift_test: no series");
    if (!(cfg.xi > 0.0 && cfg.xi < cfg.delta_max))
        throw contract_error("drift_test: need 0 < xi < delta_max");
    const auto t0 = static_cast<std::size_t>(cfg.t0);
    if (t0 < 1) throw contract_error("drift_test: t0 >= 1 required");

    DriftReport rep;
    rep.one_step_ok = true;

    // (a) one-step bound, up to representation rounding of the norms.
    for (const auto& z : norm_series)
        for (std::size_t t = 0; t + 1 < z.size(); ++t) {
            const double step = std::abs(z[t + 1] - z[t]);
            rep.max_one_step = std::max(rep.max_one_step, step);
            if (step > cfg.delta_max + 1e-11) rep.one_step_ok = false;
        }

    // (b) pooled conditional window decrease above the threshold. Window means
    // are aggregated per series so the standard error is not deflated by
    // within-series correlation; with a single series the windows are pooled
    // directly.
    Vec means;
    long long total_windows = 0;
    if (norm_series.size() == 1) {
        const auto& z = norm_series.front();
        for (std::size_t t = 0; t + t0 < z.size(); ++t)
            if (z[t] > cfg.lambda_threshold) {
                means.push_back(z[t + t0] - z[t]);
                ++total_windows;
            }
    } else {
        for (const auto& z : norm_series) {
            double sum = 0.0;
            long long n = 0;
            for (std::size_t t = 0; t + t0 < z.size(); ++t)
                if (z[t] > cfg.lambda_threshold) {
                    sum += z[t + t0] - z[t];
                    ++n;
                }
            if (n > 0) {
                means.push_back(sum / static_cast<double>(n));
                total_windows += n;
            }
        }
    }
    rep.windows = total_windows;
    if (means.empty()) {
        rep.decrease_vacuous = true;
    } else {
        double m = 0.0;
        for (double v : means) m += v;
        m /= static_cast<double>(means.size());
        double var = 0.0;
        for (double v : means) var += (v - m) * (v - m);
        const double se = means.size() > 1
                              ? std::sqrt(var / (static_cast<double>(means.size()) *
                                                 (static_cast<double>(means.size()) - 1.0)))
                              : 0.0;
        rep.decrease_mean = m;
        rep.decrease_se = se;
        rep.decrease_ok = m <= -cfg.t0 * cfg.xi / 2.0 + 3.0 * se;
    }

    // (c) uniform expectation bound: per-slot mean over series vs the lemma.
    rep.expectation_bound = drift_expectation_bound(cfg);
    std::size_t max_len = 0;
    for (const auto& z : norm_series) max_len = std::max(max_len, z.size());
    for (std::size_t t = 0; t < max_len; ++t) {
        double sum = 0.0;
        int n = 0;
        for (const auto& z : norm_series)
            if (t < z.size()) {
                sum += z[t];
                ++n;
            }
        if (n > 0) rep.max_mean_norm = std::max(rep.max_mean_norm, sum / n);
    }
    rep.expectation_ok = rep.max_mean_norm <= rep.expectation_bound;
    return rep;
}

double slater_constant(const BoundConstants& bc, double eps, double a_norm) {
    if (!(eps > 0.0)) throw contract_error("slater_constant: eps must be positive");
    const double d2 = bc.D * bc.D;
    const double b2 = bc.b_squared;
    return (b2 + bc.L * d2 + 2.0 * bc.M * bc.D) / eps + bc.B + 4.0 * bc.K + eps +
           (8.0 * b2 / eps) * std::log(1.0 + (32.0 * b2 / (eps * eps)) * std::exp(1.0)) +
           a_norm * bc.D;
}

PerturbationReport gap_perturbation_check(const ProblemInstance& inst,
                                          const MixturePolytope& poly,
                                          const std::vector<std::pair<Vec, Vec>>& pairs) {
    const BoundConstants bc = inst.bounds ? *inst.bounds : compute_bounds(inst);
    const double lip = 2.0 * bc.D * bc.L + bc.M;
    PerturbationReport rep;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [x, y] = pairs[i];
        const double gx = fw_gap(inst, poly, x);
        const double gy = fw_gap(inst, poly, y);
        const double v = std::abs(gx - gy) - lip * dist2(x, y) - 1e-7;
        if (v > rep.max_violation) {
            rep.max_violation = v;
            rep.worst_pair = i;
        }
    }
    rep.passed = rep.max_violation <= 0.0;
    return rep;
}

double check_gradient(const Objective& f, const Vec& lo, const Vec& hi, int n_points,
                      std::uint64_t seed) {
    Rng rng = Rng::from_seed(seed);
    const int d = f.dim;
    double worst = 0.0;
    for (int t = 0; t < n_points; ++t) {
        Vec p(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            p[static_cast<std::size_t>(j)] = rng.next_range(lo[static_cast<std::size_t>(j)],
                                                            hi[static_cast<std::size_t>(j)]);
        const Vec g = f.gradient(p);
        const double scale = std::max(1.0, norm2(g));
        for (int j = 0; j < d; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(p[static_cast<std::size_t>(j)]));
            Vec pp(p), pm(p);
            pp[static_cast<std::size_t>(j)] += h;
            pm[static_cast<std::size_t>(j)] -= h;
            const double fd = (f.value(pp) - f.value(pm)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - g[static_cast<std::size_t>(j)]) / scale);
        }
    }
    return worst;
}

double check_smoothness(const Objective& f, const Vec& lo, const Vec& hi, int n_pairs,
                        std::uint64_t seed) {
    Rng rng = Rng::from_seed(seed);
    const int d = f.dim;
    double worst = 0.0;
    for (int t = 0; t < n_pairs; ++t) {
        Vec x(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            x[static_cast<std::size_t>(j)] = rng.next_range(lo[static_cast<std::size_t>(j)],
                                                            hi[static_cast<std::size_t>(j)]);
            y[static_cast<std::size_t>(j)] = rng.next_range(lo[static_cast<std::size_t>(j)],
                                                            hi[static_cast<std::size_t>(j)]);
        }
        const double dxy = dist2(x, y);
        if (dxy < 1e-9) continue;
        worst = std::max(worst, dist2(f.gradient(x), f.gradient(y)) / dxy);
    }
    return worst;
}

ConvexBounds convex_bounds_general(const BoundConstants& bc, double V, double eta, long long T) {
    const double Td = static_cast<double>(T);
    const double d2 = bc.D * bc.D;
    ConvexBounds b;
    b.suboptimality = (2.0 * bc.K + bc.M * bc.D) / (eta * Td) + bc.b_squared / (2.0 * V) +
                      bc.L * d2 * eta / 2.0;
    b.violation = std::sqrt(4.0 * bc.K * V / Td + 4.0 * bc.K * V / (Td * Td * eta) +
                            bc.b_squared / Td + bc.L * d2 * V * eta / Td);
    return b;
}

ConvexBounds convex_bounds_cuberoot(const BoundConstants& bc, long long T) {
    const double Td = static_cast<double>(T);
    const double t13 = std::cbrt(Td);
    const double t23 = t13 * t13;
    const double d2 = bc.D * bc.D;
    ConvexBounds b;
    b.suboptimality =
        (2.0 * bc.K + bc.M * bc.D + bc.b_squared / 2.0 + bc.L * d2 / (2.0 * t13)) / t13;
    b.violation = std::sqrt(4.0 * bc.K + 4.0 * bc.K / t13 + bc.b_squared / t13 + bc.L * d2 / t23) /
                  t13;
    return b;
}

ConvexBounds convex_bounds_sqrt_lagrange(const BoundConstants& bc, long long T,
                                         double lambda_norm, double At_lambda_norm) {
    const double Td = static_cast<double>(T);
    const double rt = std::sqrt(Td);
    const double d2 = bc.D * bc.D;
    ConvexBounds b;
    b.suboptimality = (2.0 * bc.K + bc.M * bc.D + bc.b_squared / 2.0 + bc.L * d2 / 2.0) / rt;
    b.violation = 2.0 * lambda_norm / rt +
                  std::sqrt((2.0 * At_lambda_norm * bc.D + 4.0 * bc.K + bc.b_squared +
                             bc.L * d2) /
                            Td);
    return b;
}

NonconvexBounds nonconvex_bounds_general(const BoundConstants& bc, double V, double eta,
                                         long long T) {
    const double Td = static_cast<double>(T);
    const double d2 = bc.D * bc.D;
    NonconvexBounds b;
    b.gap = 2.0 * bc.K / (eta * Td) + bc.b_squared / V + eta * bc.L * d2 / 2.0;
    b.qnorm_over_t = std::sqrt(2.0 * bc.M * bc.D * V / Td + 4.0 * bc.K * V / (eta * Td * Td) +
                               bc.b_squared / Td + bc.L * d2 * eta * V / Td);
    b.gamma_shift = bc.D / (eta * Td);
    b.dist_sq = eta * d2;
    return b;
}

NonconvexBounds nonconvex_bounds_cuberoot(const BoundConstants& bc, long long T) {
    const double Td = static_cast<double>(T);
    const double t13 = std::cbrt(Td);
    const double t23 = t13 * t13;
    const double d2 = bc.D * bc.D;
    NonconvexBounds b;
    b.gap = (2.0 * bc.K + bc.b_squared + bc.L * d2 / (2.0 * t13)) / t13;
    b.qnorm_over_t =
        std::sqrt(2.0 * bc.M * bc.D + (4.0 * bc.K + bc.b_squared) / t13 + bc.L * d2 / t23) / t13;
    b.gamma_shift = bc.D / t13;
    b.dist_sq = d2 / t23;
    return b;
}

double slater_gap_bound(const BoundConstants& bc, long long T) {
    return (2.0 * bc.K + bc.b_squared + bc.L * bc.D * bc.D) / std::sqrt(static_cast<double>(T));
}

double slater_violation_bound(const BoundConstants& bc, double eps, double a_norm, long long T) {
    return slater_constant(bc, eps, a_norm) / std::sqrt(static_cast<double>(T));
}

double slater_dist_sq_bound(const BoundConstants& bc, long long T) {
    return bc.D * bc.D / std::sqrt(static_cast<double>(T));
}

double tracking_bound(const BoundConstants& bc, long long T) {
    return (std::sqrt(2.0) + 1.0) * bc.D / std::cbrt(static_cast<double>(T));
}

}  // namespace pdfw
