#pragma once

#include "pdfw/core.hpp"
#include "pdfw/polytope.hpp"

namespace pdfw {

// M, K from the objective's closed-form box maxima over the bounding box of
// the ambient hull; D from pairwise generator distances; B^2 from the largest
// squared constraint-residual norm over the generators (origin included).
// Falls back to sampled estimates (certified = false) when the objective
// lacks closed-form box bounds.
BoundConstants compute_bounds(const ProblemInstance& inst);

struct FitResult {
    double slope = 0.0;
    int used = 0;
    int excluded = 0;  // nonpositive errors dropped from the fit
};

// Least-squares slope of log(error) against log(T).
FitResult fit_rate(const std::vector<std::pair<double, double>>& series);

struct DriftTestConfig {
    double t0 = 1.0;        // window length (integer-valued)
    double delta_max = 0.0; // one-step bound B
    double xi = 0.0;        // required decrease rate, epsilon / 2
    double lambda_threshold = 0.0;
};

// Threshold formula of the queue-drift lemma:
// ((V L eta D^2 + B^2 + 2 V M D) t0 + 4 V K / eta + eps B t0^2 + eps^2 t0^2) / (eps t0)
double drift_lambda_threshold(const BoundConstants& bc, double V, double eta, double eps,
                              double t0);

// Uniform expectation bound implied by the drift lemma:
// lambda + (4 delta^2 / xi) t0 ln(1 + (8 delta^2 / xi^2) e^{xi / 4 delta})
double drift_expectation_bound(const DriftTestConfig& cfg);

struct DriftReport {
    bool one_step_ok = false;        // | ||Q(t+1)|| - ||Q(t)|| | <= delta_max, exactly
    double max_one_step = 0.0;
    bool decrease_ok = false;        // pooled window decrease <= -t0 xi / 2 + 3 SE
    bool decrease_vacuous = false;   // no slots above the threshold
    double decrease_mean = 0.0;
    double decrease_se = 0.0;
    long long windows = 0;
    bool expectation_ok = false;     // max_t mean ||Q(t)|| <= bound
    double max_mean_norm = 0.0;
    double expectation_bound = 0.0;
    bool passed() const { return one_step_ok && (decrease_ok || decrease_vacuous) && expectation_ok; }
};

// Empirical check of the drift lemma's hypotheses and conclusion on queue-norm
// series (one per independent run). Window means are pooled per series.
DriftReport drift_test(const std::vector<Vec>& norm_series, const DriftTestConfig& cfg);

// C_i of the Slater convergence theorem.
double slater_constant(const BoundConstants& bc, double eps, double a_norm);

struct PerturbationReport {
    double max_violation = 0.0;  // of |gap(x) - gap(y)| - (2DL+M)||x-y|| - slack
    std::size_t worst_pair = 0;
    bool passed = false;
};

// |G(x) - G(y)| <= (2 D L + M) ||x - y|| + 1e-7 on every supplied pair.
PerturbationReport gap_perturbation_check(const ProblemInstance& inst, const MixturePolytope& poly,
                                          const std::vector<std::pair<Vec, Vec>>& pairs);

// Gradient consistency against central finite differences at sampled points
// in the ambient box; returns the worst scaled deviation.
double check_gradient(const Objective& f, const Vec& lo, const Vec& hi, int n_points,
                      std::uint64_t seed);

// Sampled Lipschitz audit: max ||grad f(x) - grad f(y)|| / ||x - y||.
double check_smoothness(const Objective& f, const Vec& lo, const Vec& hi, int n_pairs,
                        std::uint64_t seed);

// --- theorem bound formulas, evaluated from computed constants -------------

struct ConvexBounds {
    double suboptimality = 0.0;
    double violation = 0.0;
};

// General convex bounds for arbitrary (V, eta):
// subopt <= (2K + MD)/(eta T) + B^2/(2V) + L D^2 eta / 2
// violation <= sqrt(4KV/T + 4KV/(T^2 eta) + B^2/T + L D^2 V eta / T)
ConvexBounds convex_bounds_general(const BoundConstants& bc, double V, double eta, long long T);

// V = T^{1/3}, eta = T^{-2/3} specialization.
ConvexBounds convex_bounds_cuberoot(const BoundConstants& bc, long long T);

// V = sqrt(T), eta = 1/sqrt(T) with a Lagrange multiplier vector.
ConvexBounds convex_bounds_sqrt_lagrange(const BoundConstants& bc, long long T,
                                         double lambda_norm, double At_lambda_norm);

struct NonconvexBounds {
    double gap = 0.0;
    double qnorm_over_t = 0.0;  // bound on E||Q(T)|| / T
    double gamma_shift = 0.0;   // D / (eta T); violation_i adds ||a_i|| times this
    double dist_sq = 0.0;
    double violation(double a_norm) const { return qnorm_over_t + a_norm * gamma_shift; }
};

// General nonconvex bounds for arbitrary (V, eta):
// gap <= 2K/(eta T) + B^2/V + eta L D^2 / 2
// sqrt(E||Q(T)||^2)/T <= sqrt(2MDV/T + 4KV/(eta T^2) + B^2/T + L D^2 eta V / T)
// dist^2 <= eta D^2
NonconvexBounds nonconvex_bounds_general(const BoundConstants& bc, double V, double eta,
                                         long long T);

// V = T^{1/3}, eta = T^{-2/3} specialization (stated corollary forms).
NonconvexBounds nonconvex_bounds_cuberoot(const BoundConstants& bc, long long T);

// Slater-improved forms at V = sqrt(T), eta = 1/sqrt(T).
double slater_gap_bound(const BoundConstants& bc, long long T);
double slater_violation_bound(const BoundConstants& bc, double eps, double a_norm, long long T);
double slater_dist_sq_bound(const BoundConstants& bc, long long T);

// Two-phase tracking bound (sqrt(2)+1) D / T^{1/3}.
double tracking_bound(const BoundConstants& bc, long long T);

}  // namespace pdfw
