#pragma once

#include "pdfw/core.hpp"

namespace pdfw {

struct RunResult {
    RunTrace trace;
    double f_xbar = 0.0;
    Vec violations;  // <a_i, x_bar> - b_i
    Vec gamma_alpha;
    double wallclock = 0.0;  // seconds
};

// Runs primal-dual Frank-Wolfe for T slots from gamma_{-1} = 0, Q(0) = 0.
// States are drawn on stream 0 of the seed; the output index alpha is drawn
// uniformly from {-1, ..., T-2} on a dedicated stream so that changing T does
// not perturb the state sequence.
RunResult run_pdfw(const ProblemInstance& inst, const AlgoConfig& cfg);

// Drift-plus-penalty baseline: per slot minimizes V f(x) + <Q(t), Ax - b> by
// enumeration, so every decision set must be a finite vertex list. The
// averaged gamma sequence is tracked the same way as in run_pdfw.
RunResult run_dpp(const ProblemInstance& inst, const AlgoConfig& cfg);

// Primal-dual gradient baseline: identical to run_pdfw with V = 1/beta,
// eta = beta (exact trace equality for equal seeds).
RunResult run_pd_gradient(const ProblemInstance& inst, double beta, long long T,
                          std::uint64_t seed);

struct TrackingResult {
    Vec x_bar;
    Vec gamma_final;
    // Largest deviation of gamma_t from the running average of x_0..x_t,
    // which the eta_t = 1/(t+1) schedule makes an identity.
    double max_average_identity_error = 0.0;
};

// Queue-free Frank-Wolfe tracking a fixed target: cost gamma_{t-1} - target,
// step eta_t = 1/(t+1). Returns the time average of the decisions.
TrackingResult run_tracking_fw(const ProblemInstance& inst, const Vec& target, long long T,
                               std::uint64_t seed);

struct TwoPhaseResult {
    RunResult phase1;
    Vec target;  // gamma_alpha of phase 1
    Vec phase2_xbar;
    double tracking_error = 0.0;  // ||phase2_xbar - target||
    double phase2_identity_error = 0.0;
};

// Phase 1 runs PDFW; phase 2 re-runs the system on fresh state samples with
// the tracking Frank-Wolfe aimed at gamma_alpha.
TwoPhaseResult run_two_phase(const ProblemInstance& inst, const AlgoConfig& cfg);

}  // namespace pdfw
