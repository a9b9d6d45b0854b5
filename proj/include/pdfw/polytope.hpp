#pragma once

#include <optional>

#include "pdfw/core.hpp"
#include "pdfw/lp.hpp"

namespace pdfw {

// The feasible region {v in achievable-mean polytope : A v <= b} is empty.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite representation of the achievable-mean polytope: the probability-
// weighted Minkowski sum of the per-state convex hulls,
//   { sum_s p_s sum_k w_{s,k} v_{s,k} : w_{s,.} a probability vector }.
struct MixturePolytope {
    Vec probs;
    std::vector<std::vector<Vec>> vertices;  // per state
    int dim = 0;

    static MixturePolytope from_instance(const ProblemInstance& inst);

    int n_states() const { return static_cast<int>(probs.size()); }
    int total_vertices() const;

    // The point selecting vertex key[s] in every state.
    Vec point(const std::vector<int>& key) const;
    // The point of explicit per-state weight vectors.
    Vec point_of_weights(const std::vector<Vec>& weights) const;

    // Decomposed exact linear minimization: per-state vertex argmin
    // (first minimum), probability-weighted sum.
    std::vector<int> lmo_key(std::span<const double> cost) const;
    Vec lmo(std::span<const double> cost) const;

    // Exact membership via a feasibility LP in the mixture weights.
    bool contains(std::span<const double> p, double tol = 1e-9) const;
};

struct ConstrainedLmoResult {
    lp::Status status = lp::Status::Optimal;
    Vec point;
    double value = 0.0;
    Vec constraint_duals;  // shadow prices of the A v <= b rows (min problem)
};

// min <cost, v> over {v in poly : A v <= b}, solved as an LP in the
// per-state mixture weights.
ConstrainedLmoResult constrained_lmo(const MixturePolytope& poly, std::span<const double> cost,
                                     const LinearConstraints& constraints);

// Frank-Wolfe gap sup{<grad f(gamma), gamma - v> : v feasible}.
// Throws infeasible_error when the feasible region is empty.
double fw_gap(const ProblemInstance& inst, const MixturePolytope& poly, const Vec& gamma);

// min_{v in poly} ||gamma - v||, by away-step Frank-Wolfe on 0.5||v - gamma||^2
// with the decomposed exact LMO, run until the internal FW gap <= gap_tol.
double dist_to_polytope(const MixturePolytope& poly, const Vec& gamma, double gap_tol = 1e-8);

// Distance plus the projection point.
struct Projection {
    Vec point;
    double distance = 0.0;
};
Projection project_to_polytope(const MixturePolytope& poly, const Vec& gamma,
                               double gap_tol = 1e-8);

struct GammaStarResult {
    Vec gamma_star;
    double value = 0.0;
};

// Reference optimum of a convex instance over the constrained polytope,
// by Frank-Wolfe with away steps whose LMO is the mixture LP.
// Refuses nonconvex objectives; throws infeasible_error on empty regions.
GammaStarResult solve_gamma_star(const ProblemInstance& inst, const MixturePolytope& poly,
                                 double gap_tol = 1e-7);

struct SlaterCertificate {
    double margin = 0.0;               // epsilon > 0
    std::vector<Vec> witness;          // per-state probability vector over vertices
    Vec witness_mean;                  // the certified interior point
};

// Maximizes the uniform constraint margin over the polytope. Returns a
// certificate when the optimal margin exceeds 1e-9.
std::optional<SlaterCertificate> certify_slater(const ProblemInstance& inst,
                                                const MixturePolytope& poly);

struct LagrangeCertificate {
    Vec lambda;                // nonnegative multipliers, one per constraint
    double checked_gap = 0.0;  // max sampled f(gamma*) - f(v) - <lambda, Av-b>, want <= 0
};

// Multipliers from the dual of the linearized problem at gamma*, validated on
// sampled polytope points.
LagrangeCertificate lagrange_certificate(const ProblemInstance& inst, const MixturePolytope& poly,
                                         const Vec& gamma_star, int n_samples = 256,
                                         std::uint64_t seed = 1);

}  // namespace pdfw
