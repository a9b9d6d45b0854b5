#pragma once

#include <filesystem>
#include <optional>

#include "pdfw/core.hpp"
#include "pdfw/distributed.hpp"

namespace pdfw::problems {

struct generation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct load_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- objective families ----------------------------------------------------

// f(g) = ||g - target||^2, L = 2, convex, closed-form box maxima.
Objective quadratic_objective(Vec target);

// f(g) = <c, g> + offset, L = 0, convex.
Objective linear_objective(Vec c, double offset = 0.0);

// Sigmoidal scheduling utility in minimization form,
//   f(g) = -sum_j amp_j / (1 + exp(-steep_j (g_j - thresh_j))),
// nonconvex, with the conservative smoothness envelope amp steep^2 / 4.
Objective sigmoidal_objective(Vec amplitude, Vec steepness, Vec threshold);

Objective default_sigmoidal(int d);  // amp = 1, steep = 10, thresh = 0.5

// --- certificates carried by instance files --------------------------------

struct Certificates {
    std::optional<double> slater_margin;
    std::optional<Vec> gamma_star;
    std::optional<double> f_star;
};

struct GeneratedInstance {
    ProblemInstance instance;
    Certificates certificates;
};

// --- generators -------------------------------------------------------------

// Random opportunistic-scheduling instance: per-state rate vertices in
// [0,1]^d plus the idle (origin) vertex, quadratic objective pulled to a
// random feasible-box target, and d per-user constraints <e_i, g> <= b_i with
// rhs drawn to keep a Slater point. Certificates are attached and verified.
GeneratedInstance make_convex_scheduling(int d, int n_states, std::uint64_t seed);

// Same feasible structure with the default sigmoidal utility; nonconvex.
GeneratedInstance make_sigmoidal_scheduling(int d, int n_states, std::uint64_t seed);

// Single-state instance whose decision set is fixed for all slots.
ProblemInstance make_deterministic(std::vector<Vec> vertices, Objective objective,
                                   std::vector<Vec> a_rows, Vec b,
                                   const std::string& name = "deterministic");

// --- fixed reference instances used by the verification suites -------------

// Convex quadratic, d = 2, two states, interior optimum, Slater margin 0.55.
GeneratedInstance reference_convex();

// Sigmoidal utility on the same feasible structure.
GeneratedInstance reference_sigmoidal();

// Deterministic (fixed-set) sigmoidal instance with one Slater constraint.
GeneratedInstance reference_deterministic();

// Four-node cycle with one shared scalar in [0, 1] and per-node quadratic
// pulls toward different targets; the consensus fixture of the distributed
// verification suite.
dist::Network reference_cycle4();

// --- instance files (documented JSON schema, version field) ----------------

void save_instance(const ProblemInstance& inst, const Certificates& certs,
                   const std::filesystem::path& path);

// Loads, validates structure, re-verifies declared certificates and origin
// membership. Mismatches are hard failures.
GeneratedInstance load_instance(const std::filesystem::path& path);

}  // namespace pdfw::problems
