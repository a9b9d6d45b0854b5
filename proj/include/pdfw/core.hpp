#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdfw/rng.hpp"
#include "pdfw/vec.hpp"

namespace pdfw {

// Contract violations (dimension mismatches, invalid parameters).
struct contract_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An algorithm was asked to run on an instance shape it does not support.
struct unsupported_instance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// I.i.d. state process: per-slot state index drawn by inverse CDF on the
// cumulative probabilities, using one uniform draw per slot.
struct StateModel {
    std::vector<std::string> names;  // optional labels, may be empty
    Vec probabilities;

    int count() const { return static_cast<int>(probabilities.size()); }

    void validate() const;

    int sample(Rng& rng) const {
        const double u = rng.next_unit();
        double acc = 0.0;
        const int n = count();
        for (int i = 0; i < n; ++i) {
            acc += probabilities[i];
            if (u < acc) return i;
        }
        return n - 1;
    }

    static StateModel single() { return StateModel{{}, {1.0}}; }
    static StateModel uniform(int n) {
        return StateModel{{}, Vec(static_cast<std::size_t>(n), 1.0 / n)};
    }
};

enum class SetKind { FiniteVertices, Box, Simplex };

// Per-state decision region. Simplex means the scaled standard simplex whose
// linear minimizers are always taken at the vertices {scale * e_j}.
struct DecisionSet {
    SetKind kind = SetKind::FiniteVertices;
    std::vector<Vec> vertices;  // FiniteVertices
    Vec lower, upper;           // Box
    double scale = 1.0;         // Simplex
    int simplex_dim = 0;

    int dim() const;
    void validate() const;

    // Hull generators: finite vertices, box corners, or simplex vertices.
    // Box corner c has coordinate j at upper iff bit j of c is set.
    std::vector<Vec> generators() const;

    static DecisionSet finite(std::vector<Vec> verts);  // deduplicates
    static DecisionSet box(Vec lo, Vec hi);
    static DecisionSet simplex(int d, double scale);
};

// Smooth objective with an L-Lipschitz gradient. The box_* hooks give the
// closed-form maxima of |f| and ||grad f|| over an axis-aligned box when the
// family supports it; bound computation falls back to sampling otherwise.
struct Objective {
    int dim = 0;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    double smoothness = 0.0;  // L
    bool convex = false;

    std::function<double(const Vec&, const Vec&)> box_sup_abs;        // K over [lo, hi]
    std::function<double(const Vec&, const Vec&)> box_sup_grad_norm;  // M over [lo, hi]

    // Family id and parameter vectors, set by the instance library so
    // objectives can round-trip through instance files. Empty family means
    // the objective is not serializable.
    std::string family;
    std::vector<Vec> params;
    double offset = 0.0;
};

// Rows a_i, right-hand sides b_i of <a_i, x> <= b_i.
struct LinearConstraints {
    Matrix A;  // N x d
    Vec b;

    int count() const { return static_cast<int>(b.size()); }
    int dim() const { return A.cols; }

    // A x - b
    Vec residual(std::span<const double> x) const {
        Vec r = A.mul(x);
        for (int i = 0; i < count(); ++i) r[i] -= b[i];
        return r;
    }

    static LinearConstraints none(int d) {
        LinearConstraints c;
        c.A = Matrix(0, d);
        return c;
    }
    static LinearConstraints from_rows(const std::vector<Vec>& rows, Vec rhs);
};

struct QueueState {
    Vec q;

    int count() const { return static_cast<int>(q.size()); }
    static QueueState zero(int n) { return QueueState{Vec(static_cast<std::size_t>(n), 0.0)}; }
};

// Boundedness constants of the instance: M = sup ||grad f||, K = sup |f|,
// B^2 = sup of the squared constraint-residual norm, D = diameter of the
// ambient hull, L = gradient Lipschitz constant.
struct BoundConstants {
    double M = 0.0;
    double K = 0.0;
    double B = 0.0;
    double b_squared = 0.0;  // exact max used for float-exact one-step checks
    double D = 0.0;
    double L = 0.0;
    bool certified = true;  // false when M, K come from sampling
};

struct ProblemInstance {
    std::string name;
    StateModel states;
    std::vector<DecisionSet> decision_sets;  // indexed by state
    Objective objective;
    LinearConstraints constraints;
    std::optional<BoundConstants> bounds;

    int dim() const { return objective.dim; }

    // Checks structural coherence (dimensions, probabilities, set validity).
    // Membership of the origin in the achievable-mean polytope is re-checked
    // by the instance loaders through the diagnostics layer.
    void validate() const;

    // All hull generators of the ambient set B: the origin plus every
    // decision-set generator of every state.
    std::vector<Vec> ambient_generators() const;
};

enum class Schedule { Fixed, CubeRoot, SquareRoot };

struct AlgoConfig {
    long long T = 1;
    double V = 1.0;
    double eta = 0.5;
    std::uint64_t seed = 0;
    Schedule schedule = Schedule::Fixed;
};

// Config with the schedule applied: CubeRoot sets V = T^{1/3}, eta = T^{-2/3};
// SquareRoot sets V = sqrt(T), eta = 1/sqrt(T).
struct ResolvedConfig {
    long long T;
    double V;
    double eta;
    std::uint64_t seed;
};

ResolvedConfig resolve(const AlgoConfig& cfg);

// Full per-slot history of one run. Storage is flat; gamma(t) is valid for
// t in [-1, T-1] and queue(t) for t in [0, T].
struct RunTrace {
    int dim = 0;
    int n_constraints = 0;
    long long T = 0;
    std::vector<double> xs;      // T * dim
    std::vector<double> gammas;  // (T + 1) * dim, starting at gamma_{-1}
    std::vector<double> queues;  // (T + 1) * n_constraints
    Vec x_bar;
    Vec gamma_alpha;
    long long alpha = -1;  // in {-1, ..., T-2}

    std::span<const double> x(long long t) const {
        return {xs.data() + static_cast<std::size_t>(t) * dim, static_cast<std::size_t>(dim)};
    }
    std::span<const double> gamma(long long t) const {
        return {gammas.data() + static_cast<std::size_t>(t + 1) * dim, static_cast<std::size_t>(dim)};
    }
    std::span<const double> queue(long long t) const {
        return {queues.data() + static_cast<std::size_t>(t) * n_constraints,
                static_cast<std::size_t>(n_constraints)};
    }
};

// --- single-slot operations ---------------------------------------------

// Minimizes <cost, x> over the set. Ties: lowest vertex index for
// FiniteVertices and Simplex; Box picks the lower bound when cost_j >= 0.
Vec lmo(const DecisionSet& set, std::span<const double> cost);

// Vertex index chosen by the FiniteVertices rule (used for exact replay).
int lmo_index(const DecisionSet& set, std::span<const double> cost);

// Q'_i = max{Q_i + <a_i, x> - b_i, 0}
QueueState queue_update(const QueueState& q, std::span<const double> x,
                        const LinearConstraints& c);

// V * grad + A^T q
Vec pdfw_cost(double V, const Vec& grad, const QueueState& q, const LinearConstraints& c);

struct StepResult {
    Vec x;
    Vec gamma_next;
    QueueState q_next;
};

// One primal-dual Frank-Wolfe slot: linear subproblem, averaging update,
// virtual-queue update.
StepResult pdfw_step(const ProblemInstance& inst, const ResolvedConfig& cfg,
                     const Vec& gamma_prev, const QueueState& q, int state_index);

}  // namespace pdfw
