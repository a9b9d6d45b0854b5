#include "pdfw/lp.hpp"

#include <algorithm>
#include <cmath>

namespace pdfw::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr int kMaxIterations = 200000;

// Standard form working problem: min c.y, Ay = rhs, y >= 0, rhs >= 0.
struct Tableau {
    int m = 0;                       // rows
    int n = 0;                       // columns (structural + slack + artificial)
    int n_structural = 0;            // shifted original variables + bound slacks
    int first_artificial = 0;        // columns >= this are artificials
    std::vector<Vec> a;              // m x n, row-major, updated in place
    Vec rhs;                         // current basic values
    std::vector<int> basis;          // basic column per row
    Vec phase2_cost;                 // length n (0 on artificials)
    std::vector<Vec> original_a;     // untouched copy for certificates/duals
    Vec original_rhs;
};

int pick_entering(const Tableau& t, const Vec& cost, bool allow_artificial) {
    // Bland: smallest column index with a negative reduced cost,
    // computed as cost[j] - sum_i cost[basis[i]] * a[i][j].
    Vec cb(static_cast<std::size_t>(t.m));
    for (int i = 0; i < t.m; ++i) cb[i] = cost[static_cast<std::size_t>(t.basis[i])];
    for (int j = 0; j < t.n; ++j) {
        if (!allow_artificial && j >= t.first_artificial) break;
        bool basic = false;
        for (int i = 0; i < t.m; ++i)
            if (t.basis[i] == j) {
                basic = true;
                break;
            }
        if (basic) continue;
        double r = cost[static_cast<std::size_t>(j)];
        for (int i = 0; i < t.m; ++i) r -= cb[i] * t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (r < -kReducedCostTol) return j;
    }
    return -1;
}

// Returns leaving row, or -1 when the column is unbounded below.
int pick_leaving(const Tableau& t, int enter) {
    int row = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < t.m; ++i) {
        const double aij = t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (aij <= kPivotTol) continue;
        const double ratio = t.rhs[static_cast<std::size_t>(i)] / aij;
        // Ratio ties broken by smallest basic variable index (Bland).
        if (row < 0 || ratio < best_ratio ||
            (ratio == best_ratio && t.basis[i] < t.basis[row])) {
            row = i;
            best_ratio = ratio;
        }
    }
    return row;
}

void pivot(Tableau& t, int row, int col) {
    const double p = t.a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    if (std::abs(p) < kPivotTol) throw conditioning_error("simplex: pivot below 1e-11");
    auto& pr = t.a[static_cast<std::size_t>(row)];
    const double inv = 1.0 / p;
    for (int j = 0; j < t.n; ++j) pr[static_cast<std::size_t>(j)] *= inv;
    t.rhs[static_cast<std::size_t>(row)] *= inv;
    pr[static_cast<std::size_t>(col)] = 1.0;
    for (int i = 0; i < t.m; ++i) {
        if (i == row) continue;
        auto& ri = t.a[static_cast<std::size_t>(i)];
        const double f = ri[static_cast<std::size_t>(col)];
        if (f == 0.0) continue;
        for (int j = 0; j < t.n; ++j) ri[static_cast<std::size_t>(j)] -= f * pr[static_cast<std::size_t>(j)];
        ri[static_cast<std::size_t>(col)] = 0.0;
        t.rhs[static_cast<std::size_t>(i)] -= f * t.rhs[static_cast<std::size_t>(row)];
    }
    t.basis[row] = col;
}

// Runs Bland iterations for the given cost. Returns false on unbounded.
bool iterate(Tableau& t, const Vec& cost, bool allow_artificial, int& iterations) {
    for (;;) {
        if (++iterations > kMaxIterations)
            throw conditioning_error("simplex: iteration limit exceeded");
        const int enter = pick_entering(t, cost, allow_artificial);
        if (enter < 0) return true;
        const int leave = pick_leaving(t, enter);
        if (leave < 0) return false;
        pivot(t, leave, enter);
    }
}

// Solve B^T y = c_B for the final basis using the original column data.
Vec basis_duals(const Tableau& t) {
    const int m = t.m;
    std::vector<Vec> bt(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(m + 1), 0.0));
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k)
            bt[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                t.original_a[static_cast<std::size_t>(k)][static_cast<std::size_t>(t.basis[i])];
        bt[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] =
            t.phase2_cost[static_cast<std::size_t>(t.basis[i])];
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(bt[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(bt[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(bt[static_cast<std::size_t>(col)], bt[static_cast<std::size_t>(piv)]);
        const double d = bt[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        if (std::abs(d) < 1e-13) continue;  // redundant basis row, dual component stays 0
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = bt[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
            if (f == 0.0) continue;
            for (int k = col; k <= m; ++k)
                bt[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -=
                    f * bt[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
        }
    }
    Vec y(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        const double d = bt[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        if (std::abs(d) >= 1e-13)
            y[static_cast<std::size_t>(i)] = bt[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] / d;
    }
    return y;
}

}  // namespace

Solution solve(const Problem& problem) {
    const int nv = problem.n_vars();
    if (nv == 0) throw std::invalid_argument("lp::solve: empty problem");
    for (const auto& r : problem.rows)
        if (static_cast<int>(r.size()) != nv)
            throw std::invalid_argument("lp::solve: row dimension mismatch");
    Vec lower = problem.lower.empty() ? Vec(static_cast<std::size_t>(nv), 0.0) : problem.lower;
    Vec upper = problem.upper.empty() ? Vec(static_cast<std::size_t>(nv), kNoUpper) : problem.upper;
    if (static_cast<int>(lower.size()) != nv || static_cast<int>(upper.size()) != nv)
        throw std::invalid_argument("lp::solve: bound dimension mismatch");
    for (double lo : lower)
        if (!std::isfinite(lo)) throw std::invalid_argument("lp::solve: lower bounds must be finite");

    // Minimization costs; shift x = lower + y so y >= 0.
    Vec cost(problem.cost);
    if (problem.maximize)
        for (double& c : cost) c = -c;
    double shift_value = 0.0;
    for (int j = 0; j < nv; ++j) shift_value += cost[static_cast<std::size_t>(j)] * lower[static_cast<std::size_t>(j)];

    // Collect rows: user rows first, then finite upper bounds as y_j <= up - lo.
    struct StdRow {
        Vec a;
        Sense sense;
        double rhs;
        int user_index;  // -1 for bound rows
        double flip;     // +1 or -1, times applied to reach rhs >= 0
    };
    std::vector<StdRow> rows;
    for (int i = 0; i < problem.n_rows(); ++i) {
        StdRow r{problem.rows[static_cast<std::size_t>(i)], problem.senses[static_cast<std::size_t>(i)],
                 problem.rhs[static_cast<std::size_t>(i)], i, 1.0};
        r.rhs -= dot(r.a, lower);
        rows.push_back(std::move(r));
    }
    for (int j = 0; j < nv; ++j) {
        if (upper[static_cast<std::size_t>(j)] == kNoUpper) continue;
        StdRow r;
        r.a = Vec(static_cast<std::size_t>(nv), 0.0);
        r.a[static_cast<std::size_t>(j)] = 1.0;
        r.sense = Sense::LE;
        r.rhs = upper[static_cast<std::size_t>(j)] - lower[static_cast<std::size_t>(j)];
        r.user_index = -1;
        r.flip = 1.0;
        rows.push_back(std::move(r));
    }
    const int m = static_cast<int>(rows.size());

    for (auto& r : rows) {
        if (r.rhs < 0.0) {
            for (double& v : r.a) v = -v;
            r.rhs = -r.rhs;
            r.flip = -1.0;
            if (r.sense == Sense::LE)
                r.sense = Sense::GE;
            else if (r.sense == Sense::GE)
                r.sense = Sense::LE;
        }
    }

    // Column layout: structural | slack/surplus | artificial.
    int n_slack = 0;
    for (const auto& r : rows)
        if (r.sense != Sense::EQ) ++n_slack;
    Tableau t;
    t.m = m;
    t.n_structural = nv + n_slack;
    int n_art = 0;
    for (const auto& r : rows)
        if (r.sense != Sense::LE) ++n_art;
    t.first_artificial = t.n_structural;
    t.n = t.n_structural + n_art;
    t.a.assign(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(t.n), 0.0));
    t.rhs.assign(static_cast<std::size_t>(m), 0.0);
    t.basis.assign(static_cast<std::size_t>(m), -1);
    t.phase2_cost.assign(static_cast<std::size_t>(t.n), 0.0);
    for (int j = 0; j < nv; ++j) t.phase2_cost[static_cast<std::size_t>(j)] = cost[static_cast<std::size_t>(j)];

    int slack_col = nv;
    int art_col = t.first_artificial;
    Vec phase1_cost(static_cast<std::size_t>(t.n), 0.0);
    for (int i = 0; i < m; ++i) {
        auto& ai = t.a[static_cast<std::size_t>(i)];
        for (int j = 0; j < nv; ++j) ai[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(i)].a[static_cast<std::size_t>(j)];
        t.rhs[static_cast<std::size_t>(i)] = rows[static_cast<std::size_t>(i)].rhs;
        switch (rows[static_cast<std::size_t>(i)].sense) {
            case Sense::LE:
                ai[static_cast<std::size_t>(slack_col)] = 1.0;
                t.basis[i] = slack_col++;
                break;
            case Sense::GE:
                ai[static_cast<std::size_t>(slack_col)] = -1.0;
                ++slack_col;
                ai[static_cast<std::size_t>(art_col)] = 1.0;
                phase1_cost[static_cast<std::size_t>(art_col)] = 1.0;
                t.basis[i] = art_col++;
                break;
            case Sense::EQ:
                ai[static_cast<std::size_t>(art_col)] = 1.0;
                phase1_cost[static_cast<std::size_t>(art_col)] = 1.0;
                t.basis[i] = art_col++;
                break;
        }
    }
    t.original_a = t.a;
    t.original_rhs = t.rhs;

    Solution sol;
    sol.iterations = 0;

    if (n_art > 0) {
        if (!iterate(t, phase1_cost, true, sol.iterations))
            throw conditioning_error("simplex: phase 1 reported unbounded");
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (t.basis[i] >= t.first_artificial) infeas += t.rhs[static_cast<std::size_t>(i)];
        if (infeas > kFeasTol) {
            sol.status = Status::Infeasible;
            return sol;
        }
        // Drive remaining zero-level artificials out of the basis when possible.
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] < t.first_artificial) continue;
            int col = -1;
            for (int j = 0; j < t.n_structural; ++j)
                if (std::abs(t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > kPivotTol) {
                    col = j;
                    break;
                }
            if (col >= 0) pivot(t, i, col);
            // else: redundant row; the artificial stays basic at level zero.
        }
    }

    if (!iterate(t, t.phase2_cost, false, sol.iterations)) {
        sol.status = Status::Unbounded;
        return sol;
    }

    // Leftover artificials must sit at zero or the data was inconsistent.
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= t.first_artificial && t.rhs[static_cast<std::size_t>(i)] > kFeasTol)
            throw conditioning_error("simplex: artificial stuck at positive level");

    sol.status = Status::Optimal;
    sol.x.assign(static_cast<std::size_t>(nv), 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < nv) sol.x[static_cast<std::size_t>(t.basis[i])] = t.rhs[static_cast<std::size_t>(i)];
    for (int j = 0; j < nv; ++j) sol.x[static_cast<std::size_t>(j)] += lower[static_cast<std::size_t>(j)];

    double min_value = shift_value;
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < t.n_structural)
            min_value += t.phase2_cost[static_cast<std::size_t>(t.basis[i])] * t.rhs[static_cast<std::size_t>(i)];

    // Optimality certificate and duals from the original column data.
    const Vec y = basis_duals(t);
    double worst = 0.0;
    for (int j = 0; j < t.n_structural; ++j) {
        double r = t.phase2_cost[static_cast<std::size_t>(j)];
        for (int i = 0; i < m; ++i)
            r -= y[static_cast<std::size_t>(i)] * t.original_a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        worst = std::min(worst, r);
    }
    sol.certificate_slack = -worst;
    double dual_min = shift_value + dot(y, t.original_rhs);

    sol.row_duals.assign(static_cast<std::size_t>(problem.n_rows()), 0.0);
    for (int i = 0; i < m; ++i) {
        const int ui = rows[static_cast<std::size_t>(i)].user_index;
        if (ui >= 0)
            sol.row_duals[static_cast<std::size_t>(ui)] = rows[static_cast<std::size_t>(i)].flip * y[static_cast<std::size_t>(i)];
    }

    if (problem.maximize) {
        sol.value = -min_value;
        sol.dual_value = -dual_min;
        for (double& v : sol.row_duals) v = -v;
    } else {
        sol.value = min_value;
        sol.dual_value = dual_min;
    }
    return sol;
}

}  // namespace pdfw::lp
