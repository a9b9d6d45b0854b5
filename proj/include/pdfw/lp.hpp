#pragma once

#include <limits>
#include <vector>

#include "pdfw/vec.hpp"

namespace pdfw::lp {

// Numeric breakdown inside the simplex solver (tiny pivots, stuck artificials).
struct conditioning_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Status { Optimal, Infeasible, Unbounded };
enum class Sense { LE, GE, EQ };

inline constexpr double kNoUpper = std::numeric_limits<double>::infinity();

// Dense LP at desk scale:
//   min (or max) cost . x
//   s.t. rows[i] . x  (<=, >=, =)  rhs[i]
//        lower[j] <= x[j] <= upper[j]   (lower finite, upper may be +inf)
struct Problem {
    Vec cost;
    bool maximize = false;
    std::vector<Vec> rows;
    std::vector<Sense> senses;
    Vec rhs;
    Vec lower;  // defaults to 0 when left empty
    Vec upper;  // defaults to +inf when left empty

    int n_vars() const { return static_cast<int>(cost.size()); }
    int n_rows() const { return static_cast<int>(rhs.size()); }

    void add_row(Vec a, Sense s, double b) {
        rows.push_back(std::move(a));
        senses.push_back(s);
        rhs.push_back(b);
    }
};

struct Solution {
    Status status = Status::Optimal;
    Vec x;
    double value = 0.0;
    // Shadow prices d(value)/d(rhs[i]) per input row, valid when Optimal.
    Vec row_duals;
    double dual_value = 0.0;
    // Largest violation of the nonnegative-reduced-cost certificate.
    double certificate_slack = 0.0;
    int iterations = 0;
};

// Two-phase primal simplex with Bland's rule. Optimality is certified by
// recomputing reduced costs from the original data against the final basis.
Solution solve(const Problem& problem);

}  // namespace pdfw::lp
