#pragma once

#include <filesystem>

#include "pdfw/algorithms.hpp"
#include "pdfw/problems.hpp"

namespace pdfw::harness {

struct plan_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct unknown_suite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One experiment sweep: an instance (file path or "ref:..." shorthand), an
// algorithm, a schedule, a horizon grid, and a seed count.
struct ExperimentPlan {
    std::string instance;  // path, or ref:convex / ref:sigmoidal / ref:deterministic / ref:cycle4
    std::string algorithm = "pdfw";  // pdfw | dpp | pdgrad | two_phase | distributed
    Schedule schedule = Schedule::CubeRoot;
    double fixed_v = 1.0;    // used by the Fixed schedule
    double fixed_eta = 0.5;  // used by the Fixed schedule
    double beta = 0.1;       // pdgrad parameterization
    std::vector<long long> horizons;
    int seeds = 1;
    std::uint64_t base_seed = 1;
    std::filesystem::path out_dir;
    int workers = 1;
    bool write_traces = false;

    void validate() const;
};

struct SummaryRow {
    std::string instance, algorithm, schedule;
    long long T = 0;
    int seeds = 0;
    double f_xbar_mean = 0.0, f_xbar_se = 0.0;
    double subopt_mean = 0.0;         // NaN for nonconvex objectives
    double max_violation_mean = 0.0;  // mean over seeds of max_i violation
    double fw_gap_mean = 0.0;         // NaN for convex objectives
    double dist2_mean = 0.0;          // NaN for convex objectives
    double bound_subopt = 0.0;        // theorem bound (suboptimality or FW gap)
    double bound_violation = 0.0;     // worst per-constraint theorem bound
    double wallclock_s = 0.0;
};

struct PlanReport {
    std::vector<SummaryRow> rows;
    std::filesystem::path summary_csv;
    std::filesystem::path bounds_report;
    bool all_bounds_hold = true;
};

// Runs every (T, seed) cell (concurrently up to plan.workers), writes
// summary.csv, a bound-check report, and per-cell trace CSVs when enabled.
PlanReport run_plan(const ExperimentPlan& plan);

// --- verification suites -----------------------------------------------------

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    int criterion = 0;  // acceptance criterion this check belongs to (0 = none)
    std::string note;
};

struct VerifyReport {
    std::string suite;
    std::vector<Check> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Scale knobs; the defaults are the full verification scale.
struct VerifyOptions {
    int seeds = 200;
    std::vector<long long> horizons = {1000, 10000, 100000};
    std::vector<long long> two_phase_horizons = {1000, 10000};
    long long equality_horizon = 2000;
    int identity_instances = 50;
    int oracle_instances = 20;
    int perturbation_pairs = 100;
    int drift_series = 32;
    std::uint64_t base_seed = 314159;

    static VerifyOptions quick();  // reduced scale for development runs
};

VerifyReport verify_identities(const VerifyOptions& opt = {});
VerifyReport verify_convex_bounds(const VerifyOptions& opt = {});
VerifyReport verify_nonconvex_bounds(const VerifyOptions& opt = {});
VerifyReport verify_slater(const VerifyOptions& opt = {});
VerifyReport verify_distributed(const VerifyOptions& opt = {});
VerifyReport verify_perturbation(const VerifyOptions& opt = {});
VerifyReport verify_drift(const VerifyOptions& opt = {});

// Dispatch by suite name {identities, convex-bounds, nonconvex-bounds,
// slater, distributed, perturbation, drift}; throws unknown_suite.
VerifyReport verify_suite(const std::string& name, const VerifyOptions& opt = {});
const std::vector<std::string>& suite_names();

void print_report(const VerifyReport& report, std::FILE* out);

// mean and standard error of a sample
std::pair<double, double> mean_se(const Vec& xs);

}  // namespace pdfw::harness
