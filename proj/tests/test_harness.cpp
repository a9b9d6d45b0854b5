#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pdfw/harness.hpp"

using namespace pdfw;
using namespace pdfw::harness;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Strips the trailing wallclock column from every CSV line; timings are the
// one nondeterministic field.
std::string without_wallclock(const std::string& csv) {
    std::string out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const auto eol = csv.find('\n', pos);
        const auto line = csv.substr(pos, eol - pos);
        const auto cut = line.rfind(',');
        out += line.substr(0, cut);
        out += '\n';
        pos = eol == std::string::npos ? csv.size() : eol + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("plan validation rejects malformed sweeps") {
    ExperimentPlan plan;
    plan.instance = "ref:convex";
    plan.out_dir = fs::temp_directory_path() / "pdfw_plan";
    plan.horizons = {100, 100};
    CHECK_THROWS_AS(plan.validate(), plan_error);
    plan.horizons = {100, 50};
    CHECK_THROWS_AS(plan.validate(), plan_error);
    plan.horizons = {50, 100};
    plan.seeds = 0;
    CHECK_THROWS_AS(plan.validate(), plan_error);
    plan.seeds = 2;
    plan.algorithm = "annealing";
    CHECK_THROWS_AS(plan.validate(), plan_error);
    plan.algorithm = "pdfw";
    CHECK_NOTHROW(plan.validate());
}

TEST_CASE("run_plan writes summaries whose bounds hold, reproducibly") {
    const fs::path dir = fs::temp_directory_path() / "pdfw_plan_convex";
    ExperimentPlan plan;
    plan.instance = "ref:convex";
    plan.algorithm = "pdfw";
    plan.schedule = Schedule::SquareRoot;
    plan.horizons = {100, 1000, 10000};
    plan.seeds = 8;
    plan.base_seed = 5;
    plan.out_dir = dir;
    auto report = run_plan(plan);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.all_bounds_hold);
    for (const auto& row : report.rows) {
        CHECK(row.subopt_mean <= row.bound_subopt);
        CHECK(std::isnan(row.fw_gap_mean));
        CHECK(row.seeds == 8);
    }
    const std::string first = read_file(report.summary_csv);

    // identical inputs reproduce the summary byte for byte, wallclock aside
    auto report2 = run_plan(plan);
    const std::string second = read_file(report2.summary_csv);
    CHECK(without_wallclock(first) == without_wallclock(second));

    // concurrent workers aggregate in the same order
    plan.workers = 2;
    auto report3 = run_plan(plan);
    CHECK(without_wallclock(first) == without_wallclock(read_file(report3.summary_csv)));
}

TEST_CASE("run_plan single-cell edge: seeds = 1, T = 1") {
    const fs::path dir = fs::temp_directory_path() / "pdfw_plan_tiny";
    ExperimentPlan plan;
    plan.instance = "ref:convex";
    plan.algorithm = "pdfw";
    plan.schedule = Schedule::Fixed;
    plan.fixed_v = 1.0;
    plan.fixed_eta = 0.5;
    plan.horizons = {1};
    plan.seeds = 1;
    plan.out_dir = dir;
    auto report = run_plan(plan);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].T == 1);
    CHECK(report.rows[0].seeds == 1);
    CHECK(report.rows[0].f_xbar_se == 0.0);  // single draw: x_bar = x_0
}

TEST_CASE("run_plan on the sigmoidal reference reports gap and distance") {
    const fs::path dir = fs::temp_directory_path() / "pdfw_plan_sig";
    ExperimentPlan plan;
    plan.instance = "ref:sigmoidal";
    plan.algorithm = "pdfw";
    plan.schedule = Schedule::CubeRoot;
    plan.horizons = {200, 2000};
    plan.seeds = 6;
    plan.out_dir = dir;
    plan.write_traces = true;
    auto report = run_plan(plan);
    for (const auto& row : report.rows) {
        CHECK(std::isnan(row.subopt_mean));
        CHECK_FALSE(std::isnan(row.fw_gap_mean));
        CHECK_FALSE(std::isnan(row.dist2_mean));
        CHECK(row.fw_gap_mean <= row.bound_subopt);
    }
    CHECK(fs::exists(dir / "trace_T200_seed0.csv"));

    // trace rows are recomputable inputs: spot-check the header shape
    std::ifstream tr(dir / "trace_T200_seed0.csv");
    std::string header;
    std::getline(tr, header);
    CHECK(header == "t,x0,x1,gamma0,gamma1,q0,q1");
}

TEST_CASE("run_plan covers the baseline algorithms") {
    ExperimentPlan plan;
    plan.instance = "ref:convex";
    plan.schedule = Schedule::Fixed;
    plan.fixed_v = 4.0;
    plan.fixed_eta = 0.2;
    plan.horizons = {500};
    plan.seeds = 4;

    plan.algorithm = "dpp";
    plan.out_dir = fs::temp_directory_path() / "pdfw_plan_dpp";
    auto dpp_report = run_plan(plan);
    REQUIRE(dpp_report.rows.size() == 1);
    CHECK(std::isnan(dpp_report.rows[0].bound_subopt));  // baseline: no theorem column
    CHECK(dpp_report.rows[0].subopt_mean >= -1e-9);

    plan.algorithm = "pdgrad";
    plan.beta = 0.2;
    plan.out_dir = fs::temp_directory_path() / "pdfw_plan_pdgrad";
    auto pg_report = run_plan(plan);
    REQUIRE(pg_report.rows.size() == 1);
    CHECK_FALSE(std::isnan(pg_report.rows[0].bound_subopt));
    CHECK(pg_report.all_bounds_hold);
}

TEST_CASE("run_plan handles the distributed reference network") {
    const fs::path dir = fs::temp_directory_path() / "pdfw_plan_dist";
    ExperimentPlan plan;
    plan.instance = "ref:cycle4";
    plan.algorithm = "distributed";
    plan.schedule = Schedule::CubeRoot;
    plan.horizons = {200, 1000};
    plan.seeds = 3;
    plan.out_dir = dir;
    auto report = run_plan(plan);
    REQUIRE(report.rows.size() == 2);
    // consensus residual shrinks with T
    CHECK(report.rows[1].max_violation_mean < report.rows[0].max_violation_mean);
}

TEST_CASE("two-phase plans record the tracking bound line") {
    const fs::path dir = fs::temp_directory_path() / "pdfw_plan_2p";
    ExperimentPlan plan;
    plan.instance = "ref:deterministic";
    plan.algorithm = "two_phase";
    plan.schedule = Schedule::CubeRoot;
    plan.horizons = {500};
    plan.seeds = 5;
    plan.out_dir = dir;
    auto report = run_plan(plan);
    CHECK(report.all_bounds_hold);
    const std::string bounds = read_file(report.bounds_report);
    CHECK(bounds.find("tracking_error") != std::string::npos);
}

TEST_CASE("verify suite dispatch and quick-scale runs") {
    CHECK_THROWS_AS(verify_suite("nope", VerifyOptions::quick()), unknown_suite);

    const auto opt = VerifyOptions::quick();
    for (const std::string name : {"identities", "drift"}) {
        const auto rep = verify_suite(name, opt);
        CHECK(rep.pass());
    }
}

TEST_CASE("network files round-trip through the loader") {
    const fs::path file = fs::temp_directory_path() / "pdfw_cycle4.json";
    dist::save_network(problems::reference_cycle4(), file);
    const auto net = dist::load_network(file);
    CHECK(net.graph.K == 4);
    CHECK(net.nodes.size() == 4);

    AlgoConfig cfg;
    cfg.T = 300;
    cfg.schedule = Schedule::CubeRoot;
    cfg.seed = 17;
    const auto ref = problems::reference_cycle4();
    const auto a = dist::run_distributed(ref.graph, ref.nodes, cfg);
    const auto b = dist::run_distributed(net.graph, net.nodes, cfg);
    for (int i = 0; i < 4; ++i) {
        CHECK(a.nodes[i].thetas == b.nodes[i].thetas);
        CHECK(a.nodes[i].xs == b.nodes[i].xs);
    }
}
