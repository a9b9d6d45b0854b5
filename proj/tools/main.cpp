// Experiment harness CLI: run sweeps, verify property suites, generate
// instance files, and query the polytope oracles.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "pdfw/diagnostics.hpp"
#include "pdfw/harness.hpp"
#include "pdfw/polytope.hpp"

namespace {

pdfw::Vec parse_point(const std::string& text) {
    pdfw::Vec out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t used = 0;
        out.push_back(std::stod(text.substr(pos), &used));
        pos += used;
        if (pos < text.size() && text[pos] == ',') ++pos;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"primal-dual Frank-Wolfe experiment harness"};
    app.require_subcommand(1);

    // --- run -----------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run an experiment plan and write CSV summaries");
    pdfw::harness::ExperimentPlan plan;
    std::string schedule = "cuberoot";
    std::string out_dir;
    std::uint64_t base_seed = 1;
    run->add_option("--instance", plan.instance,
                    "instance file, or ref:convex / ref:sigmoidal / ref:deterministic / ref:cycle4")
        ->required();
    run->add_option("--algo", plan.algorithm, "pdfw | dpp | pdgrad | two_phase | distributed")
        ->capture_default_str();
    run->add_option("--schedule", schedule, "fixed | cuberoot | sqrt")->capture_default_str();
    run->add_option("--horizons", plan.horizons, "comma-separated horizons, strictly increasing")
        ->required()
        ->delimiter(',');
    run->add_option("--seeds", plan.seeds, "seeds per horizon")->capture_default_str();
    run->add_option("--seed", base_seed, "base seed")->capture_default_str();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--workers", plan.workers, "concurrent (T, seed) cells")
        ->capture_default_str();
    run->add_flag("--trace", plan.write_traces, "write per-slot trace CSVs");
    run->add_option("--V", plan.fixed_v, "penalty weight for the fixed schedule")
        ->capture_default_str();
    run->add_option("--eta", plan.fixed_eta, "averaging weight for the fixed schedule")
        ->capture_default_str();
    run->add_option("--beta", plan.beta, "pdgrad step parameter")->capture_default_str();

    // --- verify ----------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    bool quick = false;
    verify->add_option("suite", suite, "identities | convex-bounds | nonconvex-bounds | slater | "
                                       "distributed | perturbation | drift | all")
        ->required();
    verify->add_flag("--quick", quick, "reduced scale for smoke runs");

    // --- gen -------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    std::string kind = "convex";
    int gen_d = 2, gen_states = 2;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--kind", kind, "convex | sigmoidal | cycle4")->capture_default_str();
    gen->add_option("--d", gen_d, "decision dimension")->capture_default_str();
    gen->add_option("--states", gen_states, "number of states")->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output file")->required();

    // --- gap -------------------------------------------------------------------
    auto* gap = app.add_subcommand("gap", "one-off Frank-Wolfe gap / distance query");
    std::string gap_instance, gap_point;
    gap->add_option("--instance", gap_instance, "instance file or ref:... name")->required();
    gap->add_option("--point", gap_point, "comma-separated coordinates")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            if (schedule == "fixed")
                plan.schedule = pdfw::Schedule::Fixed;
            else if (schedule == "cuberoot")
                plan.schedule = pdfw::Schedule::CubeRoot;
            else if (schedule == "sqrt")
                plan.schedule = pdfw::Schedule::SquareRoot;
            else
                throw pdfw::harness::plan_error("unknown schedule '" + schedule + "'");
            plan.out_dir = out_dir;
            plan.base_seed = base_seed;
            const auto report = pdfw::harness::run_plan(plan);
            std::printf("wrote %s (%zu rows) and %s\n", report.summary_csv.c_str(),
                        report.rows.size(), report.bounds_report.c_str());
            if (!report.all_bounds_hold) {
                std::fprintf(stderr, "bound check failures recorded in %s\n",
                             report.bounds_report.c_str());
                return 1;
            }
            return 0;
        }
        if (*verify) {
            const auto opt = quick ? pdfw::harness::VerifyOptions::quick()
                                   : pdfw::harness::VerifyOptions{};
            bool ok = true;
            if (suite == "all") {
                for (const auto& name : pdfw::harness::suite_names()) {
                    const auto rep = pdfw::harness::verify_suite(name, opt);
                    pdfw::harness::print_report(rep, stdout);
                    ok = ok && rep.pass();
                }
            } else {
                const auto rep = pdfw::harness::verify_suite(suite, opt);
                pdfw::harness::print_report(rep, stdout);
                ok = rep.pass();
            }
            return ok ? 0 : 1;
        }
        if (*gen) {
            if (kind == "cycle4") {
                pdfw::dist::save_network(pdfw::problems::reference_cycle4(), gen_out);
            } else if (kind == "convex" || kind == "sigmoidal") {
                const auto g = kind == "convex"
                                   ? pdfw::problems::make_convex_scheduling(gen_d, gen_states, gen_seed)
                                   : pdfw::problems::make_sigmoidal_scheduling(gen_d, gen_states,
                                                                               gen_seed);
                pdfw::problems::save_instance(g.instance, g.certificates, gen_out);
            } else {
                std::fprintf(stderr, "unknown kind '%s'\n", kind.c_str());
                return 2;
            }
            std::printf("wrote %s\n", gen_out.c_str());
            return 0;
        }
        if (*gap) {
            pdfw::problems::GeneratedInstance g;
            if (gap_instance == "ref:convex")
                g = pdfw::problems::reference_convex();
            else if (gap_instance == "ref:sigmoidal")
                g = pdfw::problems::reference_sigmoidal();
            else if (gap_instance == "ref:deterministic")
                g = pdfw::problems::reference_deterministic();
            else
                g = pdfw::problems::load_instance(gap_instance);
            const auto poly = pdfw::MixturePolytope::from_instance(g.instance);
            const pdfw::Vec point = parse_point(gap_point);
            const double gval = pdfw::fw_gap(g.instance, poly, point);
            const double dval = pdfw::dist_to_polytope(poly, point);
            std::printf("fw_gap=%.12g dist=%.12g\n", gval, dval);
            return 0;
        }
    } catch (const pdfw::harness::unknown_suite& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const pdfw::harness::plan_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
