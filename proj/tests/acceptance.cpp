// Acceptance suite: runs every verification suite at full scale, groups the
// checks by acceptance criterion, and prints one pass/fail line per
// criterion. Exits nonzero if any criterion fails.

#include <cstdio>
#include <map>
#include <vector>

#include "pdfw/harness.hpp"

namespace {

const std::map<int, const char*> kCriteria{
    {1, "exact identities (queue bounds, averaging identity) at T in {1,7,100}"},
    {2, "convex bounds, cube-root schedule (objective and violation)"},
    {3, "convex bounds, square-root schedule with Lagrange multipliers"},
    {4, "non-convex suite: FW gap, squared distance, violations"},
    {5, "Slater-improved suite: gap, C_i violations, queue drift"},
    {6, "two-phase tracking bound and running-average identity"},
    {7, "oracle equivalence (grid) and gap perturbation"},
    {8, "baseline equivalences and fixed-set rate checks"},
    {9, "distributed consensus: stacked equivalence and residual rate"},
};

}  // namespace

int main(int argc, char** argv) {
    pdfw::harness::VerifyOptions opt;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") opt = pdfw::harness::VerifyOptions::quick();

    std::vector<pdfw::harness::Check> all;
    for (const auto& name : pdfw::harness::suite_names()) {
        std::fprintf(stderr, "running suite %s...\n", name.c_str());
        const auto rep = pdfw::harness::verify_suite(name, opt);
        for (auto c : rep.checks) {
            c.name = rep.suite + "/" + c.name;
            all.push_back(std::move(c));
        }
    }

    bool ok = true;
    for (const auto& [id, description] : kCriteria) {
        int n = 0, failed = 0;
        for (const auto& c : all)
            if (c.criterion == id) {
                ++n;
                if (!c.pass) ++failed;
            }
        const bool pass = n > 0 && failed == 0;
        ok = ok && pass;
        const std::string failed_note = failed ? ", " + std::to_string(failed) + " failed" : "";
        std::printf("[%s] criterion %d: %s (%d checks%s)\n", pass ? "PASS" : "FAIL", id,
                    description, n, failed_note.c_str());
        for (const auto& c : all)
            if (c.criterion == id && !c.pass)
                std::printf("        FAILED %s: measured=%.6g bound=%.6g %s\n", c.name.c_str(),
                            c.measured, c.bound, c.note.c_str());
    }
    int extra_failed = 0, extra = 0;
    for (const auto& c : all)
        if (c.criterion == 0) {
            ++extra;
            if (!c.pass) {
                ++extra_failed;
                std::printf("        FAILED (supporting) %s: measured=%.6g bound=%.6g\n",
                            c.name.c_str(), c.measured, c.bound);
            }
        }
    std::printf("supporting checks: %d/%d passed\n", extra - extra_failed, extra);
    ok = ok && extra_failed == 0;
    std::printf("%s\n", ok ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT");
    return ok ? 0 : 1;
}
