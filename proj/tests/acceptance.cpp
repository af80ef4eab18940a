// Acceptance run: one PASS/FAIL line per criterion, sub-checks indented below.
//
//   acceptance                 exit 0 iff every check passes
//   acceptance --expect-known  exit 0 iff the failing checks are exactly the known discrepancies below

#include <cstring>
#include <iostream>
#include <set>
#include <string>

#include "grotto/verify.hpp"

using namespace grotto;

namespace {

// Checks that fail against the printed reference values. The computed u4 first column agrees
// with finite-field point counts at p = 2, 3 (see test_tqft); the printed vector differs from it
// in seven entries by multiples of (q-2)^2, which propagates to the reduced matrix and to the
// u4 closed form and its expansions. The printed u3 closed form disagrees with the printed
// u3 matrix, its diagonalization and its own expansions.
const std::set<std::string> kKnown = {
    "3.column", "4.row-t1", "4.full", "5.u3.closed", "5.u4.closed", "5.u4.expansion",
};

}  // namespace

int main(int argc, char** argv) {
    bool expect_known = false;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--expect-known")) {
            expect_known = true;
        } else {
            std::cerr << "usage: acceptance [--expect-known]\n";
            return 2;
        }
    }

    VerifyOptions opt;
    opt.full = true;
    std::set<std::string> failed;
    int criteria = 0, passed = 0;
    run_verification(opt, [&](const CheckResult& r) {
        std::cout << format_result(r) << std::flush;
        if (r.criterion > 0) {
            ++criteria;
            if (r.pass()) ++passed;
        }
        for (const auto& s : r.subs)
            if (!s.pass) failed.insert(s.id);
    });

    std::cout << "\n" << passed << " of " << criteria << " criteria pass\n";
    if (!expect_known) return failed.empty() ? 0 : 1;

    bool ok = true;
    for (const auto& id : failed)
        if (!kKnown.count(id)) {
            std::cout << "unexpected failure: " << id << '\n';
            ok = false;
        }
    for (const auto& id : kKnown)
        if (!failed.count(id)) {
            std::cout << "known discrepancy no longer reproduces: " << id << '\n';
            ok = false;
        }
    std::cout << (ok ? "failures match the known discrepancy list" : "failure set changed") << '\n';
    return ok ? 0 : 1;
}
