#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "grotto/tqft.hpp"
#include "grotto/variety.hpp"

namespace grotto {

struct SubCheck {
    std::string id;  // e.g. "5.u3.closed"
    bool pass = false;
    std::string detail;
};

struct CheckResult {
    int criterion = 0;
    std::string title;
    bool skipped = false;
    double seconds = 0;
    std::vector<SubCheck> subs;

    bool pass() const;
};

struct VerifyOptions {
    // Full sweep: the u4 pipeline and all 256 printed reduced-matrix entries.
    bool full = true;
    TqftOptions tqft;
    std::string golden_dir;  // empty: the directory baked in at build time
    // Replaces one u3 stratum class before the load-time strata check.
    bool corrupt_eta_u3 = false;
};

std::string default_golden_dir();

// Runs criteria 1-9 in order; on_result (if set) sees each result as soon as it is done.
std::vector<CheckResult> run_verification(const VerifyOptions& opt,
                                          const std::function<void(const CheckResult&)>& on_result = {});

std::string format_result(const CheckResult& r);

// Random constraint variety over x0..x{n-1}, n <= max_vars, degree <= 3.
MultiPoly random_poly(std::mt19937_64& rng, const std::vector<Variable>& vars, unsigned max_deg);
ConstraintVariety random_variety(std::mt19937_64& rng, unsigned max_vars);

}  // namespace grotto
