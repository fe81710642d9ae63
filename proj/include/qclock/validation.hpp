// Cross-validation suite tying the modules together: root residuals,
// ODE residuals of the closed forms, equivalence against the numeric
// integrators, limit consistencies, regime/boundary coherence, and the
// spectrum properties.  Used by the `validate` CLI command and the tests.

#pragma once

#include <span>
#include <string>
#include <vector>

namespace qclock::validation {

struct Options {
    bool quick = false;  // reduced draw counts and horizons (seconds, not minutes)
    // Fault-injection hook for the mutation smoke test: flips the sign of
    // the special-solution constant before evaluating the closed form in
    // the oracle-equivalence check, which must then fail.
    bool inject_f0_sign_flip = false;
    unsigned seed = 20250811;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<CheckResult> run_all(const Options& opts);

bool all_passed(std::span<const CheckResult> results);

}  // namespace qclock::validation
