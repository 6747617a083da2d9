#pragma once

#include <string>
#include <vector>

#include "bellpol/estimation.hpp"

namespace bellpol {

struct VerifySuiteResult {
    std::string name;
    int checked = 0;
    int failures = 0;
    std::string first_failure;  // inputs of the first failing case
};

struct VerifyOptions {
    // Test fixture: offset added to the closed-form S before comparison, to
    // prove the harness catches a broken oracle.
    double perturb_closed_form = 0.0;
};

// Oracle equivalence suites: closed-form vs numeric S_max (50 phases),
// scheme end-to-end compensation (100 random draws), and closed-form vs
// matrix-projection probabilities (1000 random triples). Deterministic.
std::vector<VerifySuiteResult> run_verify_suites(const VerifyOptions& opt = {});

bool all_passed(const std::vector<VerifySuiteResult>& results);

// One summary line per suite, LF-terminated.
std::string format_verify_report(const std::vector<VerifySuiteResult>& results);

}  // namespace bellpol
