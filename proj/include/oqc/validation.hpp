#pragma once

// Self-checks run by `oqc validate`: Monte Carlo agreement of the closed forms
// plus the identities, orderings and bounds they must satisfy.

#include <cstdint>
#include <string>
#include <vector>

namespace oqc::validation {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    /// Family-wise confidence for each Monte Carlo grid; the per-point level
    /// is Bonferroni-adjusted to the grid size.
    double confidence = 0.99;
    unsigned threads = 0;
};

std::vector<CheckResult> run_validation(const ValidationOptions& opt);

}  // namespace oqc::validation
