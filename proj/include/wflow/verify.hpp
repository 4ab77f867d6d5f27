#pragma once

#include <string>
#include <vector>

namespace wflow {

/// One acceptance criterion: pass/fail verdict plus a log of any failing
/// sub-checks.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    int checks = 0;
    int failures = 0;
    double seconds = 0.0;
    std::string detail;  // one line per failing sub-check
};

enum class VerifyLevel { Fast, Full };

/// Run the acceptance suite.  Fast covers the sub-second criteria
/// (references, equilibria, transversality, certificates); Full adds the
/// sweep, dichotomy, conservation, tail and consistency experiments.
std::vector<CriterionResult> run_verification(VerifyLevel level);

/// Render one result as a fixed-width report line.  Timing is variable
/// across runs, so callers that need reproducible output disable it.
std::string format_criterion_line(const CriterionResult& r, bool with_seconds = true);

}  // namespace wflow
