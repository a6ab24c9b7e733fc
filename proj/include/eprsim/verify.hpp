#pragma once

#include <string>
#include <vector>

namespace eprsim {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Quantitative cross-checks of the simulator against the closed-form
// expectations for the conditional output states, the threshold formulas
// and the fusion gate. Used by both the CLI and the acceptance suite.
std::vector<CheckResult> verify_eq4();
std::vector<CheckResult> verify_eq7();
std::vector<CheckResult> verify_thresholds();
std::vector<CheckResult> verify_fusion();

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace eprsim
