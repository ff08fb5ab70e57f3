#pragma once

#include <string>
#include <vector>

#include "izeno/config.hpp"

namespace izeno {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    double value = 0.0;      // measured quantity, NaN when the check threw
    double threshold = 0.0;  // bound it is compared against
    std::string detail;
    double seconds = 0.0;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    std::size_t failures() const;
    std::string csv(const RunConfig& config) const;
};

// Runs every module's invariant battery; a throwing check is recorded as a failure and the rest still run.
ValidationReport cmd_validate(const RunConfig& config);

}  // namespace izeno
