#pragma once

#include <string>
#include <vector>

namespace lfcov {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Named property suites runnable from the CLI: "energy", "geometry",
// "coverage", "e2e" or "all". Throws UnknownSuite.
std::vector<CheckResult> run_check_suite(const std::string& suite);

}  // namespace lfcov
