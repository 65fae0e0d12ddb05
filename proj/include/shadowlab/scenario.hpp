#pragma once

#include <string>

#include "shadowlab/params.hpp"

namespace shadowlab {

struct ScenarioConfig {
    Params params;
    std::string name;
    double d = 0.0;      // 0 = derive from eps
    double eps = 0.0;    // 0 = derive from params
    int budget = 1000;
    int trials = 1000;   // property-suite scenarios
    unsigned long long seed = 1;
    std::string out_dir = ".";
};

// Runs a named scenario, writes its JSON report and CSV traces under
// out_dir, and returns the process exit status (0 = all internal assertions
// passed, 1 = an assertion failed, 2 = usage error such as an unknown name).
int run_scenario(const ScenarioConfig& cfg);

} // namespace shadowlab
