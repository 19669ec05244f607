#pragma once

#include "mosqdyn/model.hpp"
#include "mosqdyn/trajectory.hpp"

#include <string>
#include <vector>

namespace mosqdyn {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CertifyOptions {
    int p_max = 8;
    int t_grid = 10'000;
    int two_cycle_grid = 500;     // cells per side over [0, 5]^2
    int identity_steps = 1000;    // length of the full-resolution orbit for the algebraic checks
    OrbitConfig orbit;            // long run for the extinction/survival verdict
};

/// Runs every invariant check for one W0-valid parameter set and initial state.
/// Exceptions raised by individual checks are reported as failures, not propagated.
std::vector<CheckResult> certify(const Parameters& p, State s0, const CertifyOptions& opts = {});

inline bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        if (!r.passed) return false;
    }
    return true;
}

} // namespace mosqdyn
