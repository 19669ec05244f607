#pragma once

#include "mosqdyn/model.hpp"
#include "mosqdyn/trajectory.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mosqdyn {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;

    /// steps points from lo to hi inclusive (just lo when steps == 1).
    /// Throws std::invalid_argument for steps < 1 or lo > hi.
    std::vector<double> values() const;
};

struct SweepSpec {
    Range alpha{0.6, 0.6, 1};
    Range beta{0.05, 1.0, 20};
    Range mu{0.05, 1.0, 20};
    double d0 = 0.0;
    double d1 = 0.0;
    State s0{1.0, 1.0};
    // Cells with |beta - mu| <= min_gap are treated as out of condition.
    double min_gap = 0.0;
    OrbitConfig orbit;
};

struct SweepCell {
    std::size_t index = 0;
    Parameters params;
    bool in_condition = false;
    std::string spectral_class; // empty when the spectral analysis does not apply
    std::string verdict;        // "skipped" for out-of-condition cells
    std::int64_t n_steps = 0;
    double y_limit_estimate = 0.0;
    bool agree = false; // meaningful for in-condition cells only
};

struct SweepResult {
    std::vector<SweepCell> cells; // ordered by index: alpha outermost, mu innermost
    std::size_t in_condition = 0;
    std::size_t agreeing = 0;
    std::size_t extinction = 0;
    std::size_t survival = 0;
    std::size_t exhausted = 0;

    bool all_agree() const { return agreeing == in_condition; }
};

/// Evaluates every cell (spectral class versus simulated verdict) on up to `threads`
/// workers; 0 uses the hardware concurrency. Output order does not depend on scheduling.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

} // namespace mosqdyn
