#pragma once

#include "mosqdyn/model.hpp"

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

namespace mosqdyn {

struct OrbitConfig {
    std::int64_t max_iters = 2'000'000'000;
    double conv_tol = 1e-6;      // radius around (0,0) and around alpha/mu for y
    double div_threshold = 1e3;  // x above this counts as escaped
    std::int64_t record_every = 1;
    // Once more states than this would be stored, the stride doubles and the
    // stored sequence is thinned; monitors always see every step.
    std::size_t max_recorded = 1'000'000;
    // Consecutive steps that must satisfy the survival test before the verdict.
    std::int64_t survival_window = 100;

    void validate() const;
};

enum class Verdict { extinction, survival, exhausted };

std::string_view to_string(Verdict v);

// Sign bookkeeping of the step differences Delta_m = x_{m+1} - x_m and
// y_{m+1} - y_m (delta_m is its negation).
struct DeltaSummary {
    std::int64_t both_increasing = 0;
    std::int64_t x_up_y_down = 0;
    std::int64_t x_down_y_up = 0;
    std::int64_t both_decreasing = 0;
    std::int64_t with_tie = 0;
    // x up/y down immediately followed by x down/y up (transient alternation).
    std::int64_t alternations = 0;
    // Inside runs of x up/y down: Delta did not decrease or delta did not increase.
    std::int64_t delta_trend_breaks = 0;
    // Whether one pattern held on every scanned step (needs two or more steps).
    bool persistent_x_down_y_up = false;
    bool persistent_x_up_y_down = false;
    bool persistent_alternation = false;
};

struct MonitorLog {
    std::int64_t y_bound_violations = 0;
    std::int64_t lemma2_violations = 0;
    double sum_identity_max_err = 0.0;
    // First index after which neither coordinate decreases again.
    std::int64_t n0_estimate = 0;
    DeltaSummary delta_sequence;
};

struct Orbit {
    Parameters params;
    std::vector<std::int64_t> steps; // iteration index of each stored state
    std::vector<State> states;
    Verdict verdict = Verdict::exhausted;
    std::int64_t n_steps = 0;
    double y_limit_estimate = 0.0;
    State final_state;
    MonitorLog monitors;

    bool full_resolution() const;
};

/// Iterates W0 from s0 until extinction, survival or cfg.max_iters.
/// Requires W0-valid parameters and a state in the quadrant.
Orbit iterate_orbit(const Parameters& p, State s0, const OrbitConfig& cfg = {});

/// Number of stored states violating 0 <= y_n <= alpha/mu + (1-mu)^n (y_0 - alpha/mu).
std::int64_t check_y_bound(const Parameters& p, const Orbit& orbit);

/// Max over n of |(x_n + y_n) - ((beta - mu) y_{n-1} + x_{n-1} + y_{n-1})|, scaled by
/// max(1, x_n + y_n). Requires a full-resolution orbit.
double check_sum_identity(const Parameters& p, const Orbit& orbit);

/// Violations of the monotonicity statements for beta > mu: steps with both
/// coordinates decreasing, decreases after the first joint increase, and one flag each
/// if (x down, y up), (x up, y down) or their alternation held on every step.
std::int64_t check_lemma2_patterns(const Orbit& orbit, bool beta_gt_mu);

/// Checks x_n > x_{n0} + y_{n0} - theta + (beta - mu)(n - n0) y_{n0} for every stored n > n0,
/// theta = max(y_0, alpha/mu). Requires beta > mu and y_{n0} > 0.
bool check_growth_lower_bound(const Parameters& p, const Orbit& orbit, std::int64_t n0);

/// For beta < mu and k = mu/beta: x + y and k x + y are nonnegative and nonincreasing.
bool check_contraction_combos(const Parameters& p, const Orbit& orbit);

/// CSV with header "n,x,y" and 17 significant digits per value.
void write_orbit_csv(std::ostream& os, const Orbit& orbit);

std::vector<std::pair<std::int64_t, State>> read_orbit_csv(std::istream& is);

namespace detail {

// Monotonicity comparisons use an absolute 1e-14 band scaled by the magnitude
// of the values, ties count as nondecreasing.
inline int step_sign(double from, double to) {
    const double scale = std::max(1.0, std::max(from < 0 ? -from : from, to < 0 ? -to : to));
    const double d = to - from;
    if (d > 1e-14 * scale) return 1;
    if (d < -1e-14 * scale) return -1;
    return 0;
}

class MonotonicityMonitor {
public:
    void observe(State prev, State cur);

    std::int64_t violations() const;
    std::int64_t steps() const { return steps_; }
    std::int64_t both_decreasing_violations() const { return stmt1_; }
    std::int64_t continuation_violations() const { return stmt2_; }
    const DeltaSummary& summary() const { return summary_; }

private:
    DeltaSummary summary_;
    std::int64_t steps_ = 0;
    std::int64_t stmt1_ = 0;
    std::int64_t stmt2_ = 0;
    bool seen_joint_increase_ = false;
    bool all_down_up_ = true;
    bool all_up_down_ = true;
    bool all_alternating_ = true;
    int last_sx_ = 0, last_sy_ = 0;
    double last_dx_ = 0.0, last_dy_ = 0.0;
};

} // namespace detail

} // namespace mosqdyn
