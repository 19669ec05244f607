#include "mosqdyn/trajectory.hpp"

#include "mosqdyn/io.hpp"

#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mosqdyn {

namespace {

constexpr double kBoundSlack = 1e-12;

bool finite(State s) { return std::isfinite(s.x) && std::isfinite(s.y); }

double sum_identity_error(const Parameters& p, State prev, State cur) {
    const double lhs = cur.x + cur.y;
    const double rhs = (p.beta - p.mu) * prev.y + prev.x + prev.y;
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

void require_full_resolution(const Orbit& orbit, const char* who) {
    if (!orbit.full_resolution()) {
        throw std::invalid_argument(std::string(who) + " needs a full-resolution orbit (record_every = 1)");
    }
}

} // namespace

void OrbitConfig::validate() const {
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(conv_tol > 0.0)) throw std::invalid_argument("conv_tol must be > 0");
    if (!(div_threshold > 1.0)) throw std::invalid_argument("div_threshold must be > 1");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    if (max_recorded < 2) throw std::invalid_argument("max_recorded must be >= 2");
    if (survival_window < 1) throw std::invalid_argument("survival_window must be >= 1");
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::extinction: return "extinction";
    case Verdict::survival: return "survival";
    case Verdict::exhausted: return "exhausted";
    }
    return "unknown";
}

bool Orbit::full_resolution() const {
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i] != static_cast<std::int64_t>(i)) return false;
    }
    return true;
}

namespace detail {

void MonotonicityMonitor::observe(State prev, State cur) {
    const int sx = step_sign(prev.x, cur.x);
    const int sy = step_sign(prev.y, cur.y);
    const double dx = cur.x - prev.x;
    const double dy = cur.y - prev.y;

    if (sx == 0 || sy == 0) {
        ++summary_.with_tie;
    } else if (sx > 0 && sy > 0) {
        ++summary_.both_increasing;
    } else if (sx > 0) {
        ++summary_.x_up_y_down;
    } else if (sy > 0) {
        ++summary_.x_down_y_up;
    } else {
        ++summary_.both_decreasing;
    }

    if (sx < 0 && sy < 0) ++stmt1_;
    if (seen_joint_increase_ && (sx < 0 || sy < 0)) ++stmt2_;
    if (sx > 0 && sy > 0) seen_joint_increase_ = true;

    const bool down_up = sx < 0 && sy > 0;
    const bool up_down = sx > 0 && sy < 0;
    const bool last_down_up = last_sx_ < 0 && last_sy_ > 0;
    const bool last_up_down = last_sx_ > 0 && last_sy_ < 0;

    all_down_up_ = all_down_up_ && down_up;
    all_up_down_ = all_up_down_ && up_down;
    if (steps_ == 0) {
        all_alternating_ = down_up || up_down;
    } else {
        all_alternating_ = all_alternating_ && ((last_up_down && down_up) || (last_down_up && up_down));
        if (last_up_down && down_up) ++summary_.alternations;
        // Delta_m = dx should shrink and delta_m = -dy should grow along an (x up, y down) run.
        if (last_up_down && up_down && !(dx < last_dx_ && -dy > -last_dy_)) ++summary_.delta_trend_breaks;
    }

    last_sx_ = sx;
    last_sy_ = sy;
    last_dx_ = dx;
    last_dy_ = dy;
    ++steps_;

    summary_.persistent_x_down_y_up = steps_ >= 2 && all_down_up_;
    summary_.persistent_x_up_y_down = steps_ >= 2 && all_up_down_;
    summary_.persistent_alternation = steps_ >= 2 && all_alternating_;
}

std::int64_t MonotonicityMonitor::violations() const {
    return stmt1_ + stmt2_ + (summary_.persistent_x_down_y_up ? 1 : 0) +
           (summary_.persistent_x_up_y_down ? 1 : 0) + (summary_.persistent_alternation ? 1 : 0);
}

} // namespace detail

Orbit iterate_orbit(const Parameters& p, State s0, const OrbitConfig& cfg) {
    require_valid(p, ValidationMode::w0);
    cfg.validate();
    if (!(s0.x >= 0.0) || !(s0.y >= 0.0) || !finite(s0)) {
        throw std::domain_error("iterate_orbit: initial state outside the closed positive quadrant");
    }

    Orbit orbit;
    orbit.params = p;
    std::int64_t stride = cfg.record_every;

    auto record = [&](std::int64_t n, State s) {
        orbit.steps.push_back(n);
        orbit.states.push_back(s);
        if (orbit.states.size() <= cfg.max_recorded) return;
        stride *= 2;
        std::size_t kept = 0;
        for (std::size_t i = 0; i < orbit.states.size(); ++i) {
            if (orbit.steps[i] % stride != 0) continue;
            orbit.steps[kept] = orbit.steps[i];
            orbit.states[kept] = orbit.states[i];
            ++kept;
        }
        orbit.steps.resize(kept);
        orbit.states.resize(kept);
    };

    const double y_limit = p.alpha / p.mu;
    const bool beta_gt_mu = p.beta > p.mu;
    auto extinct = [&](State s) { return std::max(s.x, s.y) <= cfg.conv_tol; };

    detail::MonotonicityMonitor monotonicity;
    MonitorLog& log = orbit.monitors;
    double decay = 1.0; // (1 - mu)^n
    std::int64_t survival_run = 0;
    std::int64_t n = 0;
    std::int64_t until_record = stride;
    State s = s0;
    record(0, s);

    if (extinct(s)) {
        orbit.verdict = Verdict::extinction;
    } else {
        orbit.verdict = Verdict::exhausted;
        while (n < cfg.max_iters) {
            const State next = detail::step_w0(p, s);
            if (!finite(next)) break;
            ++n;

            // (1-mu) * denorm_min rounds back to denorm_min for mu < 1/2, so flush explicitly.
            decay = decay < 1e-300 ? 0.0 : decay * (1.0 - p.mu);
            const double bound = y_limit + decay * (s0.y - y_limit);
            if (next.y > bound + kBoundSlack || next.y < -kBoundSlack) ++log.y_bound_violations;
            {
                const double lhs = next.x + next.y;
                const double err = std::abs(lhs - ((p.beta - p.mu) * s.y + s.x + s.y));
                const double scale = std::max(1.0, std::abs(lhs));
                if (err > log.sum_identity_max_err * scale) log.sum_identity_max_err = err / scale;
            }
            monotonicity.observe(s, next);
            if (detail::step_sign(s.x, next.x) < 0 || detail::step_sign(s.y, next.y) < 0) log.n0_estimate = n;

            s = next;
            if (--until_record == 0) {
                record(n, s);
                until_record = stride - n % stride;
            }

            if (extinct(s)) {
                orbit.verdict = Verdict::extinction;
                break;
            }
            if (s.x > cfg.div_threshold && std::abs(s.y - y_limit) < cfg.conv_tol) {
                if (++survival_run >= cfg.survival_window) {
                    orbit.verdict = Verdict::survival;
                    break;
                }
            } else {
                survival_run = 0;
            }
        }
    }

    if (orbit.steps.back() != n) {
        orbit.steps.push_back(n);
        orbit.states.push_back(s);
    }
    orbit.n_steps = n;
    orbit.final_state = s;
    orbit.y_limit_estimate = s.y;
    if (beta_gt_mu) log.lemma2_violations = monotonicity.violations();
    log.delta_sequence = monotonicity.summary();
    return orbit;
}

std::int64_t check_y_bound(const Parameters& p, const Orbit& orbit) {
    if (orbit.states.empty()) return 0;
    if (orbit.steps.front() != 0) throw std::invalid_argument("check_y_bound needs the initial state");
    const double y_limit = p.alpha / p.mu;
    const double y0 = orbit.states.front().y;
    std::int64_t violations = 0;
    for (std::size_t i = 0; i < orbit.states.size(); ++i) {
        const double decay = std::pow(1.0 - p.mu, static_cast<double>(orbit.steps[i]));
        const double bound = y_limit + decay * (y0 - y_limit);
        const double y = orbit.states[i].y;
        if (y > bound + kBoundSlack || y < -kBoundSlack) ++violations;
    }
    return violations;
}

double check_sum_identity(const Parameters& p, const Orbit& orbit) {
    require_full_resolution(orbit, "check_sum_identity");
    double worst = 0.0;
    for (std::size_t i = 1; i < orbit.states.size(); ++i) {
        worst = std::max(worst, sum_identity_error(p, orbit.states[i - 1], orbit.states[i]));
    }
    return worst;
}

std::int64_t check_lemma2_patterns(const Orbit& orbit, bool beta_gt_mu) {
    if (!beta_gt_mu) throw std::invalid_argument("check_lemma2_patterns applies to beta > mu only");
    require_full_resolution(orbit, "check_lemma2_patterns");
    detail::MonotonicityMonitor monitor;
    for (std::size_t i = 1; i < orbit.states.size(); ++i) monitor.observe(orbit.states[i - 1], orbit.states[i]);
    return monitor.violations();
}

bool check_growth_lower_bound(const Parameters& p, const Orbit& orbit, std::int64_t n0) {
    if (!(p.beta > p.mu)) throw std::invalid_argument("check_growth_lower_bound needs beta > mu");
    if (orbit.states.empty() || orbit.steps.front() != 0) {
        throw std::invalid_argument("check_growth_lower_bound needs the initial state");
    }
    std::size_t k = 0;
    while (k < orbit.steps.size() && orbit.steps[k] < n0) ++k;
    if (k == orbit.steps.size()) throw std::invalid_argument("n0 lies beyond the recorded orbit");
    const State base = orbit.states[k];
    if (!(base.y > 0.0)) throw std::invalid_argument("check_growth_lower_bound needs y at n0 to be > 0");

    const double theta = std::max(orbit.states.front().y, p.alpha / p.mu);
    const std::int64_t start = orbit.steps[k];
    for (std::size_t i = k + 1; i < orbit.states.size(); ++i) {
        const auto elapsed = static_cast<double>(orbit.steps[i] - start);
        const double lower = base.x + base.y - theta + (p.beta - p.mu) * elapsed * base.y;
        if (!(orbit.states[i].x > lower)) return false;
    }
    return true;
}

bool check_contraction_combos(const Parameters& p, const Orbit& orbit) {
    if (!(p.beta < p.mu)) throw std::invalid_argument("check_contraction_combos needs beta < mu");
    const double k = p.mu / p.beta;
    for (std::size_t i = 0; i < orbit.states.size(); ++i) {
        const State s = orbit.states[i];
        const double c = s.x + s.y;
        const double c0 = k * s.x + s.y;
        if (c < 0.0 || c0 < 0.0) return false;
        if (i == 0) continue;
        const State prev = orbit.states[i - 1];
        if (detail::step_sign(prev.x + prev.y, c) > 0) return false;
        if (detail::step_sign(k * prev.x + prev.y, c0) > 0) return false;
    }
    return true;
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
    os << "n,x,y\n";
    for (std::size_t i = 0; i < orbit.states.size(); ++i) {
        os << orbit.steps[i] << ',' << format_real(orbit.states[i].x) << ',' << format_real(orbit.states[i].y)
           << '\n';
    }
}

std::vector<std::pair<std::int64_t, State>> read_orbit_csv(std::istream& is) {
    std::vector<std::pair<std::int64_t, State>> rows;
    std::string line;
    if (!std::getline(is, line) || line != "n,x,y") throw std::runtime_error("orbit CSV: missing header n,x,y");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::runtime_error("orbit CSV: malformed row '" + line + "'");
        }
        const std::int64_t n = std::stoll(line.substr(0, c1));
        const double x = std::strtod(line.c_str() + c1 + 1, nullptr);
        const double y = std::strtod(line.c_str() + c2 + 1, nullptr);
        rows.emplace_back(n, State{x, y});
    }
    return rows;
}

} // namespace mosqdyn
