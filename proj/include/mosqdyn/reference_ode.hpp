#pragma once

#include "mosqdyn/model.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace mosqdyn {

struct OdeConfig {
    double step = 0.01;
    double t_end = 500.0;
    double conv_tol = 1e-6;

    void validate() const;
};

struct TimedState {
    double t = 0.0;
    State s;
};

struct EquilibriumReport {
    double r0 = 0.0;
    bool trivial_stable = false;               // r0 <= 1
    std::optional<State> positive_equilibrium; // present iff r0 > 1 and d1 > 0
};

/// Basic offspring number alpha beta / ((alpha + d0) mu).
double compute_r0(const Parameters& p);

/// Closed-form positive equilibrium (x0, y0) when r0 > 1, empty otherwise.
/// Requires d1 > 0; throws VerificationError if the continuous residual there exceeds 1e-9.
std::optional<State> positive_equilibrium(const Parameters& p);

EquilibriumReport equilibrium_report(const Parameters& p);

/// Where the continuous trajectory should settle: the origin for r0 <= 1, (x0, y0) for
/// r0 > 1 with d1 > 0, and nothing when the closed form does not apply.
std::optional<State> expected_ode_limit(const Parameters& p);

/// Classic fixed-step RK4 for the continuous model, returning (t, state) at every step
/// from t = 0 to t_end. Throws InstabilityError if x < -0.5 or a value is non-finite.
std::vector<TimedState> integrate_ode(const Parameters& p, State s0, const OdeConfig& cfg = {});

void write_ode_csv(std::ostream& os, const std::vector<TimedState>& path);

} // namespace mosqdyn
