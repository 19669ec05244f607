#pragma once

#include <string>
#include <vector>

namespace mosqdyn {

// Model constants of the larvae/adult system.
//   alpha : maximum emergence rate (larvae -> adults)
//   beta  : oviposition (birth) rate of adults
//   mu    : adult death rate
//   d0,d1 : density independent / dependent larvae death
struct Parameters {
    double alpha = 0.0;
    double beta = 0.0;
    double mu = 0.0;
    double d0 = 0.0;
    double d1 = 0.0;

    /// d0 = d1 = 0 and beta != mu: the operator reduces to W0.
    bool is_case_w0() const { return d0 == 0.0 && d1 == 0.0 && beta != mu; }
};

/// Larvae (x) and adult (y) abundances; the closed positive quadrant is the domain.
struct State {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const State&, const State&) = default;
};

/// Time derivative of the continuous model at a state.
struct Rate {
    double dx = 0.0;
    double dy = 0.0;
};

enum class ValidationMode { general, w0 };

struct ValidationReport {
    ValidationMode mode = ValidationMode::general;

    // Condition 0 < alpha <= 1, beta > 0, 0 < mu <= 1 (forward invariance of the quadrant).
    bool alpha_in_range = false;
    bool beta_positive = false;
    bool mu_in_range = false;
    // Sign constraints of the general operator.
    bool d0_nonnegative = false;
    bool d1_nonnegative = false;
    // W0 reduction: d0 = d1 = 0 and beta != mu.
    bool d_terms_zero = false;
    bool beta_ne_mu = false;

    std::vector<std::string> problems;

    bool invariance_condition() const { return alpha_in_range && beta_positive && mu_in_range; }
    bool valid() const { return problems.empty(); }
    std::string message() const;
};

ValidationReport validate_parameters(const Parameters& p, ValidationMode mode);

/// Throws std::invalid_argument carrying the report message when the parameters
/// do not pass validation in the given mode.
void require_valid(const Parameters& p, ValidationMode mode);

/// alpha * x / (1 + x), evaluated so that huge x saturates at alpha.
inline double emergence(double alpha, double x) { return alpha * (x / (1.0 + x)); }

/// One step of the general operator W. Throws std::domain_error outside the quadrant.
State apply_W(const Parameters& p, State s);

/// One step of W0 (d0 = d1 = 0). Throws std::invalid_argument if p is not W0-valid.
State apply_W0(const Parameters& p, State s);

/// Right-hand side of the continuous-time system. Throws std::domain_error for x < 0 or y < 0.
Rate continuous_rhs(const Parameters& p, State s);

namespace detail {

// Unchecked kernels for hot loops; callers guarantee the preconditions.
inline State step_w0(const Parameters& p, State s) {
    const double e = emergence(p.alpha, s.x);
    return {p.beta * s.y - e + s.x, e - p.mu * s.y + s.y};
}

inline Rate rhs(const Parameters& p, State s) {
    const double e = emergence(p.alpha, s.x);
    return {p.beta * s.y - e - (p.d0 + p.d1 * s.x) * s.x, e - p.mu * s.y};
}

} // namespace detail

} // namespace mosqdyn
