#include "mosqdyn/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mosqdyn {

namespace {

void require_quadrant(State s, const char* who) {
    if (!(s.x >= 0.0) || !(s.y >= 0.0)) {
        std::ostringstream os;
        os << who << ": state (" << s.x << ", " << s.y << ") is outside the closed positive quadrant";
        throw std::domain_error(os.str());
    }
}

} // namespace

std::string ValidationReport::message() const {
    std::string out;
    for (const auto& p : problems) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

ValidationReport validate_parameters(const Parameters& p, ValidationMode mode) {
    ValidationReport r;
    r.mode = mode;
    r.alpha_in_range = p.alpha > 0.0 && p.alpha <= 1.0;
    r.beta_positive = p.beta > 0.0;
    r.mu_in_range = p.mu > 0.0 && p.mu <= 1.0;
    r.d0_nonnegative = p.d0 >= 0.0;
    r.d1_nonnegative = p.d1 >= 0.0;
    r.d_terms_zero = p.d0 == 0.0 && p.d1 == 0.0;
    r.beta_ne_mu = p.beta != p.mu;

    const bool finite = std::isfinite(p.alpha) && std::isfinite(p.beta) && std::isfinite(p.mu) &&
                        std::isfinite(p.d0) && std::isfinite(p.d1);
    if (!finite) r.problems.emplace_back("parameters must be finite");

    if (mode == ValidationMode::general) {
        if (!(p.alpha > 0.0)) r.problems.emplace_back("alpha must be > 0");
        if (!(p.beta > 0.0)) r.problems.emplace_back("beta must be > 0");
        if (!(p.mu > 0.0)) r.problems.emplace_back("mu must be > 0");
    } else {
        if (!r.alpha_in_range) r.problems.emplace_back("alpha out of (0,1] (invariance condition 0<alpha<=1, beta>0, 0<mu<=1)");
        if (!r.beta_positive) r.problems.emplace_back("beta must be > 0 (invariance condition 0<alpha<=1, beta>0, 0<mu<=1)");
        if (!r.mu_in_range) r.problems.emplace_back("mu out of (0,1] (invariance condition 0<alpha<=1, beta>0, 0<mu<=1)");
    }
    if (!r.d0_nonnegative) r.problems.emplace_back("d0 must be >= 0");
    if (!r.d1_nonnegative) r.problems.emplace_back("d1 must be >= 0");

    if (mode == ValidationMode::w0) {
        if (!r.d_terms_zero) r.problems.emplace_back("W0 requires d0 = d1 = 0");
        if (!r.beta_ne_mu) r.problems.emplace_back("W0 requires beta != mu");
    }
    return r;
}

void require_valid(const Parameters& p, ValidationMode mode) {
    const auto report = validate_parameters(p, mode);
    if (!report.valid()) throw std::invalid_argument("invalid parameters: " + report.message());
}

State apply_W(const Parameters& p, State s) {
    require_quadrant(s, "apply_W");
    const double e = emergence(p.alpha, s.x);
    return {p.beta * s.y - e - (p.d0 + p.d1 * s.x) * s.x + s.x, e - p.mu * s.y + s.y};
}

State apply_W0(const Parameters& p, State s) {
    require_valid(p, ValidationMode::w0);
    require_quadrant(s, "apply_W0");
    return detail::step_w0(p, s);
}

Rate continuous_rhs(const Parameters& p, State s) {
    require_quadrant(s, "continuous_rhs");
    return detail::rhs(p, s);
}

} // namespace mosqdyn
