#include "mosqdyn/reference_ode.hpp"

#include "mosqdyn/errors.hpp"
#include "mosqdyn/io.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mosqdyn {

namespace {

State axpy(State s, double h, Rate k) { return {s.x + h * k.dx, s.y + h * k.dy}; }

State rk4_step(const Parameters& p, State s, double h) {
    const Rate k1 = detail::rhs(p, s);
    const Rate k2 = detail::rhs(p, axpy(s, 0.5 * h, k1));
    const Rate k3 = detail::rhs(p, axpy(s, 0.5 * h, k2));
    const Rate k4 = detail::rhs(p, axpy(s, h, k3));
    return {s.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
            s.y + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy)};
}

} // namespace

void OdeConfig::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("ODE step must be > 0");
    if (step > 1.0) throw std::invalid_argument("ODE step must be <= 1");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (step > t_end) throw std::invalid_argument("ODE step must not exceed t_end");
    if (!(conv_tol > 0.0)) throw std::invalid_argument("conv_tol must be > 0");
}

double compute_r0(const Parameters& p) {
    if (p.mu == 0.0) throw std::invalid_argument("compute_r0: mu = 0");
    if (p.alpha + p.d0 == 0.0) throw std::invalid_argument("compute_r0: alpha + d0 = 0");
    return p.alpha * p.beta / ((p.alpha + p.d0) * p.mu);
}

std::optional<State> positive_equilibrium(const Parameters& p) {
    require_valid(p, ValidationMode::general);
    if (!(p.d1 > 0.0)) throw std::invalid_argument("positive_equilibrium: closed form needs d1 > 0");
    const double r0 = compute_r0(p);
    if (!(r0 > 1.0)) return std::nullopt;

    const double s = p.d0 + p.d1;
    const double disc = s * s - 4.0 * p.d1 * (p.alpha + p.d0) * (1.0 - r0);
    const double x0 = (std::sqrt(disc) - s) / (2.0 * p.d1);
    const double y0 = p.alpha * x0 / (p.mu * (1.0 + x0));
    const State eq{x0, y0};

    const Rate f = detail::rhs(p, eq);
    if (!(std::max(std::abs(f.dx), std::abs(f.dy)) < 1e-9)) {
        std::ostringstream os;
        os.precision(17);
        os << "positive equilibrium residual too large: (" << f.dx << ", " << f.dy << ")";
        throw VerificationError(os.str());
    }
    return eq;
}

EquilibriumReport equilibrium_report(const Parameters& p) {
    EquilibriumReport rep;
    rep.r0 = compute_r0(p);
    rep.trivial_stable = rep.r0 <= 1.0;
    if (p.d1 > 0.0) rep.positive_equilibrium = positive_equilibrium(p);
    return rep;
}

std::optional<State> expected_ode_limit(const Parameters& p) {
    const auto rep = equilibrium_report(p);
    if (rep.trivial_stable) return State{0.0, 0.0};
    return rep.positive_equilibrium;
}

std::vector<TimedState> integrate_ode(const Parameters& p, State s0, const OdeConfig& cfg) {
    require_valid(p, ValidationMode::general);
    cfg.validate();
    if (!(s0.x >= 0.0) || !(s0.y >= 0.0) || !std::isfinite(s0.x) || !std::isfinite(s0.y)) {
        throw std::domain_error("integrate_ode: initial state outside the closed positive quadrant");
    }

    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.step - 1e-9));
    std::vector<TimedState> path;
    path.reserve(n_steps + 1);
    path.push_back({0.0, s0});

    State s = s0;
    for (std::size_t n = 1; n <= n_steps; ++n) {
        const double t_prev = static_cast<double>(n - 1) * cfg.step;
        const double t = n == n_steps ? cfg.t_end : static_cast<double>(n) * cfg.step;
        s = rk4_step(p, s, t - t_prev);
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || s.x < -0.5) {
            std::ostringstream os;
            os << "RK4 unstable at t=" << t << ": (" << s.x << ", " << s.y << ")";
            throw InstabilityError(os.str());
        }
        path.push_back({t, s});
    }
    return path;
}

void write_ode_csv(std::ostream& os, const std::vector<TimedState>& path) {
    os << "t,x,y\n";
    for (const auto& ts : path) {
        os << format_real(ts.t) << ',' << format_real(ts.s.x) << ',' << format_real(ts.s.y) << '\n';
    }
}

} // namespace mosqdyn
