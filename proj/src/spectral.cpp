#include "mosqdyn/spectral.hpp"

#include "mosqdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mosqdyn {

namespace {

void require_spectral_domain(const Parameters& p) {
    const auto r = validate_parameters(p, ValidationMode::general);
    if (!r.valid() || !r.invariance_condition() || !r.d_terms_zero) {
        throw std::invalid_argument(
            "spectral analysis needs d0 = d1 = 0 and 0 < alpha <= 1, beta > 0, 0 < mu <= 1");
    }
}

double discriminant(const Parameters& p) {
    const double diff = p.alpha - p.mu;
    return diff * diff + 4.0 * p.alpha * p.beta;
}

double residual_norm(const Parameters& p, State s) {
    const Rate f = detail::rhs(p, s);
    return std::max(std::abs(f.dx), std::abs(f.dy));
}

// Damped Newton on F(s) = W0(s) - s, kept inside the quadrant.
State newton_refine(const Parameters& p, State s, int max_iter = 60) {
    double r = residual_norm(p, s);
    for (int it = 0; it < max_iter && r > 0.0; ++it) {
        const Rate f = detail::rhs(p, s);
        const double q = 1.0 / ((1.0 + s.x) * (1.0 + s.x));
        // J_F = [[-alpha q, beta], [alpha q, -mu]]
        const double a = -p.alpha * q, b = p.beta, c = p.alpha * q, d = -p.mu;
        const double det = a * d - b * c;
        if (det == 0.0) break;
        const double sx = (d * f.dx - b * f.dy) / det;
        const double sy = (-c * f.dx + a * f.dy) / det;

        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 40; ++k, lambda *= 0.5) {
            const State trial{std::max(0.0, s.x - lambda * sx), std::max(0.0, s.y - lambda * sy)};
            const double rt = residual_norm(p, trial);
            if (rt < r) {
                s = trial;
                r = rt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return s;
}

} // namespace

std::string_view to_string(FixedPointType t) {
    switch (t) {
    case FixedPointType::attracting: return "attracting";
    case FixedPointType::repelling: return "repelling";
    case FixedPointType::saddle: return "saddle";
    case FixedPointType::nonhyperbolic: return "nonhyperbolic";
    }
    return "unknown";
}

std::vector<State> find_fixed_points_w0(const Parameters& p, const FixedPointScan& scan) {
    require_spectral_domain(p);
    if (!(scan.step > 0.0) || !(scan.x_max > 0.0) || !(scan.y_max > 0.0)) {
        throw std::invalid_argument("fixed point scan needs positive extent and step");
    }

    const State origin{0.0, 0.0};
    if (residual_norm(p, origin) != 0.0) throw VerificationError("origin is not a fixed point");

    const auto nx = static_cast<std::size_t>(std::llround(scan.x_max / scan.step)) + 1;
    const auto ny = static_cast<std::size_t>(std::llround(scan.y_max / scan.step)) + 1;
    std::vector<double> res(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            res[i * ny + j] = residual_norm(p, {static_cast<double>(i) * scan.step,
                                                static_cast<double>(j) * scan.step});
        }
    }

    // A zero inside a cell leaves a grid residual of at most L * step for the
    // Lipschitz constant L of F in the sup norm.
    const double threshold = 2.0 * (p.alpha + p.beta + p.mu) * scan.step;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double r = res[i * ny + j];
            if (r > threshold) continue;
            bool local_min = true;
            for (int di = -1; di <= 1 && local_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                    const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                    if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(nx) ||
                        jj >= static_cast<std::ptrdiff_t>(ny)) {
                        continue;
                    }
                    if (res[static_cast<std::size_t>(ii) * ny + static_cast<std::size_t>(jj)] < r) {
                        local_min = false;
                        break;
                    }
                }
            }
            if (!local_min) continue;

            const State refined = newton_refine(
                p, {static_cast<double>(i) * scan.step, static_cast<double>(j) * scan.step});
            if (residual_norm(p, refined) < scan.residual_tol && std::max(refined.x, refined.y) > 1e-8) {
                std::ostringstream os;
                os.precision(17);
                os << "second fixed point of W0 at (" << refined.x << ", " << refined.y << ")";
                throw VerificationError(os.str());
            }
        }
    }
    return {origin};
}

Matrix2 jacobian_at_origin(const Parameters& p) {
    require_spectral_domain(p);
    return {{{1.0 - p.alpha, p.beta}, {p.alpha, 1.0 - p.mu}}};
}

std::pair<double, double> eigenvalues(const Parameters& p) {
    require_spectral_domain(p);
    const double root = std::sqrt(discriminant(p));
    const double base = 2.0 - p.alpha - p.mu;
    return {0.5 * (base + root), 0.5 * (base - root)};
}

SpectralReport classify_origin(const Parameters& p, double tol) {
    SpectralReport rep;
    rep.jacobian = jacobian_at_origin(p);
    std::tie(rep.lambda1, rep.lambda2) = eigenvalues(p);

    const double m1 = std::abs(rep.lambda1), m2 = std::abs(rep.lambda2);
    if (std::abs(m1 - 1.0) <= tol || std::abs(m2 - 1.0) <= tol) {
        rep.classification = FixedPointType::nonhyperbolic;
    } else {
        const int outside = (m1 > 1.0 ? 1 : 0) + (m2 > 1.0 ? 1 : 0);
        rep.classification = outside == 0   ? FixedPointType::attracting
                             : outside == 1 ? FixedPointType::saddle
                                            : FixedPointType::repelling;
    }
    return rep;
}

StabilityInequalities stability_inequalities(const Parameters& p) {
    require_spectral_domain(p);
    const double root = std::sqrt(discriminant(p));
    const double s = p.alpha + p.mu;
    return {s + root < 4.0, 0.0 < s - root && s - root < 4.0};
}

FixedPointType expected_origin_type(const Parameters& p) {
    if (p.beta < p.mu) return FixedPointType::attracting;
    if (p.beta > p.mu) return FixedPointType::saddle;
    return FixedPointType::nonhyperbolic;
}

} // namespace mosqdyn
