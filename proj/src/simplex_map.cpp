#include "mosqdyn/simplex_map.hpp"

#include "mosqdyn/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mosqdyn {

namespace {

constexpr double kBisectionTol = 1e-12;
constexpr double kFixedRootTol = 1e-10;

double t_map(const Parameters& p, double x) {
    const double num = (1.0 - p.beta) * x * x + (1.0 - p.alpha) * x + p.beta;
    const double den = (p.mu - p.beta) * x * x + x + p.beta - p.mu + 1.0;
    return num / den;
}

double t_iterate(const Parameters& p, double x, int q) {
    for (int i = 0; i < q; ++i) x = t_map(p, x);
    return x;
}

double bisect(const Parameters& p, int q, double lo, double hi, double glo) {
    while (hi - lo > kBisectionTol) {
        const double mid = 0.5 * (lo + hi);
        const double gm = t_iterate(p, mid, q) - mid;
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

State w0_twice(const Parameters& p, State s) { return detail::step_w0(p, detail::step_w0(p, s)); }

double two_cycle_residual(const Parameters& p, State s) {
    const State t = w0_twice(p, s);
    return std::max(std::abs(t.x - s.x), std::abs(t.y - s.y));
}

// Damped Newton on G(s) = W0(W0(s)) - s with a central-difference Jacobian,
// clamped to the quadrant.
State refine_two_cycle(const Parameters& p, State s) {
    double r = two_cycle_residual(p, s);
    for (int it = 0; it < 60 && r > 0.0; ++it) {
        const State g0 = w0_twice(p, s);
        const double gx = g0.x - s.x, gy = g0.y - s.y;
        const double hx = 1e-7 * std::max(1.0, s.x), hy = 1e-7 * std::max(1.0, s.y);
        auto G = [&](State q) {
            const State t = w0_twice(p, q);
            return State{t.x - q.x, t.y - q.y};
        };
        const State xp = G({s.x + hx, s.y}), xm = G({std::max(0.0, s.x - hx), s.y});
        const State yp = G({s.x, s.y + hy}), ym = G({s.x, std::max(0.0, s.y - hy)});
        const double wx = s.x + hx - std::max(0.0, s.x - hx);
        const double wy = s.y + hy - std::max(0.0, s.y - hy);
        const double a = (xp.x - xm.x) / wx, c = (xp.y - xm.y) / wx;
        const double b = (yp.x - ym.x) / wy, d = (yp.y - ym.y) / wy;
        const double det = a * d - b * c;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double sx = (d * gx - b * gy) / det;
        const double sy = (-c * gx + a * gy) / det;

        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 40; ++k, lambda *= 0.5) {
            const State trial{std::max(0.0, s.x - lambda * sx), std::max(0.0, s.y - lambda * sy)};
            const double rt = two_cycle_residual(p, trial);
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

std::string list_roots(const std::vector<double>& roots) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < roots.size(); ++i) os << (i ? ", " : "") << roots[i];
    return os.str();
}

} // namespace

State apply_U(const Parameters& p, State s) {
    require_valid(p, ValidationMode::w0);
    if (std::abs(s.x + s.y - 1.0) > 1e-12 || s.x < 0.0 || s.y < 0.0) {
        throw std::domain_error("apply_U: state is not on the simplex x + y = 1, x, y >= 0");
    }
    const double den = (1.0 + s.x) * (s.x + (p.beta - p.mu + 1.0) * s.y);
    if (!(den > 0.0)) throw std::domain_error("apply_U: non-positive denominator");
    const double xn = (1.0 + s.x) * (s.x + p.beta * s.y) - p.alpha * s.x;
    const double yn = p.alpha * s.x + (1.0 + s.x) * (1.0 - p.mu) * s.y;
    return {xn / den, yn / den};
}

double apply_T(const Parameters& p, double x) {
    require_valid(p, ValidationMode::w0);
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("apply_T: x outside [0, 1]");
    return t_map(p, x);
}

double t_numerator(const Parameters& p, double x) {
    return (1.0 - p.beta) * x * x + (1.0 - p.alpha) * x + p.beta;
}

double t_denominator(const Parameters& p, double x) {
    return (p.mu - p.beta) * x * x + x + p.beta - p.mu + 1.0;
}

double t_gap(const Parameters& p, double x) { return (p.mu - 1.0) * x * x + p.alpha * x + 1.0 - p.mu; }

bool check_T_range(const Parameters& p, int grid_n) {
    require_valid(p, ValidationMode::w0);
    if (grid_n < 2) throw std::invalid_argument("check_T_range: grid_n must be >= 2");

    bool ok = true;
    for (int i = 0; i <= grid_n && ok; ++i) {
        const double x = static_cast<double>(i) / grid_n;
        const double a = t_numerator(p, x);
        const double b = t_denominator(p, x);
        const double h = t_gap(p, x);
        const double t = a / b;
        ok = a >= 0.0 && b > 0.0 && h >= 0.0 && t >= 0.0 && t <= 1.0;
    }
    const double h0 = t_denominator(p, 0.0) - t_numerator(p, 0.0);
    const double h1 = t_denominator(p, 1.0) - t_numerator(p, 1.0);
    ok = ok && std::abs(h0 - (1.0 - p.mu)) <= 1e-14 && std::abs(h1 - p.alpha) <= 1e-14;
    return ok;
}

PeriodCertificate two_periodic_certificate(const Parameters& p) {
    require_valid(p, ValidationMode::w0);
    const double a = p.alpha, b = p.beta, m = p.mu;
    PeriodCertificate cert;
    cert.A = (1.0 - b) * (b - 2.0) + (b - m + 1.0) * (b - m);
    cert.B = (b - 2.0) * (b - m - a + 2.0) - b * (b - m);
    cert.C = (b - m + 1.0) * (a + m - b - 2.0) + b * (b - 1.0);
    cert.signs_ok = cert.A + cert.B + cert.C < 0.0 && cert.B < 0.0 && cert.C < 0.0;
    if (!cert.signs_ok) {
        std::ostringstream os;
        os.precision(17);
        os << "2-periodic sign certificate failed for alpha=" << a << " beta=" << b << " mu=" << m
           << ": A=" << cert.A << " B=" << cert.B << " C=" << cert.C;
        throw VerificationError(os.str());
    }
    return cert;
}

PeriodCertificate scan_periodic_points(const Parameters& p, int p_max, int grid_n) {
    if (p_max < 2) throw std::invalid_argument("scan_periodic_points: p_max must be >= 2");
    if (grid_n < 2) throw std::invalid_argument("scan_periodic_points: grid_n must be >= 2");
    PeriodCertificate cert = two_periodic_certificate(p);
    cert.period_min = 2;
    cert.period_max = p_max;

    std::vector<double> xs(static_cast<std::size_t>(grid_n) + 1);
    for (int i = 0; i <= grid_n; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / grid_n;

    for (int q = 2; q <= p_max; ++q) {
        PeriodRoots pr;
        pr.period = q;
        std::vector<double> g(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) g[i] = t_iterate(p, xs[i], q) - xs[i];

        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (g[i] == 0.0) {
                pr.roots.push_back(xs[i]);
            } else if (i + 1 < xs.size() && g[i + 1] != 0.0 && (g[i] < 0.0) != (g[i + 1] < 0.0)) {
                pr.roots.push_back(bisect(p, q, xs[i], xs[i + 1], g[i]));
            }
        }
        for (double r : pr.roots) {
            if (std::abs(t_map(p, r) - r) >= kFixedRootTol) pr.spurious.push_back(r);
        }
        cert.spurious_roots.insert(cert.spurious_roots.end(), pr.spurious.begin(), pr.spurious.end());
        cert.periods.push_back(std::move(pr));
    }

    if (!cert.spurious_roots.empty()) {
        std::ostringstream os;
        os.precision(17);
        os << "periodic points of T found for alpha=" << p.alpha << " beta=" << p.beta << " mu=" << p.mu
           << ": " << list_roots(cert.spurious_roots);
        throw VerificationError(os.str());
    }
    return cert;
}

bool check_W0_two_periodic_reduction(const Parameters& p, State s) {
    require_valid(p, ValidationMode::w0);
    if (!(s.x >= 0.0) || !(s.y >= 0.0)) throw std::domain_error("state outside the closed positive quadrant");
    if (two_cycle_residual(p, s) >= 1e-10) return true;

    // Near-periodic: polish with Newton, then test alpha x/(1+x) = (mu - 2) y. The left side
    // is >= 0 and the right side <= 0 on the quadrant, so only the origin satisfies it.
    const State z = refine_two_cycle(p, s);
    const double gap = emergence(p.alpha, z.x) - (p.mu - 2.0) * z.y;
    if (gap <= 1e-10) return true;

    std::ostringstream os;
    os.precision(17);
    os << "2-periodic point of W0 at (" << z.x << ", " << z.y << ") besides the origin";
    throw VerificationError(os.str());
}

std::vector<State> find_two_periodic_points_w0(const Parameters& p, double extent, int n) {
    require_valid(p, ValidationMode::w0);
    if (!(extent > 0.0) || n < 2) throw std::invalid_argument("2-periodic scan needs extent > 0 and n >= 2");
    const double h = extent / n;
    const auto m = static_cast<std::size_t>(n) + 1;
    std::vector<double> res(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            res[i * m + j] = two_cycle_residual(p, {static_cast<double>(i) * h, static_cast<double>(j) * h});
        }
    }

    const double lip = (1.0 + p.beta + p.alpha);
    const double threshold = 2.0 * (lip * lip + 1.0) * h;
    std::vector<State> found;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double r = res[i * m + j];
            if (r > threshold) continue;
            bool local_min = true;
            for (std::size_t ii = i ? i - 1 : 0; ii <= std::min(i + 1, m - 1) && local_min; ++ii) {
                for (std::size_t jj = j ? j - 1 : 0; jj <= std::min(j + 1, m - 1); ++jj) {
                    if (res[ii * m + jj] < r) {
                        local_min = false;
                        break;
                    }
                }
            }
            if (!local_min) continue;
            const State s = refine_two_cycle(p, {static_cast<double>(i) * h, static_cast<double>(j) * h});
            if (two_cycle_residual(p, s) < 1e-10 && std::max(s.x, s.y) > 1e-8) found.push_back(s);
        }
    }
    return found;
}

std::string certificate_to_json(const PeriodCertificate& cert) {
    nlohmann::ordered_json j;
    j["A"] = cert.A;
    j["B"] = cert.B;
    j["C"] = cert.C;
    j["signs_ok"] = cert.signs_ok;
    j["scanned_periods"] = {cert.period_min, cert.period_max};
    j["periods"] = nlohmann::ordered_json::array();
    for (const auto& pr : cert.periods) {
        nlohmann::ordered_json e;
        e["period"] = pr.period;
        e["roots"] = pr.roots;
        e["spurious"] = pr.spurious;
        j["periods"].push_back(std::move(e));
    }
    j["spurious_roots"] = cert.spurious_roots;
    return j.dump(2);
}

} // namespace mosqdyn
