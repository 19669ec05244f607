#pragma once

#include "mosqdyn/model.hpp"

#include <string>
#include <vector>

namespace mosqdyn {

// W0 projected onto the simplex S = {x + y = 1, x, y >= 0} (operator U) and its
// coordinate form T on [0, 1]. Everything here requires W0-valid parameters.

struct PeriodRoots {
    int period = 0;
    std::vector<double> roots;    // all roots of T^q(x) = x found on [0,1]
    std::vector<double> spurious; // roots that are not fixed points of T
};

struct PeriodCertificate {
    // Coefficients of A x^2 + B x + C, the quotient of T(T(x)) - x by T(x) - x
    // (up to sign and a positive factor).
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    bool signs_ok = false; // A + B + C < 0, B < 0, C < 0
    int period_min = 2;
    int period_max = 2;
    std::vector<PeriodRoots> periods;
    std::vector<double> spurious_roots;
};

/// Normalized operator on the simplex. Throws std::domain_error if |x + y - 1| > 1e-12,
/// a coordinate is negative, or the common denominator is not positive.
State apply_U(const Parameters& p, State s);

/// T(x) = ((1-b)x^2 + (1-a)x + b) / ((m-b)x^2 + x + b - m + 1) on [0, 1].
double apply_T(const Parameters& p, double x);

/// Numerator a(x), denominator b(x) and h(x) = b(x) - a(x) of T.
double t_numerator(const Parameters& p, double x);
double t_denominator(const Parameters& p, double x);
double t_gap(const Parameters& p, double x);

/// Checks a >= 0, b > 0, h >= 0 and T(x) in [0,1] on grid_n + 1 uniform points of [0,1],
/// plus the endpoint identities h(0) = 1 - mu and h(1) = alpha.
bool check_T_range(const Parameters& p, int grid_n);

/// A, B, C and their signs. Throws VerificationError if a sign condition fails.
PeriodCertificate two_periodic_certificate(const Parameters& p);

/// Roots of T^q(x) = x for q = 2..p_max by grid sign changes and bisection to 1e-12;
/// roots with |T(x) - x| < 1e-10 are fixed points of T and excluded.
/// Throws VerificationError listing any remaining (spurious) roots.
PeriodCertificate scan_periodic_points(const Parameters& p, int p_max = 8, int grid_n = 10'000);

/// If W0(W0(s)) = s within 1e-10, checks alpha x/(1+x) = (mu - 2) y, which on the quadrant
/// forces s = (0,0). Returns true; throws VerificationError on a non-trivial 2-periodic point.
bool check_W0_two_periodic_reduction(const Parameters& p, State s);

/// Residual scan of W0(W0(s)) - s on an (n+1) x (n+1) grid over [0, extent]^2 with
/// Newton refinement of local minima. Returns the 2-periodic points found other than the origin.
std::vector<State> find_two_periodic_points_w0(const Parameters& p, double extent = 5.0, int n = 500);

/// JSON export: A, B, C, signs_ok, scanned period range and per-period root lists.
std::string certificate_to_json(const PeriodCertificate& cert);

} // namespace mosqdyn
