#pragma once

#include "mosqdyn/model.hpp"

#include <array>
#include <string_view>
#include <utility>
#include <vector>

namespace mosqdyn {

using Matrix2 = std::array<std::array<double, 2>, 2>;

enum class FixedPointType { attracting, repelling, saddle, nonhyperbolic };

std::string_view to_string(FixedPointType t);

struct SpectralReport {
    Matrix2 jacobian{};
    double lambda1 = 0.0; // lambda1 >= lambda2, both real
    double lambda2 = 0.0;
    FixedPointType classification = FixedPointType::nonhyperbolic;
};

// Truth values of the two inequalities equivalent to |lambda_{1,2}| < 1:
//   upper: alpha + mu + sqrt(D) < 4
//   lower: 0 < alpha + mu - sqrt(D) < 4
// with D = (alpha - mu)^2 + 4 alpha beta.
struct StabilityInequalities {
    bool upper = false;
    bool lower = false;
};

struct FixedPointScan {
    double x_max = 50.0;
    double y_max = 50.0;
    double step = 0.05;
    double residual_tol = 1e-10;
};

// The spectral routines require d0 = d1 = 0 and 0 < alpha <= 1, beta > 0, 0 < mu <= 1.
// beta == mu is accepted so the nonhyperbolic boundary can be reported.

/// Fixed points of W0 in the quadrant. Always {(0,0)}; the grid scan with Newton
/// refinement throws VerificationError if it locates any other zero of W0(s) - s.
std::vector<State> find_fixed_points_w0(const Parameters& p, const FixedPointScan& scan = {});

/// Jacobian of W0 at the origin: [[1 - alpha, beta], [alpha, 1 - mu]].
Matrix2 jacobian_at_origin(const Parameters& p);

/// Closed-form eigenvalues (lambda1, lambda2) of the Jacobian at the origin.
std::pair<double, double> eigenvalues(const Parameters& p);

/// Classifies the origin by comparing |lambda_i| against 1 with a band of width tol
/// (inside the band the report says nonhyperbolic).
SpectralReport classify_origin(const Parameters& p, double tol = 1e-9);

StabilityInequalities stability_inequalities(const Parameters& p);

/// Type predicted for the origin from beta versus mu alone.
FixedPointType expected_origin_type(const Parameters& p);

} // namespace mosqdyn
