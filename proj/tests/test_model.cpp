#include "mosqdyn/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace mosqdyn;

namespace {

const Parameters kSlowGrowth{0.6, 0.5, 0.48};

// Term-by-term recomputation of the general operator in extended precision.
std::pair<long double, long double> w_oracle(const Parameters& p, long double x, long double y) {
    const long double alpha = p.alpha, beta = p.beta, mu = p.mu, d0 = p.d0, d1 = p.d1;
    const long double emerg = alpha * x / (1.0L + x);
    const long double death = (d0 + d1 * x) * x;
    return {beta * y - emerg - death + x, emerg - mu * y + y};
}

} // namespace

TEST_CASE("validate_parameters in W0 mode") {
    CHECK(validate_parameters(kSlowGrowth, ValidationMode::w0).valid());

    const auto big_alpha = validate_parameters({1.5, 0.5, 0.5}, ValidationMode::w0);
    CHECK_FALSE(big_alpha.valid());
    CHECK_FALSE(big_alpha.alpha_in_range);
    CHECK(big_alpha.message().find("alpha out of (0,1]") != std::string::npos);

    const auto equal_rates = validate_parameters({0.5, 0.5, 0.5}, ValidationMode::w0);
    CHECK_FALSE(equal_rates.valid());
    CHECK(equal_rates.invariance_condition());
    CHECK_FALSE(equal_rates.beta_ne_mu);

    const auto with_death = validate_parameters({0.6, 0.5, 0.48, 0.1, 0.0}, ValidationMode::w0);
    CHECK_FALSE(with_death.valid());
    CHECK_FALSE(with_death.d_terms_zero);
}

TEST_CASE("validate_parameters in general mode reports but does not require the invariance condition") {
    const auto r = validate_parameters({0.6, 1.7, 0.5, 0.1, 0.05}, ValidationMode::general);
    CHECK(r.valid());
    CHECK(r.invariance_condition());
    const auto r2 = validate_parameters({1.2, 0.8, 0.5, 0.1, 0.05}, ValidationMode::general);
    CHECK(r2.valid());
    CHECK_FALSE(r2.invariance_condition());
    CHECK_FALSE(validate_parameters({0.6, 0.8, 0.5, -0.1, 0.0}, ValidationMode::general).valid());
    CHECK_FALSE(validate_parameters({0.6, 0.0, 0.5}, ValidationMode::general).valid());
    CHECK(Parameters{0.6, 0.5, 0.48}.is_case_w0());
    CHECK_FALSE(Parameters{0.6, 0.5, 0.5}.is_case_w0());
}

TEST_CASE("apply_W matches term-by-term evaluation") {
    const Parameters p{0.6, 0.5, 0.48, 0.1, 0.05};
    const State s = apply_W(p, {1.0, 1.0});
    const auto [ox, oy] = w_oracle(p, 1.0L, 1.0L);
    CHECK(s.x == doctest::Approx(static_cast<double>(ox)).epsilon(1e-15));
    CHECK(s.y == doctest::Approx(static_cast<double>(oy)).epsilon(1e-15));
    CHECK(s.x == doctest::Approx(1.05).epsilon(1e-14));
    CHECK(s.y == doctest::Approx(0.82).epsilon(1e-14));

    const State f = apply_W(kSlowGrowth, {2.0, 0.1});
    CHECK(f.x == doctest::Approx(1.65).epsilon(1e-14));
    CHECK(f.y == doctest::Approx(0.452).epsilon(1e-14));
}

TEST_CASE("apply_W0 examples") {
    CHECK(apply_W0(kSlowGrowth, {2.0, 0.1}) == apply_W(kSlowGrowth, {2.0, 0.1}));
    CHECK(apply_W0(kSlowGrowth, {0.0, 0.0}) == State{0.0, 0.0});

    const Parameters slow_pair{0.9, 0.9, 0.88};
    const State s = apply_W0(slow_pair, {0.01, 0.2});
    const auto [ox, oy] = w_oracle(slow_pair, 0.01L, 0.2L);
    CHECK(std::abs(s.x - static_cast<double>(ox)) < 1e-16);
    CHECK(std::abs(s.y - static_cast<double>(oy)) < 1e-16);
    CHECK(s.x == doctest::Approx(0.01 + 0.18 - 0.009 / 1.01).epsilon(1e-15));
    CHECK(s.x == doctest::Approx(0.181089).epsilon(1e-6));
    CHECK(s.y == doctest::Approx(0.032910).epsilon(1e-5));
}

TEST_CASE("operators reject states outside the quadrant and W0 rejects invalid parameters") {
    CHECK_THROWS_AS(apply_W(kSlowGrowth, {-0.5, 1.0}), std::domain_error);
    CHECK_THROWS_AS(continuous_rhs(kSlowGrowth, {-1e-3, 0.0}), std::domain_error);
    CHECK_THROWS_AS(apply_W0({0.5, 0.5, 0.5}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_W0({0.6, 0.5, 0.48, 0.1, 0.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("continuous_rhs examples") {
    const Rate z = continuous_rhs(kSlowGrowth, {0.0, 0.0});
    CHECK(z.dx == 0.0);
    CHECK(z.dy == 0.0);
    const Rate r = continuous_rhs(kSlowGrowth, {2.0, 0.1});
    CHECK(r.dx == doctest::Approx(-0.35).epsilon(1e-14));
    CHECK(r.dy == doctest::Approx(0.352).epsilon(1e-14));
}

TEST_CASE("random draws: invariance, Euler identity, fixed origin") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto unit = [&] { return 1.0 - u(rng); };
    for (int i = 0; i < 20'000; ++i) {
        const Parameters p{unit(), 3.0 * unit(), unit()};
        const double scale = std::pow(10.0, 8.0 * u(rng) - 4.0);
        const State s{scale * u(rng), scale * u(rng)};
        const State w = apply_W(p, s);
        REQUIRE(w.x >= 0.0);
        REQUIRE(w.y >= 0.0);

        const Parameters g{p.alpha, p.beta, p.mu, u(rng), u(rng)};
        const State wg = apply_W(g, s);
        const Rate f = continuous_rhs(g, s);
        // Both sides round the same terms; the bound is a few ulps of their total magnitude.
        const double tol = 1e-15 * (1.0 + s.x + (g.beta + g.mu + 1.0) * s.y + (g.d0 + g.d1 * s.x) * s.x);
        REQUIRE(std::abs((wg.x - s.x) - f.dx) <= tol);
        REQUIRE(std::abs((wg.y - s.y) - f.dy) <= tol);

        REQUIRE(apply_W(g, {0.0, 0.0}) == State{0.0, 0.0});
    }
}

TEST_CASE("emergence is increasing and bounded by alpha") {
    const double alpha = 0.7;
    double prev = emergence(alpha, 0.0);
    CHECK(prev == 0.0);
    for (double x = 1e-6; x < 1e12; x *= 1.5) {
        const double e = emergence(alpha, x);
        CHECK(e > prev);
        CHECK(e < alpha);
        prev = e;
    }
    CHECK(emergence(alpha, 1e300) == doctest::Approx(alpha));
}
