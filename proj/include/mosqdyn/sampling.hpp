#pragma once

#include "mosqdyn/model.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace mosqdyn {

inline constexpr std::uint64_t kDefaultSeed = 20200917;

/// Explicit seed if given, else the MOSQDYN_SEED environment variable, else kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed = std::nullopt);

class ParameterSampler {
public:
    explicit ParameterSampler(std::uint64_t seed) : rng_(seed) {}

    /// Uniform on (0, 1].
    double unit() { return 1.0 - uniform_(rng_); }

    double between(double lo, double hi) { return lo + (hi - lo) * uniform_(rng_); }

    /// alpha, beta, mu uniform on (0,1] with |beta - mu| > min_gap, d0 = d1 = 0.
    Parameters draw_w0(double min_gap = 0.0);

    State draw_state(double lo, double hi) { return {between(lo, hi), between(lo, hi)}; }

private:
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

} // namespace mosqdyn
