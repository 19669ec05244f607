#include "mosqdyn/sampling.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mosqdyn {

std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed) {
    if (explicit_seed) return *explicit_seed;
    if (const char* env = std::getenv("MOSQDYN_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string("MOSQDYN_SEED is not an unsigned integer: ") + env);
    }
    return kDefaultSeed;
}

Parameters ParameterSampler::draw_w0(double min_gap) {
    Parameters p;
    do {
        p.alpha = unit();
        p.beta = unit();
        p.mu = unit();
    } while (!(std::abs(p.beta - p.mu) > min_gap));
    return p;
}

} // namespace mosqdyn
