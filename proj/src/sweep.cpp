#include "mosqdyn/sweep.hpp"

#include "mosqdyn/io.hpp"
#include "mosqdyn/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mosqdyn {

std::vector<double> Range::values() const {
    if (steps < 1) throw std::invalid_argument("range needs at least one step");
    if (!(lo <= hi)) throw std::invalid_argument("range lower bound exceeds upper bound");
    if (steps == 1) return {lo};
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
    return v;
}

namespace {

void evaluate_cell(SweepCell& cell, const SweepSpec& spec) {
    const Parameters& p = cell.params;
    const auto general = validate_parameters(p, ValidationMode::general);
    const bool spectral_applies = general.valid() && general.invariance_condition() && general.d_terms_zero;
    if (spectral_applies) cell.spectral_class = std::string(to_string(classify_origin(p).classification));

    cell.in_condition = validate_parameters(p, ValidationMode::w0).valid() && std::abs(p.beta - p.mu) > spec.min_gap;
    if (!cell.in_condition) {
        cell.verdict = "skipped";
        return;
    }
    const Orbit orbit = iterate_orbit(p, spec.s0, spec.orbit);
    cell.verdict = std::string(to_string(orbit.verdict));
    cell.n_steps = orbit.n_steps;
    cell.y_limit_estimate = orbit.y_limit_estimate;
    cell.agree = (cell.spectral_class == "attracting" && orbit.verdict == Verdict::extinction) ||
                 (cell.spectral_class == "saddle" && orbit.verdict == Verdict::survival);
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
    spec.orbit.validate();
    if (!(spec.s0.x >= 0.0) || !(spec.s0.y >= 0.0)) throw std::invalid_argument("sweep initial state outside the quadrant");
    const auto alphas = spec.alpha.values();
    const auto betas = spec.beta.values();
    const auto mus = spec.mu.values();

    SweepResult result;
    result.cells.reserve(alphas.size() * betas.size() * mus.size());
    for (double a : alphas) {
        for (double b : betas) {
            for (double m : mus) {
                SweepCell cell;
                cell.index = result.cells.size();
                cell.params = {a, b, m, spec.d0, spec.d1};
                result.cells.push_back(cell);
            }
        }
    }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, result.cells.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < result.cells.size(); i = next++) evaluate_cell(result.cells[i], spec);
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    for (const auto& c : result.cells) {
        if (!c.in_condition) continue;
        ++result.in_condition;
        if (c.agree) ++result.agreeing;
        if (c.verdict == "extinction") ++result.extinction;
        if (c.verdict == "survival") ++result.survival;
        if (c.verdict == "exhausted") ++result.exhausted;
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "cell,alpha,beta,mu,d0,d1,status,spectral_class,verdict,n_steps,y_limit_estimate,agree\n";
    for (const auto& c : result.cells) {
        os << c.index << ',' << format_real(c.params.alpha) << ',' << format_real(c.params.beta) << ','
           << format_real(c.params.mu) << ',' << format_real(c.params.d0) << ',' << format_real(c.params.d1) << ','
           << (c.in_condition ? "in-condition" : "out-of-condition") << ','
           << (c.spectral_class.empty() ? "n/a" : c.spectral_class) << ',' << c.verdict << ',' << c.n_steps << ','
           << format_real(c.y_limit_estimate) << ',' << (c.in_condition ? (c.agree ? "yes" : "no") : "n/a")
           << '\n';
    }
}

} // namespace mosqdyn
