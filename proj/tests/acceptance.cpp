// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "mosqdyn/model.hpp"
#include "mosqdyn/reference_ode.hpp"
#include "mosqdyn/sampling.hpp"
#include "mosqdyn/simplex_map.hpp"
#include "mosqdyn/spectral.hpp"
#include "mosqdyn/trajectory.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace mosqdyn;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (ok) detail.str("");
        if (!ok) detail << "; ";
        ok = false;
        detail << why;
    }
};

std::string fmt(const Parameters& p) {
    std::ostringstream os;
    os.precision(12);
    os << "(" << p.alpha << ", " << p.beta << ", " << p.mu;
    if (p.d0 != 0.0 || p.d1 != 0.0) os << ", " << p.d0 << ", " << p.d1;
    os << ")";
    return os.str();
}

// 1. Extinction iff beta < mu, survival iff beta > mu, with y converging to alpha/mu.
void dichotomy(Outcome& r) {
    ParameterSampler sampler(kDefaultSeed);
    int extinct = 0, survive = 0;
    std::int64_t steps = 0;
    for (int i = 0; i < 100; ++i) {
        const Parameters p = sampler.draw_w0(0.01);
        const State s0 = sampler.draw_state(0.0, 10.0);
        const Orbit o = iterate_orbit(p, s0);
        steps += o.n_steps;
        const Verdict want = p.beta < p.mu ? Verdict::extinction : Verdict::survival;
        if (o.verdict != want) {
            r.fail("draw " + std::to_string(i) + " " + fmt(p) + ": " + std::string(to_string(o.verdict)));
            continue;
        }
        if (o.verdict == Verdict::survival && !(std::abs(o.y_limit_estimate - p.alpha / p.mu) < 1e-6)) {
            r.fail("draw " + std::to_string(i) + " y limit off");
        }
        (o.verdict == Verdict::extinction ? extinct : survive)++;
    }
    if (r.ok) r.detail << "100 draws, " << extinct << " extinction, " << survive << " survival, " << steps << " steps";
}

// 2. Reference configurations.
void figures(Outcome& r) {
    struct Case {
        Parameters p;
        State s0;
        double limit;
    };
    const Case cases[] = {{{0.6, 0.5, 0.48}, {2.0, 0.1}, 1.25},
                          {{0.4, 0.35, 0.3}, {0.5, 2.0}, 4.0 / 3.0},
                          {{0.9, 0.9, 0.88}, {0.01, 0.2}, 0.9 / 0.88}};
    for (const auto& c : cases) {
        const Orbit o = iterate_orbit(c.p, c.s0);
        if (o.verdict != Verdict::survival) r.fail(fmt(c.p) + " verdict " + std::string(to_string(o.verdict)));
        if (!(std::abs(o.y_limit_estimate - c.limit) < 1e-6)) r.fail(fmt(c.p) + " y limit off");
        if (o.monitors.y_bound_violations != 0) r.fail(fmt(c.p) + " y bound violated");
        if (o.monitors.lemma2_violations != 0) r.fail(fmt(c.p) + " monotonicity pattern violated");
        if (r.ok) {
            r.detail.precision(10);
            r.detail << fmt(c.p) << " -> y=" << o.y_limit_estimate << " after " << o.n_steps << " steps; ";
        }
    }
    const auto rep = classify_origin({0.9, 0.9, 0.9});
    if (rep.classification != FixedPointType::nonhyperbolic) r.fail("beta = mu = 0.9 not nonhyperbolic");
    if (validate_parameters({0.9, 0.9, 0.9}, ValidationMode::w0).valid()) r.fail("beta = mu accepted for iteration");
    if (r.ok) r.detail << "(0.9, 0.9, 0.9) nonhyperbolic and rejected for iteration";
}

// 3. Spectral classification against a numeric eigensolver.
void spectral(Outcome& r) {
    ParameterSampler sampler(kDefaultSeed + 3);
    double worst = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const Parameters p = sampler.draw_w0();
        const auto rep = classify_origin(p);
        const FixedPointType want = p.beta < p.mu ? FixedPointType::attracting : FixedPointType::saddle;
        if (rep.classification != want) r.fail("draw " + fmt(p) + " misclassified");
        Eigen::Matrix2d j;
        j << 1.0 - p.alpha, p.beta, p.alpha, 1.0 - p.mu;
        const Eigen::Vector2cd ev = Eigen::EigenSolver<Eigen::Matrix2d>(j, false).eigenvalues();
        const double hi = std::max(ev[0].real(), ev[1].real()), lo = std::min(ev[0].real(), ev[1].real());
        worst = std::max({worst, std::abs(hi - rep.lambda1), std::abs(lo - rep.lambda2)});
    }
    if (!(worst < 1e-12)) r.fail("eigenvalue mismatch " + std::to_string(worst));
    if (r.ok) r.detail << "10000 draws, max eigenvalue deviation " << worst;
}

// 4. No periodic points other than the fixed ones.
void periodicity(Outcome& r) {
    ParameterSampler sampler(kDefaultSeed + 4);
    for (int i = 0; i < 10'000; ++i) two_periodic_certificate(sampler.draw_w0()); // throws on a sign failure
    std::vector<Parameters> scans{{0.6, 0.5, 0.48}, {0.4, 0.35, 0.3}};
    for (int i = 0; i < 100; ++i) scans.push_back(sampler.draw_w0());
    std::size_t spurious = 0;
    for (const auto& p : scans) spurious += scan_periodic_points(p, 8, 10'000).spurious_roots.size();
    if (spurious != 0) r.fail(std::to_string(spurious) + " spurious roots");
    std::size_t cycles = 0;
    for (const auto& p : {Parameters{0.6, 0.5, 0.48}, Parameters{0.4, 0.35, 0.3}})
        cycles += find_two_periodic_points_w0(p, 5.0, 500).size();
    if (cycles != 0) r.fail(std::to_string(cycles) + " 2-periodic points of W0");
    if (r.ok) r.detail << "signs on 10000 draws, periods 2..8 on " << scans.size() << " maps, 500x500 quadrant grid clean";
}

// 5. Algebraic identities.
void identities(Outcome& r) {
    ParameterSampler sampler(kDefaultSeed + 5);
    double sum_err = 0.0, euler_err = 0.0, end_err = 0.0;
    OrbitConfig cfg;
    cfg.max_iters = 1000;
    cfg.max_recorded = 2000;
    for (int i = 0; i < 100; ++i) {
        const Parameters p = sampler.draw_w0();
        const Orbit o = iterate_orbit(p, sampler.draw_state(0.0, 10.0), cfg);
        sum_err = std::max(sum_err, check_sum_identity(p, o));

        const Parameters g{p.alpha, p.beta, p.mu, sampler.unit(), sampler.unit()};
        for (int k = 0; k < 100; ++k) {
            const State s = sampler.draw_state(0.0, 10.0);
            const State w = apply_W(g, s);
            const Rate f = continuous_rhs(g, s);
            euler_err = std::max({euler_err, std::abs(w.x - s.x - f.dx), std::abs(w.y - s.y - f.dy)});
        }
        end_err = std::max({end_err, std::abs(apply_T(p, 0.0) - p.beta / (p.beta - p.mu + 1.0)),
                            std::abs(apply_T(p, 1.0) - (2.0 - p.alpha) / 2.0)});
    }
    if (!(sum_err <= 1e-9)) r.fail("sum identity error " + std::to_string(sum_err));
    if (!(euler_err <= 1e-12)) r.fail("W - id differs from the vector field by " + std::to_string(euler_err));
    if (!(end_err <= 1e-14)) r.fail("T endpoint error " + std::to_string(end_err));
    if (r.ok) r.detail << "sum identity " << sum_err << ", W - id vs field " << euler_err << ", T endpoints " << end_err;
}

// 6. Continuous reference model.
void continuous(Outcome& r) {
    const Parameters ref{0.6, 0.8, 0.5, 0.1, 0.05};
    OdeConfig fine;
    fine.t_end = 2.0;
    fine.step = 1e-4;
    const State exact = integrate_ode(ref, {1.0, 1.0}, fine).back().s;
    auto err = [&](double h) {
        OdeConfig c = fine;
        c.step = h;
        const State s = integrate_ode(ref, {1.0, 1.0}, c).back().s;
        return std::hypot(s.x - exact.x, s.y - exact.y);
    };
    const double order = std::log2(err(0.1) / err(0.05));
    if (!(order > 3.7 && order < 4.3)) r.fail("observed order " + std::to_string(order));

    const Parameters extinct[] = {{0.6, 0.3, 0.5, 0.1, 0.05}, {0.8, 0.4, 0.6, 0.2, 0.1}, {0.3, 0.2, 0.9, 0.0, 0.5}};
    const Parameters persist[] = {{0.6, 0.8, 0.5, 0.1, 0.05}, {0.9, 0.9, 0.3, 0.05, 0.2}, {0.5, 1.0, 0.4, 0.0, 0.1}};
    const State starts[] = {{1.0, 1.0}, {5.0, 0.1}, {0.1, 5.0}};
    for (const auto& p : extinct) {
        if (compute_r0(p) > 1.0) r.fail(fmt(p) + " has r0 > 1");
        for (const auto& s0 : starts) {
            const State s = integrate_ode(p, s0).back().s;
            if (!(std::max(s.x, s.y) < 1e-6)) r.fail(fmt(p) + " did not reach the origin");
        }
    }
    for (const auto& p : persist) {
        const auto eq = positive_equilibrium(p); // throws if the residual exceeds 1e-9
        if (!eq) {
            r.fail(fmt(p) + " has no positive equilibrium");
            continue;
        }
        for (const auto& s0 : starts) {
            const State s = integrate_ode(p, s0).back().s;
            if (!(std::max(std::abs(s.x - eq->x), std::abs(s.y - eq->y)) < 1e-5)) {
                r.fail(fmt(p) + " did not reach the equilibrium");
            }
        }
    }
    // Random draws with rates bounded away from zero and r0 bounded away from 1, where
    // the approach to the limit is fast enough for t = 500.
    ParameterSampler sampler(kDefaultSeed + 6);
    int drawn = 0;
    double worst = 0.0;
    while (drawn < 200) {
        const Parameters p{sampler.between(0.2, 1.0), sampler.between(0.2, 1.0), sampler.between(0.2, 1.0),
                           sampler.between(0.0, 0.5), sampler.between(0.05, 1.0)};
        const double r0 = compute_r0(p);
        if (std::abs(r0 - 1.0) < 0.2) continue;
        ++drawn;
        const State s = integrate_ode(p, sampler.draw_state(0.0, 10.0)).back().s;
        const State target = r0 <= 1.0 ? State{0.0, 0.0} : *positive_equilibrium(p);
        const double dist = std::max(std::abs(s.x - target.x), std::abs(s.y - target.y));
        worst = std::max(worst, dist);
        if (!(dist < (r0 <= 1.0 ? 1e-6 : 1e-5))) r.fail(fmt(p) + " missed its limit by " + std::to_string(dist));
    }
    if (r.ok) {
        r.detail << "observed order " << order << ", 3 subcritical and 3 supercritical configs from 3 starts, "
                 << drawn << " random draws (max distance " << worst << ")";
    }
}

} // namespace

int main() {
    const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
        {"1 extinction/survival dichotomy", dichotomy},
        {"2 reference configurations", figures},
        {"3 spectral classification", spectral},
        {"4 periodic point exclusion", periodicity},
        {"5 algebraic identities", identities},
        {"6 continuous cross-check", continuous},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome r;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            check(r);
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %s: %s (%.1f s)\n", r.ok ? "PASS" : "FAIL", name, r.detail.str().c_str(), secs);
        std::fflush(stdout);
        failed += r.ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
