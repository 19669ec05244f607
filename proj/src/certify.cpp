#include "mosqdyn/certify.hpp"

#include "mosqdyn/simplex_map.hpp"
#include "mosqdyn/spectral.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace mosqdyn {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void run_check(std::vector<CheckResult>& out, std::string name, const std::function<std::string(bool&)>& body) {
    CheckResult r;
    r.name = std::move(name);
    try {
        bool ok = false;
        r.detail = body(ok);
        r.passed = ok;
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = e.what();
    }
    out.push_back(std::move(r));
}

} // namespace

std::vector<CheckResult> certify(const Parameters& p, State s0, const CertifyOptions& opts) {
    require_valid(p, ValidationMode::w0);
    std::vector<CheckResult> out;
    const bool beta_gt_mu = p.beta > p.mu;

    run_check(out, "unique_fixed_point", [&](bool& ok) {
        const auto fps = find_fixed_points_w0(p);
        ok = fps.size() == 1 && fps.front() == State{0.0, 0.0};
        return std::string("fixed points found: ") + std::to_string(fps.size());
    });

    run_check(out, "origin_type", [&](bool& ok) {
        const auto rep = classify_origin(p);
        const auto ineq = stability_inequalities(p);
        const bool attracting = rep.classification == FixedPointType::attracting;
        ok = rep.classification == expected_origin_type(p) && (ineq.upper && ineq.lower) == attracting;
        return std::string(to_string(rep.classification)) + " lambda1=" + fmt(rep.lambda1) +
               " lambda2=" + fmt(rep.lambda2);
    });

    // Long run: verdict plus streaming monitors over every step.
    Orbit long_run;
    run_check(out, "limit_verdict", [&](bool& ok) {
        long_run = iterate_orbit(p, s0, opts.orbit);
        const Verdict want = beta_gt_mu ? Verdict::survival : Verdict::extinction;
        ok = long_run.verdict == want;
        if (ok && beta_gt_mu) ok = std::abs(long_run.y_limit_estimate - p.alpha / p.mu) < opts.orbit.conv_tol;
        return std::string(to_string(long_run.verdict)) + " after " + std::to_string(long_run.n_steps) +
               " steps, y=" + fmt(long_run.y_limit_estimate);
    });

    run_check(out, "y_bound", [&](bool& ok) {
        const auto stored = check_y_bound(p, long_run);
        ok = long_run.monitors.y_bound_violations == 0 && stored == 0;
        return "violations: " + std::to_string(long_run.monitors.y_bound_violations);
    });

    OrbitConfig short_cfg = opts.orbit;
    short_cfg.max_iters = opts.identity_steps;
    short_cfg.record_every = 1;
    run_check(out, "sum_identity", [&](bool& ok) {
        const Orbit orbit = iterate_orbit(p, s0, short_cfg);
        const double err = check_sum_identity(p, orbit);
        ok = err <= 1e-9;
        return "max error " + fmt(err);
    });

    if (beta_gt_mu) {
        run_check(out, "monotonicity_patterns", [&](bool& ok) {
            ok = long_run.monitors.lemma2_violations == 0;
            const auto& d = long_run.monitors.delta_sequence;
            return "violations: " + std::to_string(long_run.monitors.lemma2_violations) +
                   ", transient alternations: " + std::to_string(d.alternations);
        });
        run_check(out, "growth_lower_bound", [&](bool& ok) {
            const auto n0 = long_run.monitors.n0_estimate;
            ok = check_growth_lower_bound(p, long_run, n0);
            return "n0=" + std::to_string(n0);
        });
    } else {
        run_check(out, "contraction_combinations", [&](bool& ok) {
            ok = check_contraction_combos(p, long_run);
            return "k=" + fmt(p.mu / p.beta);
        });
    }

    run_check(out, "T_range", [&](bool& ok) {
        ok = check_T_range(p, opts.t_grid);
        return "grid " + std::to_string(opts.t_grid);
    });

    run_check(out, "two_periodic_signs", [&](bool& ok) {
        const auto cert = two_periodic_certificate(p);
        ok = cert.signs_ok;
        return "A=" + fmt(cert.A) + " B=" + fmt(cert.B) + " C=" + fmt(cert.C);
    });

    run_check(out, "periodic_scan", [&](bool& ok) {
        const auto cert = scan_periodic_points(p, opts.p_max, opts.t_grid);
        ok = cert.spurious_roots.empty();
        return "periods 2.." + std::to_string(opts.p_max) + ", spurious roots: " +
               std::to_string(cert.spurious_roots.size());
    });

    run_check(out, "W0_two_cycles", [&](bool& ok) {
        const auto found = find_two_periodic_points_w0(p, 5.0, opts.two_cycle_grid);
        for (const State& s : found) check_W0_two_periodic_reduction(p, s);
        ok = found.empty();
        return "non-trivial 2-periodic points: " + std::to_string(found.size());
    });

    return out;
}

} // namespace mosqdyn
