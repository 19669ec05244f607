#include "cli.hpp"

#include "mosqdyn/certify.hpp"
#include "mosqdyn/errors.hpp"
#include "mosqdyn/io.hpp"
#include "mosqdyn/model.hpp"
#include "mosqdyn/reference_ode.hpp"
#include "mosqdyn/sampling.hpp"
#include "mosqdyn/spectral.hpp"
#include "mosqdyn/sweep.hpp"
#include "mosqdyn/trajectory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace mosqdyn::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat key=value config file; keys mirror long flag names without the dashes.
std::vector<std::string> read_config_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        out.push_back("--" + trim(line.substr(0, eq)));
        out.push_back(trim(line.substr(eq + 1)));
    }
    return out;
}

// Config values go right after the subcommand so explicit flags, parsed later, win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path || args.empty()) return args;
    std::vector<std::string> out{args.front()};
    const auto extra = read_config_args(*path);
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

void add_parameter_flags(CLI::App* sub, Parameters& p, bool required) {
    auto* a = sub->add_option("--alpha", p.alpha, "maximum emergence rate");
    auto* b = sub->add_option("--beta", p.beta, "birth (oviposition) rate");
    auto* m = sub->add_option("--mu", p.mu, "adult death rate");
    if (required) {
        a->required();
        b->required();
        m->required();
    }
    sub->add_option("--d0", p.d0, "density independent larvae death")->capture_default_str();
    sub->add_option("--d1", p.d1, "density dependent larvae death")->capture_default_str();
}

void add_orbit_flags(CLI::App* sub, OrbitConfig& cfg) {
    sub->add_option("--steps", cfg.max_iters, "maximum number of iterations")->capture_default_str();
    sub->add_option("--conv-tol", cfg.conv_tol, "convergence radius")->capture_default_str();
    sub->add_option("--div-threshold", cfg.div_threshold, "x beyond this counts as escaped")
        ->capture_default_str();
}

std::string describe(const Parameters& p) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha=" << p.alpha << " beta=" << p.beta << " mu=" << p.mu << " d0=" << p.d0 << " d1=" << p.d1;
    return os.str();
}

void require_w0(const Parameters& p) {
    const auto rep = validate_parameters(p, ValidationMode::w0);
    if (!rep.valid()) throw UsageError("invalid parameters: " + rep.message());
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    try {
        write_file_atomic(path, content);
    } catch (const std::exception& e) {
        throw IoError(e.what());
    }
}

ordered_json params_json(const Parameters& p) {
    ordered_json j;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["mu"] = p.mu;
    j["d0"] = p.d0;
    j["d1"] = p.d1;
    return j;
}

ordered_json orbit_json(const Orbit& o) {
    ordered_json j;
    j["parameters"] = params_json(o.params);
    j["verdict"] = std::string(to_string(o.verdict));
    j["n_steps"] = o.n_steps;
    j["y_limit_estimate"] = o.y_limit_estimate;
    j["final_state"] = {{"x", o.final_state.x}, {"y", o.final_state.y}};
    const auto& m = o.monitors;
    const auto& d = m.delta_sequence;
    j["monitors"] = {
        {"y_bound_violations", m.y_bound_violations},
        {"lemma2_violations", m.lemma2_violations},
        {"sum_identity_max_err", m.sum_identity_max_err},
        {"n0_estimate", m.n0_estimate},
        {"delta_sequence",
         {{"both_increasing", d.both_increasing},
          {"x_up_y_down", d.x_up_y_down},
          {"x_down_y_up", d.x_down_y_up},
          {"both_decreasing", d.both_decreasing},
          {"with_tie", d.with_tie},
          {"alternations", d.alternations},
          {"delta_trend_breaks", d.delta_trend_breaks}}},
    };
    auto states = ordered_json::array();
    for (std::size_t i = 0; i < o.states.size(); ++i) {
        states.push_back({{"n", o.steps[i]}, {"x", o.states[i].x}, {"y", o.states[i].y}});
    }
    j["states"] = std::move(states);
    return j;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    Parameters p;
    State s0;
    OrbitConfig cfg;
    std::string out;
    std::string format = "csv";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    require_w0(a.p);
    try {
        a.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!(a.s0.x >= 0.0) || !(a.s0.y >= 0.0)) throw UsageError("initial state must satisfy x0 >= 0, y0 >= 0");

    const Orbit orbit = iterate_orbit(a.p, a.s0, a.cfg);
    std::string content;
    if (a.format == "json") {
        content = orbit_json(orbit).dump(2) + "\n";
    } else {
        std::ostringstream os;
        write_orbit_csv(os, orbit);
        content = os.str();
    }
    emit(content, a.out, out);

    std::ostream& summary = (a.out.empty() || a.out == "-") ? err : out;
    summary.precision(17);
    summary << to_string(orbit.verdict) << " n_steps=" << orbit.n_steps
            << " y_limit_estimate=" << orbit.y_limit_estimate << '\n';
    return kOk;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const Parameters& p, double tol, std::ostream& out) {
    const auto rep = validate_parameters(p, ValidationMode::general);
    if (!rep.valid() || !rep.invariance_condition() || !rep.d_terms_zero) {
        std::string why = rep.message();
        if (why.empty()) {
            why = !rep.d_terms_zero ? "classification needs d0 = d1 = 0"
                                    : "invariance condition 0<alpha<=1, beta>0, 0<mu<=1 violated";
        }
        throw UsageError("invalid parameters: " + why);
    }
    const auto spec = classify_origin(p, tol);
    const auto ineq = stability_inequalities(p);

    ordered_json j;
    j["parameters"] = params_json(p);
    j["jacobian"] = {{spec.jacobian[0][0], spec.jacobian[0][1]}, {spec.jacobian[1][0], spec.jacobian[1][1]}};
    j["lambda1"] = spec.lambda1;
    j["lambda2"] = spec.lambda2;
    j["classification"] = std::string(to_string(spec.classification));
    j["expected_classification"] = std::string(to_string(expected_origin_type(p)));
    j["stability_inequalities"] = {{"upper", ineq.upper}, {"lower", ineq.lower}};
    j["r0"] = compute_r0(p);
    out << j.dump(2) << '\n';
    return kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    SweepSpec spec;
    std::vector<double> alpha_range{0.6, 0.6, 1};
    std::vector<double> beta_range{0.05, 1.0, 20};
    std::vector<double> mu_range{0.05, 1.0, 20};
    unsigned threads = 0;
    std::string out = "sweep.csv";
};

Range to_range(const std::vector<double>& v, const char* name) {
    if (v.size() != 3) throw UsageError(std::string(name) + " expects lo,hi,steps");
    const double steps = v[2];
    if (steps < 1 || steps != std::floor(steps) || !(v[0] <= v[1])) {
        throw UsageError(std::string(name) + " is empty (need lo <= hi and steps >= 1)");
    }
    return {v[0], v[1], static_cast<int>(steps)};
}

int cmd_sweep(SweepArgs a, std::ostream& out) {
    a.spec.alpha = to_range(a.alpha_range, "--alpha-range");
    a.spec.beta = to_range(a.beta_range, "--beta-range");
    a.spec.mu = to_range(a.mu_range, "--mu-range");
    try {
        a.spec.orbit.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!(a.spec.s0.x >= 0.0) || !(a.spec.s0.y >= 0.0)) throw UsageError("initial state must be in the quadrant");

    const SweepResult result = run_sweep(a.spec, a.threads);
    std::ostringstream os;
    write_sweep_csv(os, result);
    emit(os.str(), a.out, out);

    out << "cells=" << result.cells.size() << " in_condition=" << result.in_condition
        << " out_of_condition=" << result.cells.size() - result.in_condition << " extinction=" << result.extinction
        << " survival=" << result.survival << " exhausted=" << result.exhausted << " agreeing=" << result.agreeing
        << '\n';
    if (!result.all_agree()) {
        out << "disagreement between spectral class and simulated verdict in "
            << result.in_condition - result.agreeing << " cell(s)\n";
        return kCheckFailed;
    }
    return kOk;
}

// ---------------------------------------------------------------- certify

struct CertifyArgs {
    Parameters p;
    bool have_params = false;
    State s0{1.0, 1.0};
    CertifyOptions opts;
    int trials = 0;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

struct Trial {
    Parameters p;
    State s0;
    std::vector<CheckResult> results;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
    if (!a.have_params && a.trials <= 0) throw UsageError("certify needs --alpha/--beta/--mu or --trials N");
    if (a.have_params) require_w0(a.p);
    if (a.opts.p_max < 2) throw UsageError("--p-max must be >= 2");
    if (a.trials < 0) throw UsageError("--trials must be >= 0");

    std::vector<Trial> trials;
    if (a.have_params) trials.push_back({a.p, a.s0, {}});
    const std::uint64_t seed = resolve_seed(a.seed);
    if (a.trials > 0) {
        out << "seed=" << seed << '\n';
        ParameterSampler sampler(seed);
        for (int i = 0; i < a.trials; ++i) {
            const Parameters p = sampler.draw_w0(0.01);
            trials.push_back({p, sampler.draw_state(0.0, 10.0), {}});
        }
    }

    unsigned threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(trials.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < trials.size(); i = next++) {
            trials[i].results = certify(trials[i].p, trials[i].s0, a.opts);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    bool ok = true;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        const bool pass = all_passed(t.results);
        ok = ok && pass;
        if (trials.size() > 1) out << "# trial " << i << ": " << describe(t.p) << '\n';
        for (const auto& r : t.results) {
            out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        }
        if (!pass) {
            std::ostringstream os;
            os.precision(17);
            os << "reproduce with: certify --alpha " << t.p.alpha << " --beta " << t.p.beta << " --mu " << t.p.mu
               << " --x0 " << t.s0.x << " --y0 " << t.s0.y;
            out << os.str() << '\n';
        }
    }
    out << (ok ? "all certificates passed" : "certificate failure") << '\n';
    return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
    Parameters p;
    State s0;
    int steps = 1000;
    OdeConfig ode;
    OrbitConfig orbit;
    std::string out;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
    const auto rep = validate_parameters(a.p, ValidationMode::general);
    if (!rep.valid()) throw UsageError("invalid parameters: " + rep.message());
    if (!rep.invariance_condition()) {
        throw UsageError("invalid parameters: invariance condition 0<alpha<=1, beta>0, 0<mu<=1 violated");
    }
    if (!(a.s0.x >= 0.0) || !(a.s0.y >= 0.0)) throw UsageError("initial state must be in the quadrant");
    if (a.steps < 1) throw UsageError("--steps must be >= 1");
    OdeConfig unit = a.ode;
    unit.t_end = 1.0;
    try {
        a.ode.validate();
        unit.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    // Side by side: discrete n against continuous t = n.
    std::ostringstream csv;
    csv << "n,x_discrete,y_discrete,x_continuous,y_continuous\n";
    State d = a.s0, c = a.s0;
    for (int n = 0;; ++n) {
        csv << n << ',' << format_real(d.x) << ',' << format_real(d.y) << ',' << format_real(c.x) << ','
            << format_real(c.y) << '\n';
        if (n == a.steps) break;
        d = apply_W(a.p, d);
        if (!(d.x >= 0.0 && d.y >= 0.0)) throw UsageError("discrete iterate left the quadrant");
        c = integrate_ode(a.p, c, unit).back().s;
        c.x = std::max(c.x, 0.0);
        c.y = std::max(c.y, 0.0);
    }
    emit(csv.str(), a.out, out);
    std::ostream& report = (a.out.empty() || a.out == "-") ? err : out;
    report.precision(10);

    std::string discrete_verdict;
    if (a.p.is_case_w0()) {
        const Orbit orbit = iterate_orbit(a.p, a.s0, a.orbit);
        discrete_verdict = std::string(to_string(orbit.verdict));
        report << "discrete: " << discrete_verdict << " after " << orbit.n_steps << " steps (x=" << orbit.final_state.x
               << ", y=" << orbit.final_state.y << ", alpha/mu=" << a.p.alpha / a.p.mu << ")\n";
    } else {
        report << "discrete: general operator, state after " << a.steps << " steps (x=" << d.x << ", y=" << d.y
               << ")\n";
    }

    const double r0 = compute_r0(a.p);
    const State final = integrate_ode(a.p, a.s0, a.ode).back().s;
    std::string continuous_verdict;
    if (r0 <= 1.0) {
        const double dist = std::max(std::abs(final.x), std::abs(final.y));
        continuous_verdict = dist <= a.ode.conv_tol ? "extinction" : "unsettled";
        report << "continuous: r0=" << r0 << " <= 1, " << continuous_verdict << " (distance to origin " << dist
               << " at t=" << a.ode.t_end << ")\n";
    } else if (a.p.d1 > 0.0) {
        const State eq = *positive_equilibrium(a.p);
        const double dist = std::max(std::abs(final.x - eq.x), std::abs(final.y - eq.y));
        continuous_verdict = dist <= a.ode.conv_tol ? "equilibrium" : "unsettled";
        report << "continuous: r0=" << r0 << " > 1, " << continuous_verdict << " at (x0, y0)=(" << eq.x << ", "
               << eq.y << "), distance " << dist << " at t=" << a.ode.t_end << '\n';
    } else {
        continuous_verdict = "persistence";
        report << "continuous: r0=" << r0 << " > 1 with d1=0, the positive-equilibrium formula degenerates; "
               << "state at t=" << a.ode.t_end << " is (" << final.x << ", " << final.y << ")\n";
    }

    if (a.p.d0 == 0.0) {
        const bool coherent = (r0 > 1.0) == (a.p.beta > a.p.mu) && (r0 < 1.0) == (a.p.beta < a.p.mu);
        report << "threshold coherence (sign(r0-1) = sign(beta-mu)): " << (coherent ? "yes" : "no") << '\n';
        if (!discrete_verdict.empty()) {
            const bool both_die = discrete_verdict == "extinction" && continuous_verdict == "extinction";
            const bool both_persist = discrete_verdict == "survival" && continuous_verdict != "extinction";
            report << "qualitative agreement: "
                   << (both_die       ? "both routes report extinction"
                       : both_persist ? "both routes report persistence (discrete x diverges)"
                                      : "routes differ")
                   << '\n';
        }
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-time mosquito population dynamics: simulation and certification"};
    app.name("mosqdyn");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value file mirroring flag names (flags override)");
    };

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "iterate W0 from an initial state");
    add_parameter_flags(simulate, sim.p, true);
    simulate->add_option("--x0", sim.s0.x, "initial larvae")->required();
    simulate->add_option("--y0", sim.s0.y, "initial adults")->required();
    add_orbit_flags(simulate, sim.cfg);
    simulate->add_option("--record-every", sim.cfg.record_every, "store every n-th state")->capture_default_str();
    sim.cfg.max_recorded = 100'000;
    simulate->add_option("--max-records", sim.cfg.max_recorded, "cap on stored states")->capture_default_str();
    simulate->add_option("--out", sim.out, "output file (stdout when omitted)");
    simulate->add_option("--format", sim.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    add_config(simulate);

    Parameters cls_p;
    double cls_tol = 1e-9;
    auto* classify = app.add_subcommand("classify", "spectral type of the origin");
    add_parameter_flags(classify, cls_p, true);
    classify->add_option("--tol", cls_tol, "hyperbolicity band")->capture_default_str();
    add_config(classify);

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "parameter grid: spectral class versus simulated verdict");
    sweep->add_option("--alpha-range", sw.alpha_range, "lo,hi,steps")->delimiter(',')->expected(3);
    sweep->add_option("--beta-range", sw.beta_range, "lo,hi,steps")->delimiter(',')->expected(3);
    sweep->add_option("--mu-range", sw.mu_range, "lo,hi,steps")->delimiter(',')->expected(3);
    sweep->add_option("--d0", sw.spec.d0)->capture_default_str();
    sweep->add_option("--d1", sw.spec.d1)->capture_default_str();
    sweep->add_option("--x0", sw.spec.s0.x)->capture_default_str();
    sweep->add_option("--y0", sw.spec.s0.y)->capture_default_str();
    sweep->add_option("--min-gap", sw.spec.min_gap, "cells with |beta-mu| <= gap are out of condition")
        ->capture_default_str();
    add_orbit_flags(sweep, sw.spec.orbit);
    sweep->add_option("--threads", sw.threads, "worker threads (0 = all cores)")->capture_default_str();
    sweep->add_option("--out", sw.out, "CSV raster")->capture_default_str();
    add_config(sweep);

    CertifyArgs cert;
    auto* certify_cmd = app.add_subcommand("certify", "run the invariant and periodicity certificates");
    add_parameter_flags(certify_cmd, cert.p, false);
    certify_cmd->add_option("--x0", cert.s0.x)->capture_default_str();
    certify_cmd->add_option("--y0", cert.s0.y)->capture_default_str();
    certify_cmd->add_option("--p-max", cert.opts.p_max, "largest period scanned")->capture_default_str();
    certify_cmd->add_option("--trials", cert.trials, "additional random parameter draws")->capture_default_str();
    std::uint64_t seed_value = 0;
    auto* seed_opt = certify_cmd->add_option("--seed", seed_value, "RNG seed (default: MOSQDYN_SEED or built-in)");
    certify_cmd->add_option("--t-grid", cert.opts.t_grid)->capture_default_str();
    certify_cmd->add_option("--two-cycle-grid", cert.opts.two_cycle_grid)->capture_default_str();
    add_orbit_flags(certify_cmd, cert.opts.orbit);
    certify_cmd->add_option("--threads", cert.threads)->capture_default_str();
    add_config(certify_cmd);

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "discrete orbit against the continuous model");
    add_parameter_flags(compare, cmp.p, true);
    compare->add_option("--x0", cmp.s0.x)->required();
    compare->add_option("--y0", cmp.s0.y)->required();
    compare->add_option("--steps", cmp.steps, "discrete steps in the side-by-side table")->capture_default_str();
    compare->add_option("--t-end", cmp.ode.t_end)->capture_default_str();
    compare->add_option("--step", cmp.ode.step, "RK4 step")->capture_default_str();
    compare->add_option("--out", cmp.out, "side-by-side CSV (stdout when omitted)");
    add_config(compare);

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (*simulate) return cmd_simulate(sim, out, err);
        if (*classify) return cmd_classify(cls_p, cls_tol, out);
        if (*sweep) return cmd_sweep(sw, out);
        if (*certify_cmd) {
            cert.have_params = certify_cmd->count("--alpha") + certify_cmd->count("--beta") +
                                   certify_cmd->count("--mu") >
                               0;
            if (*seed_opt) cert.seed = seed_value;
            return cmd_certify(cert, out);
        }
        if (*compare) return cmd_compare(cmp, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
    return kInvalidInput;
}

} // namespace mosqdyn::cli
