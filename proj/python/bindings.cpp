#include "mosqdyn/errors.hpp"
#include "mosqdyn/model.hpp"
#include "mosqdyn/reference_ode.hpp"
#include "mosqdyn/simplex_map.hpp"
#include "mosqdyn/spectral.hpp"
#include "mosqdyn/trajectory.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mosqdyn;

namespace {

py::tuple as_tuple(State s) { return py::make_tuple(s.x, s.y); }

State as_state(const std::pair<double, double>& s) { return {s.first, s.second}; }

} // namespace

PYBIND11_MODULE(_mosqdyn, m) {
    m.doc() = "Discrete-time mosquito population model: iteration, spectra and certificates";

    py::register_exception<VerificationError>(m, "VerificationError", PyExc_RuntimeError);
    py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);

    py::class_<Parameters>(m, "Parameters")
        .def(py::init([](double alpha, double beta, double mu, double d0, double d1) {
                 return Parameters{alpha, beta, mu, d0, d1};
             }),
             py::arg("alpha"), py::arg("beta"), py::arg("mu"), py::arg("d0") = 0.0, py::arg("d1") = 0.0)
        .def_readwrite("alpha", &Parameters::alpha)
        .def_readwrite("beta", &Parameters::beta)
        .def_readwrite("mu", &Parameters::mu)
        .def_readwrite("d0", &Parameters::d0)
        .def_readwrite("d1", &Parameters::d1)
        .def_property_readonly("is_case_w0", &Parameters::is_case_w0)
        .def("__repr__", [](const Parameters& p) {
            return "Parameters(alpha=" + std::to_string(p.alpha) + ", beta=" + std::to_string(p.beta) +
                   ", mu=" + std::to_string(p.mu) + ", d0=" + std::to_string(p.d0) + ", d1=" + std::to_string(p.d1) +
                   ")";
        });

    m.def(
        "validate_parameters",
        [](const Parameters& p, const std::string& mode) {
            if (mode != "general" && mode != "w0") throw py::value_error("mode must be 'general' or 'w0'");
            const auto r = validate_parameters(p, mode == "w0" ? ValidationMode::w0 : ValidationMode::general);
            py::dict d;
            d["valid"] = r.valid();
            d["invariance_condition"] = r.invariance_condition();
            d["d_terms_zero"] = r.d_terms_zero;
            d["beta_ne_mu"] = r.beta_ne_mu;
            d["problems"] = r.problems;
            return d;
        },
        py::arg("p"), py::arg("mode") = "w0");

    m.def("apply_W", [](const Parameters& p, std::pair<double, double> s) { return as_tuple(apply_W(p, as_state(s))); });
    m.def("apply_W0",
          [](const Parameters& p, std::pair<double, double> s) { return as_tuple(apply_W0(p, as_state(s))); });
    m.def("continuous_rhs", [](const Parameters& p, std::pair<double, double> s) {
        const Rate r = continuous_rhs(p, as_state(s));
        return py::make_tuple(r.dx, r.dy);
    });

    m.def("eigenvalues", &eigenvalues);
    m.def("jacobian_at_origin", &jacobian_at_origin);
    m.def(
        "classify_origin",
        [](const Parameters& p, double tol) {
            const auto r = classify_origin(p, tol);
            py::dict d;
            d["jacobian"] = r.jacobian;
            d["lambda1"] = r.lambda1;
            d["lambda2"] = r.lambda2;
            d["classification"] = std::string(to_string(r.classification));
            return d;
        },
        py::arg("p"), py::arg("tol") = 1e-9);
    m.def("find_fixed_points_w0", [](const Parameters& p) {
        py::list out;
        for (const State& s : find_fixed_points_w0(p)) out.append(as_tuple(s));
        return out;
    });

    m.def(
        "iterate_orbit",
        [](const Parameters& p, std::pair<double, double> s0, std::int64_t max_iters, double conv_tol,
           double div_threshold, std::int64_t record_every) {
            OrbitConfig cfg;
            cfg.max_iters = max_iters;
            cfg.conv_tol = conv_tol;
            cfg.div_threshold = div_threshold;
            cfg.record_every = record_every;
            Orbit o;
            {
                py::gil_scoped_release release;
                o = iterate_orbit(p, as_state(s0), cfg);
            }
            py::dict d;
            d["verdict"] = std::string(to_string(o.verdict));
            d["n_steps"] = o.n_steps;
            d["y_limit_estimate"] = o.y_limit_estimate;
            d["final_state"] = as_tuple(o.final_state);
            d["steps"] = o.steps;
            py::list states;
            for (const State& s : o.states) states.append(as_tuple(s));
            d["states"] = states;
            py::dict mon;
            mon["y_bound_violations"] = o.monitors.y_bound_violations;
            mon["lemma2_violations"] = o.monitors.lemma2_violations;
            mon["sum_identity_max_err"] = o.monitors.sum_identity_max_err;
            mon["n0_estimate"] = o.monitors.n0_estimate;
            d["monitors"] = mon;
            return d;
        },
        py::arg("p"), py::arg("s0"), py::arg("max_iters") = 2'000'000'000, py::arg("conv_tol") = 1e-6,
        py::arg("div_threshold") = 1e3, py::arg("record_every") = 1);

    m.def("apply_U", [](const Parameters& p, std::pair<double, double> s) { return as_tuple(apply_U(p, as_state(s))); });
    m.def("apply_T", &apply_T);
    m.def("check_T_range", &check_T_range, py::arg("p"), py::arg("grid_n") = 10'000);
    m.def("two_periodic_certificate", [](const Parameters& p) {
        const auto c = two_periodic_certificate(p);
        return py::make_tuple(c.A, c.B, c.C, c.signs_ok);
    });
    m.def(
        "scan_periodic_points",
        [](const Parameters& p, int p_max, int grid_n) { return certificate_to_json(scan_periodic_points(p, p_max, grid_n)); },
        py::arg("p"), py::arg("p_max") = 8, py::arg("grid_n") = 10'000,
        "Returns the certificate as a JSON string; raises VerificationError on spurious roots.");

    m.def("compute_r0", &compute_r0);
    m.def("positive_equilibrium", [](const Parameters& p) -> py::object {
        const auto eq = positive_equilibrium(p);
        if (!eq) return py::none();
        return as_tuple(*eq);
    });
    m.def(
        "integrate_ode",
        [](const Parameters& p, std::pair<double, double> s0, double step, double t_end) {
            OdeConfig cfg;
            cfg.step = step;
            cfg.t_end = t_end;
            const auto path = integrate_ode(p, as_state(s0), cfg);
            py::list out;
            for (const auto& ts : path) out.append(py::make_tuple(ts.t, ts.s.x, ts.s.y));
            return out;
        },
        py::arg("p"), py::arg("s0"), py::arg("step") = 0.01, py::arg("t_end") = 500.0);
}
