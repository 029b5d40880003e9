#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "jinxin/config.hpp"
#include "jinxin/errors.hpp"
#include "jinxin/harness.hpp"
#include "jinxin/kernels.hpp"
#include "jinxin/model.hpp"
#include "jinxin/solvers.hpp"
#include "jinxin/symbol.hpp"

namespace py = pybind11;
using namespace jinxin;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const Array& a) {
    if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

py::array_t<std::complex<double>> to_array(const Mat2c& m) {
    py::array_t<std::complex<double>> out({2, 2});
    auto r = out.mutable_unchecked<2>();
    r(0, 0) = m.m11;
    r(0, 1) = m.m12;
    r(1, 0) = m.m21;
    r(1, 1) = m.m22;
    return out;
}

py::array_t<double> frames(const std::vector<std::vector<double>>& f, std::size_t n) {
    py::array_t<double> out({f.size(), n});
    auto r = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = f[i][j];
    return out;
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict d;
    static const char* kNames[] = {"cd", "bgk", "parabolic"};
    d["representation"] = kNames[static_cast<int>(t.representation)];
    d["times"] = to_array(t.times);
    d["first"] = frames(t.first, t.grid.size());
    if (t.representation != Representation::Scalar) d["second"] = frames(t.second, t.grid.size());
    d["dt"] = t.dt;
    d["max_imag_residue"] = t.max_imag_residue;
    return d;
}

py::dict study_dict(const StudyResult& r) {
    py::dict d;
    d["label"] = r.label;
    d["pass"] = r.pass;
    py::dict fits;
    for (const NamedFit& f : r.fits) {
        py::dict e;
        e["exponent"] = f.fit.exponent;
        e["t_lo"] = f.fit.t_lo;
        e["t_hi"] = f.fit.t_hi;
        e["residual"] = f.fit.residual;
        e["n_points"] = f.fit.n_points;
        fits[py::str(f.name)] = e;
    }
    d["fits"] = fits;
    py::dict checks;
    for (const Check& c : r.checks) {
        py::dict e;
        e["value"] = c.value;
        e["target"] = c.target;
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        checks[py::str(c.name)] = e;
    }
    d["checks"] = checks;
    py::dict diag;
    for (const auto& [k, v] : r.diagnostics) diag[py::str(k)] = v;
    d["diagnostics"] = diag;
    if (r.epsilon_slope) d["epsilon_slope"] = *r.epsilon_slope;
    std::ostringstream csv;
    write_study_csv(csv, r);
    d["csv"] = csv.str();
    if (r.profile) {
        std::ostringstream prof;
        write_table_csv(prof, *r.profile);
        d["profile_csv"] = prof.str();
    }
    return d;
}

SolverConfig solver_config(double dt, double t_final, std::vector<double> record, bool dealias, double blowup) {
    SolverConfig c;
    c.dt = dt;
    c.t_final = t_final;
    c.record_times = std::move(record);
    c.dealias = dealias;
    c.blowup_factor = blowup;
    return c;
}

}  // namespace

PYBIND11_MODULE(_jinxin, m) {
    m.doc() = "Diffusively scaled Jin-Xin relaxation system";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<Nonlinearity>(m, "Nonlinearity")
        .def_static("none", &Nonlinearity::none)
        .def_static("quadratic", &Nonlinearity::quadratic, py::arg("c"))
        .def_static("polynomial", &Nonlinearity::polynomial, py::arg("coeffs"))
        .def_readwrite("name", &Nonlinearity::name)
        .def_readwrite("coeffs", &Nonlinearity::coeffs)
        .def("__call__", &Nonlinearity::value)
        .def("is_zero", &Nonlinearity::is_zero);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double eps, double lambda, double a, Nonlinearity h) {
                 ModelParams p;
                 p.epsilon = eps;
                 p.lambda = lambda;
                 p.a = a;
                 p.h = std::move(h);
                 p.validate();
                 return p;
             }),
             py::arg("epsilon") = 0.1, py::arg("lam") = 1.0, py::arg("a") = 0.0,
             py::arg("h") = Nonlinearity::quadratic(0.5))
        .def_readwrite("epsilon", &ModelParams::epsilon)
        .def_readwrite("lam", &ModelParams::lambda)
        .def_readwrite("a", &ModelParams::a)
        .def_readwrite("h", &ModelParams::h)
        .def("reduced_speed", &ModelParams::reduced_speed)
        .def("with_epsilon", &ModelParams::with_epsilon);

    py::class_<Grid>(m, "Grid")
        .def(py::init<std::size_t, double>(), py::arg("n"), py::arg("length"))
        .def_property_readonly("n", &Grid::size)
        .def_property_readonly("length", &Grid::length)
        .def_property_readonly("dx", &Grid::dx)
        .def("nodes", [](const Grid& g) { return to_array(g.nodes()); })
        .def("xi", &Grid::xi);

    m.def("gaussian", [](const Grid& g, double amp, double sigma) { return to_array(gaussian(g, amp, sigma)); },
          py::arg("grid"), py::arg("amplitude") = 0.05, py::arg("sigma") = 1.0);
    m.def(
        "well_prepared_data",
        [](const Array& u0, const ModelParams& p, const Grid& g) {
            const StateUV s = well_prepared_data(to_vec(u0), p, g);
            return py::make_tuple(to_array(s.u), to_array(s.v));
        },
        py::arg("u0"), py::arg("params"), py::arg("grid"));
    m.def(
        "uv_to_cd",
        [](const Array& u, const Array& v, const ModelParams& p) {
            const StateCD w = uv_to_cd({to_vec(u), to_vec(v)}, p);
            return py::make_tuple(to_array(w.w1), to_array(w.w2));
        },
        py::arg("u"), py::arg("v"), py::arg("params"));
    m.def(
        "cd_to_uv",
        [](const Array& w1, const Array& w2, const ModelParams& p) {
            const StateUV s = cd_to_uv({to_vec(w1), to_vec(w2)}, p);
            return py::make_tuple(to_array(s.u), to_array(s.v));
        },
        py::arg("w1"), py::arg("w2"), py::arg("params"));

    m.def("symbol_E", [](double xi, const ModelParams& p) { return to_array(symbol_E(xi, p).entries); },
          py::arg("xi"), py::arg("params"));
    m.def("matexp_E", [](double xi, double t, const ModelParams& p) { return to_array(matexp_E(xi, t, p).entries); },
          py::arg("xi"), py::arg("t"), py::arg("params"));
    m.def(
        "eigenvalues_E",
        [](double xi, const ModelParams& p) {
            const EigenData e = eigenvalues_E(xi, p);
            return py::make_tuple(e.lam1, e.lam2);
        },
        py::arg("xi"), py::arg("params"));
    m.def(
        "kernel_split",
        [](double xi, double t, const ModelParams& p) {
            const KernelSplit k = kernel_split(xi, t, p);
            py::dict d;
            d["gamma"] = to_array(k.gamma_hat);
            d["K"] = to_array(k.k_hat);
            d["Khyp"] = to_array(k.khyp_hat);
            d["R"] = to_array(k.r_hat);
            return d;
        },
        py::arg("xi"), py::arg("t"), py::arg("params"));

    m.def("default_time_step", &default_time_step, py::arg("params"), py::arg("grid"));
    m.def(
        "linear_propagate",
        [](const Array& w1, const Array& w2, double t, const ModelParams& p, const Grid& g) {
            const StateCD w = linear_propagate({to_vec(w1), to_vec(w2)}, t, p, g);
            return py::make_tuple(to_array(w.w1), to_array(w.w2));
        },
        py::arg("w1"), py::arg("w2"), py::arg("t"), py::arg("params"), py::arg("grid"));
    m.def(
        "nonlinear_jinxin_solve",
        [](const Array& w1, const Array& w2, const ModelParams& p, const Grid& g, double dt, double t_final,
           std::vector<double> record, bool dealias, double blowup) {
            const SolverConfig c = solver_config(dt, t_final, std::move(record), dealias, blowup);
            return trajectory_dict(nonlinear_jinxin_solve({to_vec(w1), to_vec(w2)}, c, p, g));
        },
        py::arg("w1"), py::arg("w2"), py::arg("params"), py::arg("grid"), py::arg("dt"), py::arg("t_final"),
        py::arg("record") = std::vector<double>{}, py::arg("dealias") = true, py::arg("blowup_factor") = 1e6);
    m.def(
        "bgk_solve",
        [](const Array& f1, const Array& f2, const ModelParams& p, const Grid& g, double dt, double t_final,
           std::vector<double> record, bool dealias, double blowup) {
            const SolverConfig c = solver_config(dt, t_final, std::move(record), dealias, blowup);
            return trajectory_dict(bgk_solve({to_vec(f1), to_vec(f2)}, c, p, g));
        },
        py::arg("f1"), py::arg("f2"), py::arg("params"), py::arg("grid"), py::arg("dt"), py::arg("t_final"),
        py::arg("record") = std::vector<double>{}, py::arg("dealias") = true, py::arg("blowup_factor") = 1e6);
    m.def(
        "parabolic_solve",
        [](const Array& u0, const ModelParams& p, const Grid& g, double dt, double t_final,
           std::vector<double> record, bool corrected) {
            const SolverConfig c = solver_config(dt, t_final, std::move(record), true, 1e6);
            return trajectory_dict(parabolic_solve(to_vec(u0), c, p, g, corrected));
        },
        py::arg("u0"), py::arg("params"), py::arg("grid"), py::arg("dt"), py::arg("t_final"),
        py::arg("record") = std::vector<double>{}, py::arg("corrected") = false);

    m.def("l1_norm", [](const Array& u, const Grid& g) { return l1_norm(to_vec(u), g); });
    m.def("l2_norm", [](const Array& u, const Grid& g) { return l2_norm(to_vec(u), g); });
    m.def("sobolev_norm", [](const Array& u, const Grid& g, int k) { return sobolev_norm(to_vec(u), g, k); });
    m.def(
        "fit_decay",
        [](const Array& t, const Array& v, double lo, double hi) {
            const RateFit f = fit_decay(to_vec(t), to_vec(v), lo, hi);
            return py::make_tuple(f.exponent, f.residual);
        },
        py::arg("times"), py::arg("values"), py::arg("t_lo"), py::arg("t_hi"));

    // Studies take a configuration file body; unspecified keys keep their defaults.
    m.def(
        "decay_study",
        [](const std::string& config) {
            std::istringstream in(config);
            RunConfig c = parse_config(in, "<string>");
            c.decay.data = c.data;
            return study_dict(decay_study(c.model, c.grid(), c.decay));
        },
        py::arg("config") = "");
    m.def(
        "epsilon_study",
        [](const std::string& config) {
            std::istringstream in(config);
            RunConfig c = parse_config(in, "<string>");
            c.epsilon.data = c.data;
            return study_dict(epsilon_study(c.model, c.epsilon_grid(), c.epsilon));
        },
        py::arg("config") = "");
    m.def(
        "bgk_check",
        [](const std::string& config) {
            std::istringstream in(config);
            RunConfig c = parse_config(in, "<string>");
            c.bgk.data = c.data;
            return study_dict(bgk_check(c.model, c.grid(), c.bgk));
        },
        py::arg("config") = "");
}
