#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wecsat/describing_function.hpp"
#include "wecsat/errors.hpp"
#include "wecsat/mismatch.hpp"
#include "wecsat/time_domain.hpp"
#include "wecsat/wec_model.hpp"

namespace py = pybind11;
using namespace wecsat;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Impedance mismatch, describing-function saturation and WEC simulation";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
    py::register_exception<AlgebraicLoopError>(m, "AlgebraicLoopError", base.ptr());
    py::register_exception<WindowingError>(m, "WindowingError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::enum_<Amplitude>(m, "Amplitude")
        .value("voltage", Amplitude::voltage)
        .value("current", Amplitude::current);

    py::class_<TheveninSource>(m, "TheveninSource")
        .def(py::init([](Complex v, Complex z) { return TheveninSource{v, z}; }), py::arg("v_th"), py::arg("z_th"))
        .def_readwrite("v_th", &TheveninSource::v_th)
        .def_readwrite("z_th", &TheveninSource::z_th)
        .def_property_readonly("alpha", &TheveninSource::alpha);

    py::class_<MatchedBaseline>(m, "MatchedBaseline")
        .def_readonly("p_matched", &MatchedBaseline::p_matched)
        .def_readonly("v_peak_matched", &MatchedBaseline::v_peak_matched)
        .def_readonly("i_peak_matched", &MatchedBaseline::i_peak_matched);

    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def_readonly("z", &OperatingPoint::z)
        .def_readonly("gamma", &OperatingPoint::gamma)
        .def_readonly("power_ratio", &OperatingPoint::power_ratio)
        .def_readonly("v_ratio", &OperatingPoint::v_ratio)
        .def_readonly("i_ratio", &OperatingPoint::i_ratio)
        .def_readonly("load_power_ratio", &OperatingPoint::load_power_ratio);

    py::class_<ParetoPoint>(m, "ParetoPoint")
        .def_readonly("power_ratio", &ParetoPoint::power_ratio)
        .def_readonly("v_ratio", &ParetoPoint::v_ratio)
        .def_readonly("i_ratio", &ParetoPoint::i_ratio);

    m.def("matched_baseline", &matched_baseline, py::arg("source"));
    m.def("gamma_from_z", &gamma_from_z, py::arg("z"));
    m.def("z_from_gamma", &z_from_gamma, py::arg("gamma"));
    m.def("power_ratio", &power_ratio, py::arg("gamma"));
    m.def("load_power_ratio", &load_power_ratio, py::arg("gamma"), py::arg("alpha"));
    m.def("amplitude_ratio", &amplitude_ratio, py::arg("gamma"), py::arg("alpha"), py::arg("which"));
    m.def("optimal_angle", &optimal_angle, py::arg("gamma_mag"), py::arg("alpha"), py::arg("which"));
    m.def("gamma_for_amplitude_target", &gamma_for_amplitude_target, py::arg("target_ratio"), py::arg("alpha"),
          py::arg("which"));
    m.def("operating_point_from_z", &operating_point_from_z, py::arg("z"), py::arg("alpha"));
    m.def("pareto_front", &pareto_front, py::arg("alpha"), py::arg("n_points") = 201);

    py::class_<WecPlant>(m, "WecPlant")
        .def(py::init<>())
        .def_readwrite("m", &WecPlant::m)
        .def_readwrite("a_added", &WecPlant::a_added)
        .def_readwrite("b_h", &WecPlant::b_h)
        .def_readwrite("k_h", &WecPlant::k_h)
        .def_readwrite("g_ratio", &WecPlant::g_ratio)
        .def_readwrite("b_d", &WecPlant::b_d)
        .def_readwrite("k_d", &WecPlant::k_d)
        .def_readwrite("k_t", &WecPlant::k_t)
        .def_readwrite("r_w", &WecPlant::r_w)
        .def_readwrite("l_w", &WecPlant::l_w)
        .def_readwrite("p_poles", &WecPlant::p_poles)
        .def_readwrite("omega", &WecPlant::omega)
        .def_readwrite("f_e", &WecPlant::f_e)
        .def_readwrite("j_density", &WecPlant::j_density)
        .def_readwrite("k_wavenumber", &WecPlant::k_wavenumber)
        .def_readwrite("g0", &WecPlant::g0)
        .def("validate", &WecPlant::validate)
        .def("thevenin_impedance", py::overload_cast<double>(&WecPlant::thevenin_impedance, py::const_),
             py::arg("w"));

    py::class_<NondimGroups>(m, "NondimGroups")
        .def(py::init([](double r, double d, double a, double l) { return NondimGroups{r, d, a, l}; }),
             py::arg("r_cal") = 0.0, py::arg("d_cal") = 1.0, py::arg("alpha_m") = 0.0, py::arg("l_cal") = 0.0)
        .def_readwrite("r_cal", &NondimGroups::r_cal)
        .def_readwrite("d_cal", &NondimGroups::d_cal)
        .def_readwrite("alpha_m", &NondimGroups::alpha_m)
        .def_readwrite("l_cal", &NondimGroups::l_cal);

    m.def("with_haskind_excitation", &with_haskind_excitation, py::arg("plant"), py::arg("phase") = 0.0);
    m.def("thevenin_from_plant", &thevenin_from_plant, py::arg("plant"));
    m.def("nondim_from_plant", &nondim_from_plant, py::arg("plant"));
    m.def("matched_power", &matched_power, py::arg("groups"), py::arg("j_density"), py::arg("k_wavenumber"),
          py::arg("g0") = 1);
    m.def("alpha_from_nondim", &alpha_from_nondim, py::arg("groups"));

    m.def("saturation_factor", &saturation_factor, py::arg("n"), py::arg("i_script"));

    py::class_<HarmonicTerm>(m, "HarmonicTerm")
        .def_readonly("n", &HarmonicTerm::n)
        .def_readonly("current", &HarmonicTerm::current)
        .def_readonly("load_voltage", &HarmonicTerm::load_voltage)
        .def_readonly("power", &HarmonicTerm::power);

    py::class_<SaturationSolution>(m, "SaturationSolution")
        .def_readonly("i_max", &SaturationSolution::i_max)
        .def_readonly("i_temp", &SaturationSolution::i_temp)
        .def_readonly("i_script", &SaturationSolution::i_script)
        .def_readonly("f_sat1", &SaturationSolution::f_sat1)
        .def_readonly("harmonics", &SaturationSolution::harmonics)
        .def_readonly("p_total", &SaturationSolution::p_total)
        .def_readonly("iterations", &SaturationSolution::iterations);

    m.def(
        "solve_operating_point",
        [](const WecPlant& plant, double i_max, int n_harmonics) {
            SaturationOptions opts;
            opts.n_harmonics = n_harmonics;
            return solve_operating_point(plant, i_max, opts);
        },
        py::arg("plant"), py::arg("i_max"), py::arg("n_harmonics") = 9);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("p_avg", &SimResult::p_avg)
        .def_readonly("harmonic_currents", &SimResult::harmonic_currents)
        .def_readonly("peak_current", &SimResult::peak_current)
        .def_readonly("x_amp", &SimResult::x_amp)
        .def_readonly("converged", &SimResult::converged)
        .def_readonly("periods_run", &SimResult::periods_run);

    m.def(
        "simulate",
        [](const WecPlant& plant, Complex z_c, double i_max, int steps_per_period, int n_periods) {
            SimConfig cfg;
            cfg.steps_per_period = steps_per_period;
            cfg.n_periods = n_periods;
            cfg.transient_periods = std::min(cfg.transient_periods, n_periods - 1);
            py::gil_scoped_release release;
            return simulate(plant, z_c, i_max, cfg);
        },
        py::arg("plant"), py::arg("z_c"), py::arg("i_max") = INFINITY, py::arg("steps_per_period") = 2000,
        py::arg("n_periods") = 40);
}
