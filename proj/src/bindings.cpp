#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arspec/errors.hpp"
#include "arspec/outliers.hpp"
#include "arspec/panel.hpp"
#include "arspec/rng.hpp"
#include "arspec/schedule.hpp"
#include "arspec/spectral.hpp"
#include "arspec/tridiagonal.hpp"

namespace py = pybind11;
using namespace arspec;

PYBIND11_MODULE(_arspec, m) {
    m.doc() = "Spectral analysis of AR(1) structural-change precision matrices";

    py::register_exception<numerical_error>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<degenerate_configuration_error>(m, "DegenerateConfigurationError",
                                                           PyExc_ValueError);
    py::register_exception<estimation_failure>(m, "EstimationFailure", PyExc_RuntimeError);

    // ---- model -----------------------------------------------------------
    py::class_<ChangeSegment>(m, "ChangeSegment")
        .def(py::init([](long k, long h, double eps) { return ChangeSegment{k, h, eps}; }),
             py::arg("k"), py::arg("h"), py::arg("eps"))
        .def_readonly("k", &ChangeSegment::k)
        .def_readonly("h", &ChangeSegment::h)
        .def_readonly("eps", &ChangeSegment::eps);

    py::class_<CoefficientSchedule>(m, "CoefficientSchedule")
        .def(py::init<double>(), py::arg("rho"))
        .def(py::init<double, std::vector<ChangeSegment>>(), py::arg("rho"), py::arg("segments"))
        .def_property_readonly("rho", [](const CoefficientSchedule& s) { return s.rho(); })
        .def("coefficient_at", &CoefficientSchedule::coefficient_at, py::arg("t"))
        .def(
            "to_json",
            [](const CoefficientSchedule& s, double sigma2) { return schedule_to_json(s, sigma2); },
            py::arg("sigma2") = 1.0);

    py::class_<VarianceSegment>(m, "VarianceSegment")
        .def(py::init([](long k, long h, double xi) { return VarianceSegment{k, h, xi}; }),
             py::arg("k"), py::arg("h"), py::arg("xi"))
        .def_readonly("k", &VarianceSegment::k)
        .def_readonly("h", &VarianceSegment::h)
        .def_readonly("xi", &VarianceSegment::xi);

    py::class_<VarianceSchedule>(m, "VarianceSchedule")
        .def(py::init<double, std::vector<VarianceSegment>>(), py::arg("sigma2"),
             py::arg("segments"))
        .def("variance_at", &VarianceSchedule::variance_at, py::arg("t"));

    py::class_<PanelData>(m, "PanelData")
        .def_readonly("B", &PanelData::B)
        .def_readonly("n", &PanelData::n)
        .def_readonly("series", &PanelData::series);

    m.def("simulate_path", &simulate_path, py::arg("schedule"), py::arg("n"),
          py::arg("sigma2") = 1.0, py::arg("seed") = 12345);
    m.def("simulate_panel", &simulate_panel, py::arg("schedule"), py::arg("n"), py::arg("B"),
          py::arg("sigma2") = 1.0, py::arg("seed") = 12345);
    m.def("substream_seed", &substream_seed, py::arg("master"), py::arg("stream"));

    // ---- precision matrices ---------------------------------------------
    py::class_<SymTridiagonal>(m, "SymTridiagonal")
        .def_readonly("diag", &SymTridiagonal::diag)
        .def_readonly("off", &SymTridiagonal::off)
        .def("n", &SymTridiagonal::n);

    m.def("precision_matrix", &precision_matrix, py::arg("schedule"), py::arg("n"),
          py::arg("sigma2") = 1.0);
    m.def("perturbed_null_precision", &perturbed_null_precision, py::arg("rho"), py::arg("n"));
    m.def("hetero_precision", &hetero_precision, py::arg("rho"), py::arg("variances"),
          py::arg("n"));

    // ---- spectra ---------------------------------------------------------
    m.def(
        "eigenvalues",
        [](const SymTridiagonal& T) { return eigenvalues_symtridiag(T).eigenvalues; },
        py::arg("T"));
    m.def("eigenvalues_range", &eigenvalues_range, py::arg("T"), py::arg("ilo"), py::arg("ihi"),
          py::arg("tol") = 1e-12, "Eigenvalues with 1-based indices ilo..ihi in ascending order");
    m.def("eigenvector", &eigenvector_symtridiag, py::arg("T"), py::arg("eigenvalue"));
    m.def("closed_form_eigenpair", &perturbed_eigenpair_closed_form, py::arg("rho"), py::arg("n"),
          py::arg("k"));
    m.def("support_bounds", &support_bounds, py::arg("rho"));
    m.def(
        "asd_cdf", [](double rho, double t) { return asd_cdf(SpectralLaw(rho), t); },
        py::arg("rho"), py::arg("t"));
    m.def(
        "stieltjes", [](double rho, double z) { return stieltjes(SpectralLaw(rho), z); },
        py::arg("rho"), py::arg("z"));
    m.def(
        "asd_moment", [](double rho, int k) { return asd_moment(SpectralLaw(rho), k); },
        py::arg("rho"), py::arg("k"));

    // ---- outliers --------------------------------------------------------
    py::class_<OutlierSet>(m, "OutlierSet")
        .def_readonly("left", &OutlierSet::left)
        .def_readonly("right", &OutlierSet::right)
        .def("empty", &OutlierSet::empty)
        .def("size", &OutlierSet::size);

    py::class_<BracketInterval>(m, "BracketInterval")
        .def_readonly("lo", &BracketInterval::lo)
        .def_readonly("hi", &BracketInterval::hi);

    py::class_<BracketReport>(m, "BracketReport")
        .def_readonly("p", &BracketReport::p)
        .def_readonly("q", &BracketReport::q)
        .def_readonly("left_intervals", &BracketReport::left_intervals)
        .def_readonly("right_intervals", &BracketReport::right_intervals)
        .def_readonly("upper_bound", &BracketReport::upper_bound);

    m.def("f_transform", &f_transform, py::arg("rho"), py::arg("x"));
    m.def("f_inverse", &f_inverse, py::arg("rho"), py::arg("z"));
    m.def("single_scm_outliers", &single_scm_outliers, py::arg("rho"), py::arg("eps"),
          py::arg("sigma2") = 1.0);
    m.def("interval_scm_outliers", &interval_scm_outliers, py::arg("rho"), py::arg("eps"),
          py::arg("h"), py::arg("tol") = 1e-10);
    m.def("general_scm_outliers", &general_scm_outliers, py::arg("schedule"),
          py::arg("tol") = 1e-10);
    m.def("bracket_intervals", &bracket_intervals, py::arg("rho"), py::arg("eps"), py::arg("h"));
    m.def("identify_magnitudes", &identify_magnitudes, py::arg("rho"), py::arg("outliers"));

    py::class_<BreakPointGuess>(m, "BreakPointGuess")
        .def_readonly("k_from_min", &BreakPointGuess::k_from_min)
        .def_readonly("k_from_max", &BreakPointGuess::k_from_max)
        .def_readonly("localized_min", &BreakPointGuess::localized_min)
        .def_readonly("localized_max", &BreakPointGuess::localized_max);

    m.def("locate_break_heuristic", &locate_break_heuristic, py::arg("T"));

    // ---- panel estimation ------------------------------------------------
    py::class_<EstimationConfig>(m, "EstimationConfig")
        .def(py::init<>())
        .def_static("known_count", &EstimationConfig::known_count, py::arg("left"),
                    py::arg("right"))
        .def_readwrite("lambda_c", &EstimationConfig::lambda_c)
        .def_readwrite("lambda_", &EstimationConfig::lambda)
        .def("resolve_lambda", &EstimationConfig::resolve_lambda, py::arg("n"), py::arg("B"));

    py::class_<DetectionReport>(m, "DetectionReport")
        .def_readonly("rho_hat", &DetectionReport::rho_hat)
        .def_readonly("outliers", &DetectionReport::outliers_hat)
        .def_readonly("hausdorff", &DetectionReport::hausdorff)
        .def_readonly("mae", &DetectionReport::mae)
        .def_readonly("lambda_", &DetectionReport::lambda)
        .def("to_json", &DetectionReport::to_json);

    m.def("yule_walker_rho", &yule_walker_rho, py::arg("panel"));
    m.def("hausdorff_distance", &hausdorff_distance, py::arg("X"), py::arg("Y"));
    m.def("detect_outliers", &detect_outliers, py::arg("panel"), py::arg("config"),
          py::arg("truth") = nullptr);
}
