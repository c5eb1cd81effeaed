#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "itd/distfit.hpp"
#include "itd/intraday.hpp"
#include "itd/multifractal.hpp"
#include "itd/pipeline.hpp"
#include "itd/scaling.hpp"
#include "itd/stats_core.hpp"
#include "itd/synth.hpp"
#include "itd/tickdata.hpp"

namespace py = pybind11;
using namespace itd;

namespace {

Detrender make_detrender(const std::string& method, int order, double theta) {
    if (method == "dfa") return DfaDetrender{order};
    if (method == "dma") return DmaDetrender{theta};
    throw UsageError("method must be 'dfa' or 'dma'");
}

}  // namespace

PYBIND11_MODULE(_itd, m) {
    m.doc() = "intertrade duration analysis toolkit";

    py::register_exception<UsageError>(m, "UsageError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    py::class_<FluctuationCurve>(m, "FluctuationCurve")
        .def_readonly("scales", &FluctuationCurve::scales)
        .def_readonly("F", &FluctuationCurve::F)
        .def_readonly("H", &FluctuationCurve::H)
        .def_readonly("H_ci", &FluctuationCurve::H_ci)
        .def_readonly("E_rms", &FluctuationCurve::E_rms)
        .def_readonly("method", &FluctuationCurve::method);

    py::class_<MultifractalResult>(m, "MultifractalResult")
        .def_readonly("q", &MultifractalResult::q)
        .def_readonly("h", &MultifractalResult::h)
        .def_readonly("tau", &MultifractalResult::tau)
        .def_readonly("alpha", &MultifractalResult::alpha)
        .def_readonly("f_alpha", &MultifractalResult::f_alpha)
        .def_readonly("e_rms", &MultifractalResult::e_rms)
        .def_readonly("concave", &MultifractalResult::concave)
        .def_readonly("h_monotone", &MultifractalResult::h_monotone)
        .def_readonly("detrender", &MultifractalResult::detrender)
        .def("spectrum_width", [](const MultifractalResult& r) { return spectrum_width(r); });

    py::class_<WeibullFit>(m, "WeibullFit")
        .def_readonly("alpha", &WeibullFit::alpha)
        .def_readonly("beta", &WeibullFit::beta)
        .def_readonly("loglik", &WeibullFit::loglik)
        .def_readonly("n", &WeibullFit::n)
        .def_readonly("grad_norm", &WeibullFit::grad_norm);

    py::class_<QExpFit>(m, "QExpFit")
        .def_readonly("a", &QExpFit::a)
        .def_readonly("g0", &QExpFit::g0)
        .def_readonly("gamma", &QExpFit::gamma)
        .def_readonly("sse", &QExpFit::sse);

    m.def("gen_fgn", &gen_fgn, py::arg("hurst"), py::arg("n"), py::arg("seed"));
    m.def("gen_binomial_cascade", &gen_binomial_cascade, py::arg("p"), py::arg("k"));
    m.def("binomial_tau", &binomial_tau, py::arg("p"), py::arg("q"));
    m.def("binomial_hq", &binomial_hq, py::arg("p"), py::arg("q"));
    m.def("shuffled", &shuffled, py::arg("series"), py::arg("seed"));
    m.def("gen_iid_gaussian", &gen_iid_gaussian, py::arg("n"), py::arg("seed"));
    m.def("gen_iid_exponential", &gen_iid_exponential, py::arg("rate"), py::arg("n"),
          py::arg("seed"));
    m.def("gen_iid_weibull", &gen_iid_weibull, py::arg("alpha"), py::arg("beta"), py::arg("n"),
          py::arg("seed"));
    m.def("gen_iid_qexp", &gen_iid_qexp, py::arg("g0"), py::arg("gamma"), py::arg("n"),
          py::arg("seed"));

    m.def(
        "estimate_hurst",
        [](const std::vector<double>& series, const std::string& method, int order, double theta,
           int s_min, int scales, int threads) {
            auto grid = default_scale_grid(series.size(), s_min, scales);
            return estimate_hurst(series, grid, make_detrender(method, order, theta), threads);
        },
        py::arg("series"), py::arg("method") = "dfa", py::arg("order") = 1,
        py::arg("theta") = 0.0, py::arg("s_min") = 20, py::arg("scales") = 30,
        py::arg("threads") = 1);

    m.def(
        "generalized_hurst",
        [](const std::vector<double>& series, const std::string& method, int order, double theta,
           int s_min, int scales, std::vector<double> q_grid, int threads) {
            auto grid = default_scale_grid(series.size(), s_min, scales);
            if (q_grid.empty()) q_grid = default_q_grid();
            return generalized_hurst(series, grid, q_grid,
                                     make_detrender(method, order, theta), threads);
        },
        py::arg("series"), py::arg("method") = "dfa", py::arg("order") = 1,
        py::arg("theta") = 0.0, py::arg("s_min") = 20, py::arg("scales") = 30,
        py::arg("q_grid") = std::vector<double>{}, py::arg("threads") = 1);

    m.def("exponent_relations", &exponent_relations, py::arg("H"));

    m.def(
        "fit_weibull",
        [](const std::vector<double>& values, const std::string& zero_policy) {
            return fit_weibull_mle(scale_by_std(values, parse_zero_policy(zero_policy)));
        },
        py::arg("values"), py::arg("zero_policy") = "exclude");

    m.def(
        "fit_qexp",
        [](const std::vector<double>& values, const std::string& zero_policy,
           int bins_per_decade) {
            return fit_qexp_nls(
                log_binned_pdf(scale_by_std(values, parse_zero_policy(zero_policy)),
                               bins_per_decade));
        },
        py::arg("values"), py::arg("zero_policy") = "exclude", py::arg("bins_per_decade") = 10);

    m.def(
        "run_study",
        [](const std::string& config_json, const std::string& out_dir) {
            return run_study(config_json, out_dir).to_json();
        },
        py::arg("config_json"), py::arg("out_dir"));
}
