// Python bindings for the core operations: curve construction, period
// matrices, theta evaluation, characteristics, the closed-form genus-2
// reference, and the batch suite driver.

#include <znt/characteristics.hpp>
#include <znt/curve.hpp>
#include <znt/kernels.hpp>
#include <znt/periods.hpp>
#include <znt/theta.hpp>
#include <znt/thomae.hpp>

#include "suites.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace znt;

namespace {

RationalCharacteristic make_char(const std::vector<std::pair<long long, long long>>& delta,
                                 const std::vector<std::pair<long long, long long>>& eps) {
    if (delta.size() != eps.size()) throw ConfigInvalid("delta/epsilon length mismatch");
    RationalCharacteristic ch((int)delta.size());
    for (size_t i = 0; i < delta.size(); ++i) {
        ch.delta[i] = mod1(Rat(delta[i].first, delta[i].second));
        ch.epsilon[i] = mod1(Rat(eps[i].first, eps[i].second));
    }
    return ch;
}

std::vector<std::pair<long long, long long>> rat_vec(const std::vector<Rat>& v) {
    std::vector<std::pair<long long, long long>> out;
    for (const auto& r : v) out.push_back({r.numerator(), r.denominator()});
    return out;
}

}  // namespace

PYBIND11_MODULE(znthomae, mod) {
    mod.doc() = "period matrices, theta constants and Szego kernels on cyclic covers "
                "mu^N = p(lambda) q(lambda)^(N-1)";
    mod.attr("__version__") = kVersion;

    py::register_exception<ConfigInvalid>(mod, "ConfigInvalid", PyExc_ValueError);
    py::register_exception<NumericError>(mod, "NumericError", PyExc_ArithmeticError);

    py::class_<CurveSpec>(mod, "CurveSpec")
        .def(py::init<int, int, std::vector<double>>(), py::arg("N"), py::arg("m"),
             py::arg("branch_points"))
        .def_property_readonly("N", &CurveSpec::N)
        .def_property_readonly("m", &CurveSpec::m)
        .def_property_readonly("genus", &CurveSpec::genus)
        .def_property_readonly("branch_points", &CurveSpec::branch_points)
        .def("mu_roots", &CurveSpec::mu_roots)
        .def("track", [](const CurveSpec& s, cplx a, cplx b, cplx mu) {
            return s.track(a, b, mu);
        });

    py::class_<PeriodData>(mod, "PeriodData")
        .def_property_readonly("pi_matrix",
                               [](const PeriodData& p) { return p.pi_matrix; })
        .def_property_readonly("a_matrix", [](const PeriodData& p) { return p.a_full; })
        .def_property_readonly("b_matrix", [](const PeriodData& p) { return p.b_full; })
        .def_property_readonly("a_blocks",
                               [](const PeriodData& p) { return p.blocks.a_blocks; })
        .def_property_readonly("b_blocks",
                               [](const PeriodData& p) { return p.blocks.b_blocks; })
        .def_property_readonly("asymmetry",
                               [](const PeriodData& p) { return p.asymmetry; });

    mod.def(
        "period_matrix",
        [](const CurveSpec& spec, double tol) {
            QuadratureConfig cfg;
            cfg.target_tol = tol;
            return period_matrix(spec, cfg);
        },
        py::arg("spec"), py::arg("tol") = 1e-10);

    mod.def(
        "theta",
        [](const Vec& z, const Mat& Pi,
           const std::vector<std::pair<long long, long long>>& delta,
           const std::vector<std::pair<long long, long long>>& eps) {
            auto tv = theta(z, Pi, make_char(delta, eps));
            return py::make_tuple(tv.value, tv.gradient, tv.hessian);
        },
        py::arg("z"), py::arg("pi"), py::arg("delta"), py::arg("epsilon"),
        "theta with rational characteristic; returns (value, gradient, hessian)");

    mod.def("branch_point_characteristic", [](const CurveSpec& spec, int k) {
        auto ch = branch_point_characteristic(spec, k);
        return py::make_tuple(rat_vec(ch.delta), rat_vec(ch.epsilon));
    });

    mod.def(
        "em_characteristic",
        [](const CurveSpec& spec, const std::vector<int>& I1, const std::vector<int>& J1) {
            Partition p;
            p.I1 = I1;
            p.J1 = J1;
            auto ch = em_characteristic(spec, p);
            return py::make_tuple(rat_vec(ch.delta), rat_vec(ch.epsilon));
        },
        py::arg("spec"), py::arg("I1"), py::arg("J1"));

    mod.def("hutchinson_pi", [](double t) { return hutchinson_reference(t).Pi_closed; });

    mod.def(
        "verify_thomae",
        [](const CurveSpec& spec, const std::vector<int>& I1, const std::vector<int>& J1) {
            Partition p;
            p.I1 = I1;
            p.J1 = J1;
            auto pd = period_matrix(spec);
            auto rep = verify_thomae(spec, pd, p);
            return py::make_tuple(rep.lhs, rep.rhs, rep.rel_error, rep.phase_error);
        },
        py::arg("spec"), py::arg("I1"), py::arg("J1"),
        "returns (theta^{4N}, closed-form RHS, rel_error, phase_error)");

    mod.def(
        "run_report",
        [](const std::string& config_text) {
            RunConfig cfg = parse_config(json::parse(config_text));
            return emit_json(run_report(cfg));
        },
        py::arg("config_json"),
        "run the verification suites for a JSON config string; returns the JSON report");
}
