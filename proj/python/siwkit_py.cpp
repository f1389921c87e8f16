#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "siwkit/core_model.hpp"
#include "siwkit/design_file.hpp"
#include "siwkit/em_oracle.hpp"
#include "siwkit/error.hpp"
#include "siwkit/filter_design.hpp"
#include "siwkit/q_extraction.hpp"
#include "siwkit/siw_design.hpp"
#include "siwkit/touchstone.hpp"

namespace py = pybind11;
using namespace siwkit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "SIW cavity resonator and filter design toolkit (SI units throughout)";

    py::register_exception<Error>(m, "SiwkitError", PyExc_ValueError);

    m.attr("C0") = constants::c0;

    // core model
    py::class_<Substrate>(m, "Substrate")
        .def(py::init([](double eps_r, double mu_r, double tan_delta, double h) {
                 Substrate s{eps_r, mu_r, tan_delta, h};
                 s.validate();
                 return s;
             }),
             py::arg("eps_r"), py::arg("mu_r") = 1.0, py::arg("tan_delta") = 0.0, py::arg("h") = 500e-6)
        .def_static("preset", [](const std::string& name) { return substrate_preset(name); })
        .def_readwrite("eps_r", &Substrate::eps_r)
        .def_readwrite("mu_r", &Substrate::mu_r)
        .def_readwrite("tan_delta", &Substrate::tan_delta)
        .def_readwrite("h", &Substrate::h);
    m.def("default_substrate", &default_substrate);
    m.def("substrate_preset", &substrate_preset, py::arg("name"));

    py::class_<CavityGeometry>(m, "CavityGeometry")
        .def(py::init([](double w, double l, double d, double p, double probe_w, double probe_l) {
                 CavityGeometry g{w, l, d, p, probe_w, probe_l};
                 g.validate();
                 return g;
             }),
             py::arg("w"), py::arg("l"), py::arg("d"), py::arg("p"), py::arg("probe_w") = 0.0,
             py::arg("probe_l") = 0.0)
        .def_static("from_um", &CavityGeometry::from_um, py::arg("w_um"), py::arg("l_um"), py::arg("d_um"),
                    py::arg("p_um"), py::arg("probe_w_um") = 0.0, py::arg("probe_l_um") = 0.0)
        .def_readwrite("w", &CavityGeometry::w)
        .def_readwrite("l", &CavityGeometry::l)
        .def_readwrite("d", &CavityGeometry::d)
        .def_readwrite("p", &CavityGeometry::p)
        .def_readwrite("probe_w", &CavityGeometry::probe_w)
        .def_readwrite("probe_l", &CavityGeometry::probe_l);

    py::class_<ResonatorDesign>(m, "ResonatorDesign")
        .def(py::init([](Substrate s, CavityGeometry g, std::optional<double> f0) {
                 ResonatorDesign d{s, g, f0};
                 d.validate();
                 return d;
             }),
             py::arg("substrate"), py::arg("geometry"), py::arg("target_f0") = std::nullopt)
        .def_readwrite("substrate", &ResonatorDesign::substrate)
        .def_readwrite("geometry", &ResonatorDesign::geometry)
        .def_readwrite("target_f0", &ResonatorDesign::target_f0);

    py::class_<ValidityRule>(m, "ValidityRule")
        .def_readonly("id", &ValidityRule::id)
        .def_readonly("satisfied", &ValidityRule::satisfied)
        .def_readonly("lhs", &ValidityRule::lhs)
        .def_readonly("rhs", &ValidityRule::rhs)
        .def_readonly("message", &ValidityRule::message)
        .def_readonly("conservative", &ValidityRule::conservative);

    py::class_<ValidityReport>(m, "ValidityReport")
        .def_readonly("frequency", &ValidityReport::frequency)
        .def_readonly("rules", &ValidityReport::rules)
        .def("all_satisfied", &ValidityReport::all_satisfied, py::arg("include_conservative") = false);

    m.def("validate_design", &validate_design);
    m.def("parse_design_file", &parse_design_file);
    m.def("write_design_file", &write_design_file);

    // closed-form design
    py::class_<EffectiveDims>(m, "EffectiveDims")
        .def_readonly("w_eff", &EffectiveDims::w_eff)
        .def_readonly("l_eff", &EffectiveDims::l_eff);
    m.def("effective_dimensions", &effective_dimensions);
    m.def("resonant_frequency", &resonant_frequency, py::arg("substrate"), py::arg("geometry"));
    m.def("synthesize_cavity", &synthesize_cavity, py::arg("target_f0"), py::arg("substrate"), py::arg("d"),
          py::arg("p"), py::arg("aspect") = 1.0);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("value", &SweepRow::value)
        .def_readonly("f101", &SweepRow::f101)
        .def_readonly("valid", &SweepRow::valid);
    m.def("parameter_sweep", &parameter_sweep, py::arg("design"), py::arg("parameter"), py::arg("start"),
          py::arg("stop"), py::arg("steps"));

    // Q extraction
    py::enum_<QMode>(m, "QMode")
        .value("STANDARD", QMode::Standard)
        .value("PAPER_LITERAL", QMode::PaperLiteral);

    py::class_<SParameterTrace>(m, "SParameterTrace")
        .def(py::init<>())
        .def_readwrite("freqs", &SParameterTrace::freqs)
        .def_readwrite("s11", &SParameterTrace::s11)
        .def_readwrite("s21", &SParameterTrace::s21)
        .def_readwrite("s12", &SParameterTrace::s12)
        .def_readwrite("s22", &SParameterTrace::s22)
        .def_readwrite("z0", &SParameterTrace::z0)
        .def("__len__", &SParameterTrace::size);

    py::class_<QReport>(m, "QReport")
        .def_readonly("f0", &QReport::f0)
        .def_readonly("il_db", &QReport::il_db)
        .def_readonly("delta_f", &QReport::delta_f)
        .def_readonly("q_loaded", &QReport::q_loaded)
        .def_readonly("q_external", &QReport::q_external)
        .def_readonly("q_unloaded", &QReport::q_unloaded)
        .def_readonly("mode", &QReport::mode)
        .def("__repr__", [](const QReport& r) { return q_report_to_text(r); });

    m.def("linear_grid", &linear_grid, py::arg("start"), py::arg("stop"), py::arg("points"));
    m.def("synthesize_trace", &synthesize_trace, py::arg("f0"), py::arg("q_loaded"), py::arg("q_unloaded"),
          py::arg("grid"), py::arg("z0") = 50.0);
    m.def(
        "extract_q_report",
        [](const SParameterTrace& t, QMode mode, bool smooth) { return extract_q_report(t, {mode, smooth}); },
        py::arg("trace"), py::arg("mode") = QMode::Standard, py::arg("smooth") = false);
    m.def(
        "unloaded_q",
        [](double ql, double il_db, QMode mode) {
            const auto r = unloaded_q(ql, il_db, mode);
            return py::make_tuple(r.q_unloaded, r.q_external);
        },
        py::arg("q_loaded"), py::arg("il_db"), py::arg("mode") = QMode::Standard);

    // eigenmode oracle
    py::class_<DiscretizedCavity>(m, "DiscretizedCavity")
        .def_readonly("nx", &DiscretizedCavity::nx)
        .def_readonly("ny", &DiscretizedCavity::ny)
        .def_readonly("dx", &DiscretizedCavity::dx)
        .def_readonly("dy", &DiscretizedCavity::dy)
        .def_readonly("via_count", &DiscretizedCavity::via_count)
        .def("unknowns", &DiscretizedCavity::unknowns);

    py::class_<EigenResult>(m, "EigenResult")
        .def_readonly("k_squared", &EigenResult::k_squared)
        .def_readonly("f_oracle", &EigenResult::f_oracle)
        .def_readonly("nx", &EigenResult::nx)
        .def_readonly("ny", &EigenResult::ny)
        .def_readonly("field", &EigenResult::field)
        .def_readonly("iterations", &EigenResult::iterations)
        .def_readonly("residual", &EigenResult::residual);

    m.def("rasterize", &rasterize, py::arg("geometry"), py::arg("substrate"), py::arg("resolution") = 8);
    m.def("rasterize_rectangle", &rasterize_rectangle, py::arg("width"), py::arg("length"), py::arg("intervals"));
    m.def(
        "solve_dominant_mode",
        [](const DiscretizedCavity& c, const Substrate& s, double tol) {
            py::gil_scoped_release release;
            return solve_dominant_mode(c, s, {tol, 500});
        },
        py::arg("cavity"), py::arg("substrate"), py::arg("tol") = 1e-9);
    m.def("analytic_rectangle_frequency", &analytic_rectangle_frequency);
    m.def("export_field", &export_field);

    // filters
    py::enum_<ResponseFamily>(m, "ResponseFamily")
        .value("BUTTERWORTH", ResponseFamily::Butterworth)
        .value("CHEBYSHEV", ResponseFamily::Chebyshev);

    py::class_<FilterSpec>(m, "FilterSpec")
        .def(py::init([](double f0, double fbw, int order, ResponseFamily family, double ripple_db,
                         std::optional<double> qu) {
                 FilterSpec s{f0, fbw, order, family, ripple_db, qu};
                 s.validate();
                 return s;
             }),
             py::arg("f0"), py::arg("fbw"), py::arg("order") = 2, py::arg("family") = ResponseFamily::Butterworth,
             py::arg("ripple_db") = 0.0, py::arg("q_unloaded") = std::nullopt)
        .def_readonly("f0", &FilterSpec::f0)
        .def_readonly("fbw", &FilterSpec::fbw)
        .def_readonly("order", &FilterSpec::order)
        .def_readonly("q_unloaded", &FilterSpec::q_unloaded);

    py::class_<CouplingPlan>(m, "CouplingPlan")
        .def_readonly("g", &CouplingPlan::g)
        .def_readonly("k", &CouplingPlan::k)
        .def_readonly("qe_in", &CouplingPlan::qe_in)
        .def_readonly("qe_out", &CouplingPlan::qe_out)
        .def_readonly("n", &CouplingPlan::n)
        .def_readonly("m", &CouplingPlan::m)
        .def_readonly("cavity", &CouplingPlan::cavity);

    py::class_<ResponseMetrics>(m, "ResponseMetrics")
        .def_readonly("midband_il_db", &ResponseMetrics::midband_il_db)
        .def_readonly("bandwidth_3db", &ResponseMetrics::bandwidth_3db)
        .def_readonly("center", &ResponseMetrics::center);

    py::class_<FilterResponse>(m, "FilterResponse")
        .def_readonly("freqs", &FilterResponse::freqs)
        .def_readonly("s21_db", &FilterResponse::s21_db)
        .def_readonly("s11_db", &FilterResponse::s11_db)
        .def_readonly("metrics", &FilterResponse::metrics);

    py::class_<LayoutSummary>(m, "LayoutSummary")
        .def_readonly("cavity_w", &LayoutSummary::cavity_w)
        .def_readonly("cavity_l", &LayoutSummary::cavity_l)
        .def_readonly("extent_x", &LayoutSummary::extent_x)
        .def_readonly("extent_y", &LayoutSummary::extent_y);

    py::class_<TwoPoleDesign>(m, "TwoPoleDesign")
        .def_readonly("spec", &TwoPoleDesign::spec)
        .def_readonly("plan", &TwoPoleDesign::plan)
        .def_readonly("response", &TwoPoleDesign::response)
        .def_readonly("layout", &TwoPoleDesign::layout);

    m.def("lowpass_prototype", &lowpass_prototype, py::arg("family"), py::arg("n"), py::arg("ripple_db") = 0.0);
    m.def("coupling_plan", &coupling_plan, py::arg("spec"), py::arg("substrate"), py::arg("d"), py::arg("p"));
    m.def("midband_insertion_loss", &midband_insertion_loss);
    m.def("simulate_response", &simulate_response, py::arg("plan"), py::arg("spec"), py::arg("grid"));
    m.def("design_two_pole", &design_two_pole, py::arg("f0"), py::arg("fbw"), py::arg("family"), py::arg("ripple_db"),
          py::arg("substrate"), py::arg("d"), py::arg("p"), py::arg("q_unloaded") = std::nullopt);

    // Touchstone
    py::enum_<DataFormat>(m, "DataFormat")
        .value("RI", DataFormat::RI)
        .value("MA", DataFormat::MA)
        .value("DB", DataFormat::DB);

    py::class_<TouchstoneDocument>(m, "TouchstoneDocument")
        .def_readonly("comments", &TouchstoneDocument::comments)
        .def_readonly("trace", &TouchstoneDocument::trace);

    py::class_<ZParameterTrace>(m, "ZParameterTrace")
        .def_readonly("freqs", &ZParameterTrace::freqs)
        .def_readonly("z11", &ZParameterTrace::z11)
        .def_readonly("z12", &ZParameterTrace::z12)
        .def_readonly("z21", &ZParameterTrace::z21)
        .def_readonly("z22", &ZParameterTrace::z22);

    m.def("parse_touchstone", &parse_touchstone);
    m.def(
        "write_touchstone",
        [](const SParameterTrace& t, DataFormat f) { return write_touchstone(t, f); },
        py::arg("trace"), py::arg("format") = DataFormat::MA);
    m.def("s_to_z", &s_to_z);
}
