#include "stochmatch/errors.hpp"
#include "stochmatch/experiment.hpp"
#include "stochmatch/graph.hpp"
#include "stochmatch/mwm.hpp"
#include "stochmatch/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace stochmatch;

namespace {

WeightedGraph make_graph(int n, const std::vector<std::tuple<int, int, std::int64_t>>& edges,
                         std::int64_t denominator) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (const auto& [u, v, w] : edges) es.push_back(Edge{u, v, w});
    return WeightedGraph(n, std::move(es), denominator);
}

std::vector<std::tuple<int, int, std::int64_t>> edge_list(const WeightedGraph& g) {
    std::vector<std::tuple<int, int, std::int64_t>> out;
    for (const auto& e : g.edges()) out.emplace_back(e.u, e.v, e.w);
    return out;
}

template <class F>
std::string run_json(const std::string& spec_json, F&& f) {
    const ExperimentSpec spec = spec_from_json(spec_json);
    Report r;
    {
        py::gil_scoped_release release;
        r = f(spec);
    }
    return report_to_json(r);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic matching sparsifier core";
    m.attr("__version__") = STOCHMATCH_VERSION;

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<NoEligiblePairs>(m, "NoEligiblePairs", PyExc_RuntimeError);

    py::class_<WeightedGraph>(m, "Graph")
        .def(py::init(&make_graph), py::arg("n"), py::arg("edges"),
             py::arg("denominator") = kDefaultWeightDenominator,
             "edges are (u, v, scaled weight) triples")
        .def_property_readonly("n", &WeightedGraph::n)
        .def_property_readonly("m", &WeightedGraph::m)
        .def_property_readonly("denominator", &WeightedGraph::denominator)
        .def("edges", &edge_list)
        .def("weight", [](const WeightedGraph& g, int i) { return g.to_double(g.edge(i).w); })
        .def("to_text", [](const WeightedGraph& g) {
            std::ostringstream out;
            write_graph(out, g);
            return out.str();
        })
        .def("__repr__", [](const WeightedGraph& g) {
            return "<Graph n=" + std::to_string(g.n()) + " m=" + std::to_string(g.m()) + ">";
        });

    m.def("parse_graph", [](const std::string& text, std::int64_t denominator) {
        std::istringstream in(text);
        return parse_graph(in, denominator);
    }, py::arg("text"), py::arg("denominator") = kDefaultWeightDenominator);
    m.def("load_graph", &load_graph, py::arg("path"), py::arg("denominator") = kDefaultWeightDenominator);
    m.def("generate_graph", [](const std::string& spec, std::uint64_t seed, std::int64_t denominator) {
        return generate_graph(spec, RngStream::make(seed, StreamPurpose::Generator, 0), denominator);
    }, py::arg("spec"), py::arg("seed") = 1, py::arg("denominator") = kDefaultWeightDenominator,
          "same graph the harness builds from this generator and seed");

    m.def("mwm", [](const WeightedGraph& g, std::optional<std::vector<int>> active) {
        const EdgeSet a = active ? normalized(*active) : all_edges(g);
        const Matching mt = mwm(g, a);
        return py::make_tuple(mt.edges, g.to_double(mt.weight));
    }, py::arg("graph"), py::arg("active") = py::none(),
          "maximum weight matching: (edge indices, weight)");

    m.def("default_spec", [] { return spec_to_json(ExperimentSpec{}); });
    m.def("run_sparsify", [](const std::string& s) { return run_json(s, run_sparsify); }, py::arg("spec_json"));
    m.def("run_audit", [](const std::string& s) {
        return run_json(s, [](const ExperimentSpec& spec) { return run_validity_audit(spec); });
    }, py::arg("spec_json"));
    m.def("run_ratio_sweep", [](const std::string& s) {
        return run_json(s, [](const ExperimentSpec& spec) {
            return run_ratio_sweep(spec, spec.R_values.empty() ? std::vector<std::uint64_t>{1, 4, 16, 64}
                                                               : spec.R_values);
        });
    }, py::arg("spec_json"));
    m.def("run_independence", [](const std::string& s) {
        return run_json(s, [](const ExperimentSpec& spec) { return run_independence_test(spec, spec.lambda_hops); });
    }, py::arg("spec_json"));
    m.def("run_vimatch_demo", [](const std::string& s) { return run_json(s, run_vimatch_demo); },
          py::arg("spec_json"));
}
