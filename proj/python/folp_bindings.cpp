#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "folp/a2.hpp"
#include "folp/cli.hpp"
#include "folp/oracle.hpp"

namespace py = pybind11;
using namespace folp;

namespace {

RedundancyPolicy policy(std::optional<std::uint64_t> k, std::optional<int> max_depth) {
	RedundancyPolicy pol;
	pol.override_k = k;
	pol.max_depth = max_depth;
	return pol;
}

py::dict witness_dict(const OpenInterpretation& w) {
	py::dict d;
	d["universe"] = w.universe;
	std::vector<std::string> atoms;
	for (const auto& a : w.atoms) atoms.push_back(to_string(a));
	d["atoms"] = atoms;
	return d;
}

py::dict result_dict(const SearchResult& r, const Program& p) {
	py::dict d;
	d["verdict"] = to_string(r.verdict);
	d["blocking_free"] = r.blocking_free;
	d["steps"] = r.stats.steps;
	d["nodes"] = r.stats.nodes_created;
	if (r.witness && r.blocking_free) d["witness"] = witness_dict(induced_interpretation(*r.witness, p));
	std::vector<std::string> trace;
	for (const auto& e : r.trace) trace.push_back(e.node);
	d["trace"] = trace;
	return d;
}

Program prepared(const std::string& text) {
	Program p = parse_program(text);
	const auto v = validate_folp(p);
	if (!v.empty()) throw ValidationError("line " + std::to_string(v.front().line) + ": " + v.front().condition);
	return eliminate_constraints(p);
}

}  // namespace

PYBIND11_MODULE(_folp, m) {
	m.doc() = "Forest logic program satisfiability under open answer set semantics";

	py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
	py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
	py::register_exception<CacheError>(m, "CacheError", PyExc_RuntimeError);
	py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

	m.def(
	    "validate",
	    [](const std::string& text) {
		    std::vector<std::string> out;
		    for (const auto& v : validate_folp(parse_program(text))) out.push_back("line " + std::to_string(v.line) + ": " + v.condition);
		    return out;
	    },
	    py::arg("text"), "Violations of the forest shape conditions (empty when valid).");

	m.def(
	    "check",
	    [](const std::string& text, const std::string& pred, const std::string& alg, std::optional<std::uint64_t> k,
	       std::optional<int> max_depth) {
		    const Program p = prepared(text);
		    const auto pol = policy(k, max_depth);
		    if (alg == "a1") return result_dict(check_sat_a1(p, pred, pol), p);
		    if (alg == "a2") return result_dict(check_sat_a2(p, pred, compile_units(p), pol), p);
		    throw std::invalid_argument("alg must be 'a1' or 'a2'");
	    },
	    py::arg("text"), py::arg("pred"), py::arg("alg") = "a1", py::arg("k") = py::none(),
	    py::arg("max_depth") = py::none());

	m.def(
	    "compile_units",
	    [](const std::string& text) {
		    const Program p = prepared(text);
		    const auto c = compile_units(p);
		    py::dict d;
		    d["distinct"] = c.stats.distinct;
		    d["final"] = c.stats.final_units;
		    d["redundant"] = c.stats.redundant;
		    d["retained"] = c.stats.retained;
		    d["cache"] = save_cache_text(c, p);
		    return d;
	    },
	    py::arg("text"));

	m.def(
	    "bounded_sat",
	    [](const std::string& text, const std::string& pred, std::size_t max_size) -> py::object {
		    const auto w = bounded_sat(parse_program(text), pred, max_size);
		    if (!w) return py::none();
		    return witness_dict(*w);
	    },
	    py::arg("text"), py::arg("pred"), py::arg("max_size") = 3);

	m.def(
	    "run_cli",
	    [](const std::vector<std::string>& args) {
		    std::ostringstream out, err;
		    const int code = cli::run(args, out, err);
		    return py::make_tuple(code, out.str(), err.str());
	    },
	    py::arg("args"), "Runs the command line front end; returns (exit code, stdout, stderr).");
}
