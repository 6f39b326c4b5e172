#include "folp/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "folp/a2.hpp"
#include "folp/bench.hpp"
#include "folp/oracle.hpp"

namespace folp::cli {

namespace {

using json = nlohmann::json;  // std::map objects: keys come out sorted
namespace fs = std::filesystem;

struct InternalError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct Config {
	std::string program;
	std::string pred;
	std::string alg = "a1";
	std::string format = "text";
	std::string cache;
	bool auto_cache = false;
	bool deterministic = false;  // engines are single-task already; accepted for scripts
	std::optional<std::uint64_t> k;
	std::optional<int> max_depth;
	std::size_t max_size = 3;
	std::uint64_t max_steps = SearchLimits{}.max_steps;
	std::optional<long> timeout_ms;
	bool synthetic = false;
	int levels = 4;
	int width = 5;
	std::size_t queries = 5;
};

RedundancyPolicy policy_of(const Config& c) {
	RedundancyPolicy pol;
	pol.override_k = c.k;
	pol.max_depth = c.max_depth;
	return pol;
}

SearchLimits limits_of(const Config& c) {
	SearchLimits lim;
	lim.max_steps = c.max_steps;
	if (c.timeout_ms) lim.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(*c.timeout_ms);
	return lim;
}

std::string read_file(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw std::runtime_error("cannot read " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

Program validated(const std::string& text) {
	Program p = parse_program(text);
	const auto violations = validate_folp(p);
	if (!violations.empty()) {
		std::string msg = "not a forest logic program:";
		for (const auto& v : violations) msg += "\n  line " + std::to_string(v.line) + ": " + v.condition;
		throw ValidationError(msg);
	}
	return p;
}

void require_pred(const Config& c) {
	if (c.pred.empty()) throw std::invalid_argument("--pred is required");
}

json stats_json(const SearchStats& s) {
	return {{"backtracks", s.backtracks},       {"choice_points", s.choice_points},
	        {"cycle_clashes", s.cycle_clashes}, {"depth_cap", s.depth_cap},
	        {"matches", s.matches},             {"max_depth", s.max_depth},
	        {"nodes_created", s.nodes_created}, {"redundancy_clashes", s.redundancy_clashes},
	        {"steps", s.steps},                 {"unit_reuse", s.unit_reuse},
	        {"units_tried", s.units_tried}};
}

json witness_json(const OpenInterpretation& w) {
	json atoms = json::array();
	for (const auto& a : w.atoms) atoms.push_back(to_string(a));
	return {{"atoms", atoms}, {"universe", w.universe}};
}

int exit_of(Verdict v) {
	switch (v) {
		case Verdict::Sat: return kSat;
		case Verdict::Unsat: return kUnsat;
		case Verdict::Unknown: return kUnknown;
	}
	return kUnknown;
}

struct EngineRun {
	std::string alg;
	SearchResult result;
	double ms = 0;
};

UnitCompilation units_for(const Config& c, const Program& p) {
	if (!c.cache.empty() && fs::exists(c.cache)) return load_cache(c.cache, p);
	if (!c.auto_cache) {
		throw std::invalid_argument(c.cache.empty() ? "a2 needs --cache or --auto-cache"
		                                            : "cache file not found: " + c.cache);
	}
	UnitCompilation u = compile_units(p, limits_of(c));
	if (!c.cache.empty()) save_cache(u, p, c.cache);
	return u;
}

std::vector<EngineRun> run_engines(const Config& c, const Program& p) {
	if (c.alg != "a1" && c.alg != "a2" && c.alg != "both") throw std::invalid_argument("unknown --alg " + c.alg);
	std::vector<EngineRun> runs;
	const auto pol = policy_of(c);
	if (c.alg != "a2") {
		const auto t = std::chrono::steady_clock::now();
		auto r = check_sat_a1(p, c.pred, pol, limits_of(c));
		runs.push_back({"a1", std::move(r), std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count()});
	}
	if (c.alg != "a1") {
		const auto t = std::chrono::steady_clock::now();
		const auto units = units_for(c, p);
		auto r = check_sat_a2(p, c.pred, units, pol, limits_of(c));
		runs.push_back({"a2", std::move(r), std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count()});
	}
	if (runs.size() == 2 && runs[0].result.verdict != runs[1].result.verdict) {
		throw InternalError("engines disagree: a1 " + to_string(runs[0].result.verdict) + ", a2 " +
		                    to_string(runs[1].result.verdict));
	}
	return runs;
}

json run_json(const Config& c, const EngineRun& r, const Program& p) {
	json j = {{"alg", r.alg},
	          {"blocking_free", r.result.blocking_free},
	          {"command", "check"},
	          {"pred", c.pred},
	          {"program", c.program},
	          {"stats", stats_json(r.result.stats)},
	          {"verdict", to_string(r.result.verdict)}};
	if (!c.deterministic) j["ms"] = r.ms;
	json trace = json::array();
	for (const auto& e : r.result.trace) {
		trace.push_back({{"depth", e.depth}, {"equal_ancestors", e.equal_ancestors}, {"kind", e.kind}, {"node", e.node}});
	}
	j["trace"] = trace;
	if (r.result.witness && r.result.blocking_free) j["witness"] = witness_json(induced_interpretation(*r.result.witness, p));
	return j;
}

int cmd_check(const Config& c, std::ostream& out) {
	require_pred(c);
	const Program p = eliminate_constraints(validated(read_file(c.program)));
	const auto runs = run_engines(c, p);
	for (const auto& r : runs) {
		if (c.format == "json") {
			out << run_json(c, r, p).dump() << "\n";
		} else if (c.format == "dot") {
			if (r.result.witness) out << to_dot(*r.result.witness, p);
		} else {
			const auto& s = r.result.stats;
			out << r.alg << ": " << to_string(r.result.verdict) << "  steps=" << s.steps << " nodes=" << s.nodes_created
			    << " depth=" << s.max_depth;
			if (r.alg == "a2") out << " units_tried=" << s.units_tried << " matches=" << s.matches;
			out << "\n";
			for (const auto& e : r.result.trace) {
				out << "  redundancy clash at " << e.node << " (" << e.equal_ancestors << " equal ancestors)\n";
			}
			if (r.result.witness) {
				if (r.result.blocking_free) {
					out << format_witness(induced_interpretation(*r.result.witness, p));
				} else {
					out << "  witness has blocked nodes (infinite model)\n";
				}
			}
		}
	}
	return exit_of(runs.front().result.verdict);
}

int cmd_compile(const Config& c, std::ostream& out) {
	const Program p = eliminate_constraints(validated(read_file(c.program)));
	const UnitCompilation u = compile_units(p, limits_of(c));
	if (!c.cache.empty()) save_cache(u, p, c.cache);
	const auto& s = u.stats;
	if (c.format == "json") {
		out << json{{"cache", c.cache},          {"command", "compile-units"}, {"distinct", s.distinct},
		            {"enumerated", s.enumerated}, {"final", s.final_units},     {"fingerprint", u.fingerprint},
		            {"program", c.program},       {"redundant", s.redundant},   {"retained", s.retained}}
		            .dump()
		    << "\n";
	} else {
		out << "enumerated " << s.enumerated << ", distinct " << s.distinct << ", final " << s.final_units
		    << ", redundant " << s.redundant << ", retained " << s.retained << "\n";
		if (c.cache.empty()) out << save_cache_text(u, p);
	}
	return 0;
}

int cmd_verify(const Config& c, std::ostream& out) {
	require_pred(c);
	const Program original = validated(read_file(c.program));
	const Program p = eliminate_constraints(original);
	Config v = c;
	v.auto_cache = true;
	const auto runs = run_engines(v, p);
	const auto oracle = bounded_sat(original, c.pred, c.max_size);

	json matrix = {{"command", "verify"}, {"oracle", oracle ? "SAT" : "none"}, {"oracle_max_size", c.max_size},
	               {"pred", c.pred},      {"program", c.program}};
	bool consistent = true;
	for (const auto& r : runs) {
		json e = {{"verdict", to_string(r.result.verdict)}};
		if (oracle && r.result.verdict != Verdict::Sat) consistent = false;
		if (r.result.verdict == Verdict::Sat) {
			if (r.result.blocking_free) {
				const bool ok = is_answer_set(original, induced_interpretation(*r.result.witness, p));
				e["witness_verified"] = ok;
				consistent = consistent && ok;
			} else {
				e["witness_verified"] = nullptr;
				e["notice"] = "witness has blocked nodes; oracle check skipped";
			}
		}
		matrix[r.alg] = e;
	}
	matrix["consistent"] = consistent;
	if (c.format == "json") {
		out << matrix.dump() << "\n";
	} else {
		out << "oracle (size <= " << c.max_size << "): " << (oracle ? "SAT" : "none") << "\n";
		for (const auto& r : runs) {
			const auto& e = matrix[r.alg];
			out << r.alg << ": " << e["verdict"].get<std::string>();
			if (e.contains("witness_verified")) {
				out << (e["witness_verified"].is_null() ? "  witness not checked (blocked nodes)"
				                                        : e["witness_verified"].get<bool>() ? "  witness is an answer set"
				                                                                            : "  witness REJECTED");
			}
			out << "\n";
		}
		out << (consistent ? "consistent" : "INCONSISTENT") << "\n";
	}
	if (!consistent) return kInternalError;
	return exit_of(runs.front().result.verdict);
}

json row_json(const BenchRow& r, bool timings) {
	json j = {{"a1_nodes", r.a1_nodes},       {"a1_verdicts", r.a1_verdicts}, {"a2_nodes", r.a2_nodes},
	          {"a2_verdicts", r.a2_verdicts}, {"agree", r.agree()},           {"program", r.program},
	          {"queries", r.queries},         {"timeout", r.timeout},         {"units", r.units}};
	if (timings) {
		j["a1_ms"] = r.a1_ms;
		j["a2_compile_ms"] = r.compile_ms;
		j["a2_query_ms"] = r.a2_ms;
		j["a2_total_ms"] = r.a2_total_ms();
	}
	return j;
}

int cmd_bench(const Config& c, std::ostream& out) {
	std::vector<BenchRow> rows;
	const auto budget = std::chrono::milliseconds(c.timeout_ms.value_or(30'000));
	const auto pol = policy_of(c);
	if (c.synthetic) {
		const Program p = parse_program(synthetic_program(c.levels, c.width));
		rows.push_back(bench_program("synthetic-" + std::to_string(c.levels) + "x" + std::to_string(c.width), p,
		                             synthetic_queries(c.levels, c.queries), pol, budget));
	} else {
		if (c.program.empty()) throw std::invalid_argument("bench needs a corpus directory or --synthetic");
		if (!fs::is_directory(c.program)) throw std::invalid_argument("not a directory: " + c.program);
		std::vector<fs::path> files;
		for (const auto& e : fs::directory_iterator(c.program)) {
			if (e.is_regular_file() && e.path().extension() == ".folp") files.push_back(e.path());
		}
		std::sort(files.begin(), files.end());
		for (const auto& f : files) {
			const std::string text = read_file(f.string());
			const Program original = validated(text);
			const Program p = eliminate_constraints(original);
			auto qs = c.pred.empty() ? bench_queries(text, original) : std::vector<std::string>{c.pred};
			rows.push_back(bench_program(f.filename().string(), p, qs, pol, budget));
		}
	}
	for (const auto& r : rows) {
		if (c.format == "json") {
			out << row_json(r, !c.deterministic).dump() << "\n";
		} else {
			out << r.program << "  a1 " << r.a1_ms << " ms  a2 " << r.compile_ms << "+" << r.a2_ms << " ms  units "
			    << r.units << "  nodes " << r.a1_nodes << "/" << r.a2_nodes << (r.timeout ? "  TIMEOUT" : "")
			    << (r.agree() ? "" : "  DISAGREE") << "\n";
		}
	}
	return 0;
}

int cmd_export_dot(const Config& c, std::ostream& out) {
	require_pred(c);
	const Program p = eliminate_constraints(validated(read_file(c.program)));
	Config one = c;
	if (one.alg == "both") one.alg = "a1";
	const auto runs = run_engines(one, p);
	const auto& r = runs.front().result;
	if (r.witness) {
		out << to_dot(*r.witness, p);
	} else {
		// nothing complete to draw: show the initial structure
		const A1Rules rules(p);
		out << to_dot(rules.initial(*p.predicate_id(c.pred), std::nullopt), p);
	}
	return exit_of(r.verdict);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
	CLI::App app{"Satisfiability checking for forest logic programs under open answer set semantics", "folp"};
	app.require_subcommand(1);
	Config c;

	auto common = [&](CLI::App* sub, bool needs_program) {
		auto* prog = sub->add_option("program", c.program, "program file");
		if (needs_program) prog->required();
		sub->add_option("--format", c.format, "text | json | dot")->check(CLI::IsMember({"text", "json", "dot"}));
		sub->add_option("--k", c.k, "redundancy bound override");
		sub->add_option("--max-depth", c.max_depth, "node depth limit (negative answers become UNKNOWN)");
		sub->add_option("--max-steps", c.max_steps, "search step budget");
		sub->add_option("--timeout-ms", c.timeout_ms, "wall-clock budget");
		sub->add_flag("--deterministic", c.deterministic, "single task, no timings in machine output");
	};
	auto engine = [&](CLI::App* sub) {
		sub->add_option("--pred", c.pred, "unary predicate to check");
		sub->add_option("--alg", c.alg, "a1 | a2 | both")->check(CLI::IsMember({"a1", "a2", "both"}));
		sub->add_option("--cache", c.cache, "unit cache file for a2");
		sub->add_flag("--auto-cache", c.auto_cache, "compile units when no cache is given");
	};

	auto* check = app.add_subcommand("check", "decide satisfiability of a unary predicate");
	common(check, true);
	engine(check);
	auto* compile = app.add_subcommand("compile-units", "compile and prune unit completion structures");
	common(compile, true);
	compile->add_option("--cache,-o", c.cache, "output cache file");
	auto* verify = app.add_subcommand("verify", "cross-check the engines against the bounded oracle");
	common(verify, true);
	engine(verify);
	verify->add_option("--max-size", c.max_size, "oracle universe size limit");
	auto* bench = app.add_subcommand("bench", "time both engines on a directory of programs");
	common(bench, false);
	bench->add_option("--pred", c.pred, "query for every program (default: '% query:' line or all heads)");
	bench->add_flag("--synthetic", c.synthetic, "use the built-in synthetic family instead of a directory");
	bench->add_option("--levels", c.levels, "synthetic: predicate levels");
	bench->add_option("--width", c.width, "synthetic: rules per level");
	bench->add_option("--queries", c.queries, "synthetic: number of queries");
	auto* dot = app.add_subcommand("export-dot", "print the final completion structure as Graphviz");
	common(dot, true);
	engine(dot);

	std::vector<std::string> rev(args.rbegin(), args.rend());
	try {
		app.parse(rev);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e, out, err);
		return code == 0 ? 0 : kInputError;
	}

	try {
		if (*check) return cmd_check(c, out);
		if (*compile) return cmd_compile(c, out);
		if (*verify) return cmd_verify(c, out);
		if (*bench) return cmd_bench(c, out);
		if (*dot) return cmd_export_dot(c, out);
	} catch (const ResourceLimit& e) {
		err << "budget exhausted: " << e.what() << "\n";
		return kBudget;
	} catch (const InternalError& e) {
		err << "internal error: " << e.what() << "\n";
		return kInternalError;
	} catch (const std::exception& e) {
		err << "error: " << e.what() << "\n";
		return kInputError;
	}
	return kInputError;
}

}  // namespace folp::cli
