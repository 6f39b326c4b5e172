// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "fixtures.hpp"
#include "folp/a2.hpp"
#include "folp/bench.hpp"
#include "folp/oracle.hpp"

using namespace folp;
using Clock = std::chrono::steady_clock;

namespace {

// pinned limits
constexpr double kOrganizationSeconds = 5;
constexpr double kSupportChainSeconds = 30;
constexpr double kCorpusSeconds = 600;
constexpr std::uint64_t kCorpusSeed = 2;
constexpr std::size_t kCorpusSize = 50;
constexpr std::uint64_t kCorpusK = 2;
constexpr std::size_t kOracleSize = 3;
constexpr double kBenchSlack = 1.0;  // A2 total may be at most this multiple of A1 total

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
	bool pass = true;
	std::string detail;
	void fail(const std::string& why) {
		if (pass) detail.clear();
		pass = false;
		if (!detail.empty()) detail += "; ";
		detail += why;
	}
};

OpenInterpretation organization_model() {
	return {{"x", "a", "b"},
	        {{"rmember", {"a"}}, {"rmember", {"b"}}, {"smember", {"x"}}, {"support", {"x", "a"}}, {"support", {"x", "b"}}}};
}

Outcome organization() {
	Outcome o;
	const auto t = Clock::now();
	const Program original = testing::sample("organization");
	const Program p = eliminate_constraints(original);
	const auto units = compile_units(p);
	const auto r1 = check_sat_a1(p, "smember");
	const auto r2 = check_sat_a2(p, "smember", units);
	for (const auto* r : {&r1, &r2}) {
		const char* alg = r == &r1 ? "a1" : "a2";
		if (r->verdict != Verdict::Sat) {
			o.fail(std::string(alg) + " verdict " + to_string(r->verdict));
			continue;
		}
		if (!r->blocking_free) {
			o.fail(std::string(alg) + " witness has blocked nodes");
			continue;
		}
		const auto m = induced_interpretation(*r->witness, p);
		if (!equal_modulo_anonymous(m, organization_model(), p)) o.fail(std::string(alg) + " witness differs from the expected model");
		if (!is_answer_set(original, m)) o.fail(std::string(alg) + " witness rejected by the oracle");
	}
	const double s = seconds_since(t);
	if (s >= kOrganizationSeconds) o.fail("took " + std::to_string(s) + " s");
	if (o.pass) o.detail = "both SAT, witness matches and is an answer set, " + std::to_string(s) + " s";
	return o;
}

Outcome support_chain() {
	Outcome o;
	const auto t = Clock::now();
	const Program p = testing::sample("support_chain");
	const auto k = RedundancyPolicy{}.k(p);
	if (k != 5) o.fail("k = " + std::to_string(k));
	const auto r1 = check_sat_a1(p, "smember");
	const auto r2 = check_sat_a2(p, "smember", compile_units(p));
	if (r1.verdict != Verdict::Unsat) o.fail("a1 " + to_string(r1.verdict));
	if (r2.verdict != Verdict::Unsat) o.fail("a2 " + to_string(r2.verdict));
	// the sixth node of the chain x, x.1, ... has five equal-content ancestors
	if (r2.trace.empty()) {
		o.fail("a2 trace is empty");
	} else if (r2.trace.front().node != "x.1.1.1.1.1" || r2.trace.front().equal_ancestors != 5) {
		o.fail("a2 clash at " + r2.trace.front().node);
	}
	if (bounded_sat(p, "smember", kOracleSize)) o.fail("oracle found a model");
	const double s = seconds_since(t);
	if (s >= kSupportChainSeconds) o.fail("took " + std::to_string(s) + " s");
	if (o.pass) o.detail = "both UNSAT, k = 5, clash at x.1.1.1.1.1, oracle none, " + std::to_string(s) + " s";
	return o;
}

Outcome blocking_compilation() {
	Outcome o;
	const Program p = testing::sample("blocking");
	const auto c = compile_units(p);
	const Literals root{{*p.predicate_id("p"), true}, {*p.predicate_id("q"), false}};
	std::vector<const UnitStructure*> same_root;
	for (const auto& u : c.units) {
		if (u.root_content == root) same_root.push_back(&u);
	}
	if (same_root.size() != 3) o.fail(std::to_string(same_root.size()) + " units with root {p, not q}");
	std::size_t retained = 0;
	for (const auto* u : same_root) {
		if (u->redundant) continue;
		++retained;
		if (!u->final) o.fail("retained unit is not final");
		if (u->successors.size() != 1 || !u->successors[0].blocked) o.fail("retained unit's successor is not blocked");
		if (!u->paths_to(p, 0).empty()) o.fail("retained unit has a root-to-successor path");
	}
	if (retained != 1) o.fail(std::to_string(retained) + " {p, not q} units retained");
	if (save_cache_text(c, p) != testing::read_text("golden/blocking_units.cache")) o.fail("cache differs from golden file");
	if (o.pass) o.detail = "three {p, not q} units, two redundant, final one retained, golden cache matches";
	return o;
}

struct CorpusEntry {
	Program original;
	Program program;
	std::string query;
	UnitCompilation units;
};

std::vector<CorpusEntry> load_corpus() {
	std::vector<CorpusEntry> out;
	for (auto& cp : testing::random_corpus(kCorpusSeed, kCorpusSize)) {
		Program original = parse_program(cp.text);
		Program p = eliminate_constraints(original);
		auto units = compile_units(p);
		out.push_back({std::move(original), std::move(p), cp.query, std::move(units)});
	}
	return out;
}

Outcome final_units_complete(const std::vector<CorpusEntry>& corpus) {
	Outcome o;
	std::size_t finals = 0;
	for (std::size_t i = 0; i < corpus.size(); ++i) {
		const Program& p = corpus[i].program;
		const A1Rules rules(p);
		std::vector<std::optional<int>> roots{std::nullopt};
		for (std::size_t c = 0; c < p.constants().size(); ++c) roots.emplace_back(static_cast<int>(c));
		for (const auto& root : roots) {
			for (const auto& cs : enumerate_root_expansions(rules, root)) {
				if (!unit_from_structure(cs, p).final) continue;
				++finals;
				const auto problems = audit_complete_clash_free(cs, p, {}, true, cs.eps);
				if (!problems.empty()) o.fail("program " + std::to_string(i) + ": " + problems.front());
			}
		}
	}
	if (finals == 0) o.fail("corpus produced no final units");
	if (o.pass) o.detail = std::to_string(finals) + " final units audited, 0 violations";
	return o;
}

struct EngineVerdicts {
	std::vector<SearchResult> a1, a2;
};

EngineVerdicts run_engines(const std::vector<CorpusEntry>& corpus) {
	EngineVerdicts v;
	RedundancyPolicy pol;
	pol.override_k = kCorpusK;
	for (const auto& e : corpus) {
		v.a1.push_back(check_sat_a1(e.program, e.query, pol));
		v.a2.push_back(check_sat_a2(e.program, e.query, e.units, pol));
	}
	return v;
}

Outcome agreement(const std::vector<CorpusEntry>& corpus, const EngineVerdicts& v) {
	Outcome o;
	std::size_t sat = 0, unsat = 0, unknown = 0;
	for (std::size_t i = 0; i < corpus.size(); ++i) {
		if (v.a1[i].verdict != v.a2[i].verdict) {
			o.fail("program " + std::to_string(i) + ": a1 " + to_string(v.a1[i].verdict) + ", a2 " +
			       to_string(v.a2[i].verdict));
		}
		switch (v.a1[i].verdict) {
			case Verdict::Sat: ++sat; break;
			case Verdict::Unsat: ++unsat; break;
			case Verdict::Unknown: ++unknown; break;
		}
	}
	if (o.pass) {
		o.detail = std::to_string(corpus.size()) + "/" + std::to_string(corpus.size()) + " agree (" +
		           std::to_string(sat) + " SAT, " + std::to_string(unsat) + " UNSAT, " + std::to_string(unknown) +
		           " UNKNOWN, k = " + std::to_string(kCorpusK) + ")";
	}
	return o;
}

Outcome oracle_direction(const std::vector<CorpusEntry>& corpus, const EngineVerdicts& v, Clock::time_point start) {
	Outcome o;
	std::size_t witnesses = 0, checked = 0;
	for (std::size_t i = 0; i < corpus.size(); ++i) {
		const auto& e = corpus[i];
		const std::string id = "program " + std::to_string(i);
		if (bounded_sat(e.original, e.query, kOracleSize)) {
			++witnesses;
			if (v.a1[i].verdict != Verdict::Sat) o.fail(id + ": oracle model but a1 " + to_string(v.a1[i].verdict));
			if (v.a2[i].verdict != Verdict::Sat) o.fail(id + ": oracle model but a2 " + to_string(v.a2[i].verdict));
		}
		for (const auto* r : {&v.a1[i], &v.a2[i]}) {
			if (r->verdict != Verdict::Sat || !r->blocking_free) continue;
			++checked;
			if (!is_answer_set(e.original, induced_interpretation(*r->witness, e.program))) {
				o.fail(id + ": engine witness rejected");
			}
		}
	}
	const double s = seconds_since(start);
	if (s >= kCorpusSeconds) o.fail("corpus run took " + std::to_string(s) + " s");
	if (o.pass) {
		o.detail = std::to_string(witnesses) + " oracle models matched, " + std::to_string(checked) +
		           " engine witnesses accepted, corpus run " + std::to_string(s) + " s";
	}
	return o;
}

Outcome redundancy_order(const std::vector<CorpusEntry>& corpus) {
	Outcome o;
	std::size_t sets = 0, pairs = 0;
	std::vector<std::pair<std::string, UnitCompilation>> all;
	for (std::size_t i = 0; i < corpus.size(); ++i) all.emplace_back("program " + std::to_string(i), corpus[i].units);
	std::vector<Program> programs;
	for (const auto& e : corpus) programs.push_back(e.program);
	for (const char* name : {"support_chain", "blocking"}) {
		programs.push_back(testing::sample(name));
		all.emplace_back(name, compile_units(programs.back()));
	}
	programs.push_back(eliminate_constraints(testing::sample("organization")));
	all.emplace_back("organization", compile_units(programs.back()));

	for (std::size_t s = 0; s < all.size(); ++s) {
		const auto& units = all[s].second.units;
		const Program& p = programs[s];
		const std::size_t n = units.size();
		std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
		for (std::size_t i = 0; i < n; ++i) {
			for (std::size_t j = 0; j < n; ++j) rel[i][j] = is_redundant(units[i], units[j], p);
		}
		++sets;
		for (std::size_t i = 0; i < n; ++i) {
			if (rel[i][i]) o.fail(all[s].first + ": reflexive pair");
			for (std::size_t j = 0; j < n; ++j) {
				if (!rel[i][j]) continue;
				++pairs;
				if (!units[i].redundant) o.fail(all[s].first + ": dominated unit kept");
				for (std::size_t k = 0; k < n; ++k) {
					if (rel[j][k] && !rel[i][k]) o.fail(all[s].first + ": not transitive");
				}
			}
		}
		for (std::size_t i = 0; i < n; ++i) {
			for (std::size_t j = 0; j < n; ++j) {
				if (!units[i].redundant && !units[j].redundant && rel[i][j]) o.fail(all[s].first + ": retained pair ordered");
			}
		}
	}
	if (o.pass) o.detail = std::to_string(sets) + " compiled sets, " + std::to_string(pairs) + " ordered pairs, 0 violations";
	return o;
}

Outcome bench() {
	Outcome o;
	const Program p = parse_program(synthetic_program());
	const auto row = bench_program("synthetic", p, synthetic_queries(), {}, std::chrono::seconds(120));
	std::ostringstream d;
	d.precision(1);
	d << std::fixed << p.rules().size() << " rules, 5 queries: a1 " << row.a1_ms << " ms, a2 " << row.compile_ms
	  << " + " << row.a2_ms << " ms";
	if (row.timeout) o.fail("timeout");
	if (!row.agree()) o.fail("verdicts differ");
	if (row.a2_total_ms() > kBenchSlack * row.a1_ms) o.fail("a2 slower");
	o.detail = (o.pass ? "" : o.detail + "; ") + d.str();
	return o;
}

}  // namespace

int main() {
	int failures = 0;
	auto report = [&](int n, const char* title, const std::function<Outcome()>& f) {
		Outcome o;
		try {
			o = f();
		} catch (const std::exception& e) {
			o.fail(std::string("exception: ") + e.what());
		}
		failures += !o.pass;
		std::cout << "criterion " << n << " [" << (o.pass ? "PASS" : "FAIL") << "] " << title << ": " << o.detail
		          << std::endl;
	};

	report(1, "organization example satisfiable", organization);
	report(2, "recursive support unsatisfiable", support_chain);
	report(3, "blocking program unit compilation", blocking_compilation);

	const auto start = Clock::now();
	std::vector<CorpusEntry> corpus;
	EngineVerdicts verdicts;
	std::string corpus_error;
	try {
		corpus = load_corpus();
		verdicts = run_engines(corpus);
	} catch (const std::exception& e) {
		corpus_error = e.what();
	}
	auto with_corpus = [&](std::function<Outcome()> f) {
		return [f, &corpus_error]() {
			if (!corpus_error.empty()) {
				Outcome o;
				o.fail("corpus run failed: " + corpus_error);
				return o;
			}
			return f();
		};
	};
	report(4, "final units are complete and clash-free", with_corpus([&] { return final_units_complete(corpus); }));
	report(5, "a1/a2 verdict agreement", with_corpus([&] { return agreement(corpus, verdicts); }));
	report(6, "oracle soundness direction", with_corpus([&] { return oracle_direction(corpus, verdicts, start); }));
	report(7, "redundancy is a strict order, pruning dominance-free",
	       with_corpus([&] { return redundancy_order(corpus); }));
	report(8, "a2 not slower than a1 on the synthetic family", bench);

	std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
	return failures ? 1 : 0;
}
