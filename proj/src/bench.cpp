#include "folp/bench.hpp"

#include <algorithm>
#include <sstream>

#include "folp/oracle.hpp"

namespace folp {

std::string synthetic_program(int levels, int width) {
	std::string text;
	for (int l = 0; l < levels; ++l) {
		const std::string head = "s" + std::to_string(l) + "(X) :- e(X,Y), ";
		const std::string tail = l + 1 < levels ? "s" + std::to_string(l + 1) + "(Y).\n" : "not s0(Y).\n";
		for (int w = 0; w < width; ++w) text += head + tail;
	}
	text += "e(X,Y) v not e(X,Y).\n";
	return text;
}

std::vector<std::string> synthetic_queries(int levels, std::size_t count) {
	std::vector<std::string> out;
	for (std::size_t i = 0; i < count; ++i) out.push_back("s" + std::to_string(i % static_cast<std::size_t>(levels)));
	return out;
}

std::vector<std::string> bench_queries(const std::string& text, const Program& p) {
	std::istringstream in(text);
	for (std::string line; std::getline(in, line);) {
		const auto pos = line.find("% query:");
		if (pos == std::string::npos) continue;
		std::istringstream words(line.substr(pos + 8));
		std::vector<std::string> out;
		for (std::string w; words >> w;) out.push_back(w);
		if (!out.empty()) return out;
	}
	std::vector<std::string> out;
	for (const auto& name : p.unary_predicates()) {
		if (!p.is_free(name) && !p.rules_for(name).empty()) out.push_back(name);
	}
	return out;
}

bool BenchRow::agree() const {
	for (std::size_t i = 0; i < a1_verdicts.size() && i < a2_verdicts.size(); ++i) {
		if (a1_verdicts[i] == "TIMEOUT" || a2_verdicts[i] == "TIMEOUT") continue;
		if (a1_verdicts[i] != a2_verdicts[i]) return false;
	}
	return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
	return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

SearchLimits limits_for(std::chrono::milliseconds budget) {
	SearchLimits lim;
	lim.deadline = Clock::now() + budget;
	return lim;
}

}  // namespace

BenchRow bench_program(const std::string& name, const Program& p, const std::vector<std::string>& queries,
                       const RedundancyPolicy& policy, std::chrono::milliseconds budget) {
	BenchRow row;
	row.program = name;
	row.queries = queries;

	for (const auto& q : queries) {
		const auto t = Clock::now();
		try {
			const auto r = check_sat_a1(p, q, policy, limits_for(budget));
			row.a1_verdicts.push_back(to_string(r.verdict));
			row.a1_nodes += r.stats.nodes_created;
		} catch (const ResourceLimit&) {
			row.a1_verdicts.push_back("TIMEOUT");
			row.timeout = true;
		}
		row.a1_ms += elapsed_ms(t);
	}

	auto t = Clock::now();
	UnitCompilation units;
	bool compiled = true;
	try {
		units = compile_units(p, limits_for(budget));
		row.units = units.stats.retained;
	} catch (const ResourceLimit&) {
		compiled = false;
		row.timeout = true;
	}
	row.compile_ms = elapsed_ms(t);

	for (const auto& q : queries) {
		if (!compiled) {
			row.a2_verdicts.push_back("TIMEOUT");
			continue;
		}
		t = Clock::now();
		try {
			const auto r = check_sat_a2(p, q, units, policy, limits_for(budget));
			row.a2_verdicts.push_back(to_string(r.verdict));
			row.a2_nodes += r.stats.nodes_created;
		} catch (const ResourceLimit&) {
			row.a2_verdicts.push_back("TIMEOUT");
			row.timeout = true;
		}
		row.a2_ms += elapsed_ms(t);
	}
	return row;
}

}  // namespace folp
