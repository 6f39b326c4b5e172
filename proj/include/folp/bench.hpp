// Timing both engines on the same queries, plus a synthetic program family
// whose rules share a handful of body shapes.
#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "folp/a2.hpp"

namespace folp {

/// `levels * width` rules "s_l(X) :- e(X,Y), s_{l+1}(Y)." where the last level
/// closes with "not s0(Y)", and one free binary predicate e.
std::string synthetic_program(int levels = 4, int width = 5);
/// `count` queries cycling through s0 .. s_{levels-1}.
std::vector<std::string> synthetic_queries(int levels = 4, std::size_t count = 5);

/// Queries named by a "% query: p q" comment, else every non-free unary
/// predicate that heads a rule, in inventory order.
std::vector<std::string> bench_queries(const std::string& text, const Program& p);

struct BenchRow {
	std::string program;
	std::vector<std::string> queries;
	std::vector<std::string> a1_verdicts;  // SAT / UNSAT / UNKNOWN / TIMEOUT
	std::vector<std::string> a2_verdicts;
	double a1_ms = 0;
	double compile_ms = 0;
	double a2_ms = 0;  // queries only
	std::uint64_t a1_nodes = 0;
	std::uint64_t a2_nodes = 0;
	std::size_t units = 0;  // retained
	bool timeout = false;

	double a2_total_ms() const { return compile_ms + a2_ms; }
	/// Verdicts agree wherever neither side timed out.
	bool agree() const;
};

/// Runs both engines on `p` (constraint-free). Each query and the compile
/// get `budget`; exhausting it marks the entry TIMEOUT instead of failing.
BenchRow bench_program(const std::string& name, const Program& p, const std::vector<std::string>& queries,
                       const RedundancyPolicy& policy = {}, std::chrono::milliseconds budget = std::chrono::seconds(30));

}  // namespace folp
