// The original tableau algorithm: expansion rules for unary/binary
// predicates, saturation, blocking and redundancy, and a depth-first search
// over the nondeterministic choices.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "folp/forest.hpp"
#include "folp/syntax.hpp"

namespace folp {

enum class Verdict { Sat, Unsat, Unknown };
std::string to_string(Verdict v);

/// Redundancy bound and optional search bounds. Setting `override_k` below
/// the default bound, or `max_depth`, makes negative answers inconclusive.
struct RedundancyPolicy {
	std::optional<std::uint64_t> override_k;
	std::optional<int> max_depth;

	/// 2^p (2^(p^2) - 1) + 3, saturating at UINT64_MAX.
	static std::uint64_t default_k(std::size_t unary_predicates);
	std::uint64_t k(const Program& p) const;
	/// True if a redundancy clash under this policy may cut a branch the default bound keeps.
	bool weakens(const Program& p) const;
};

struct SearchLimits {
	std::uint64_t max_steps = 20'000'000;
	std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct SearchStats {
	std::uint64_t steps = 0;
	std::uint64_t nodes_created = 0;
	std::uint64_t choice_points = 0;
	std::uint64_t backtracks = 0;
	std::uint64_t redundancy_clashes = 0;
	std::uint64_t cycle_clashes = 0;
	int max_depth = 0;
	int depth_cap = -1;  // cap of the final deepening pass, -1 when unbounded
	// optimized engine only
	std::uint64_t units_tried = 0;
	std::uint64_t matches = 0;
	std::uint64_t unit_reuse = 0;
};

struct TraceEvent {
	std::string kind;      // "redundancy"
	std::string node;
	int depth = 0;
	std::uint64_t equal_ancestors = 0;
};

struct SearchResult {
	Verdict verdict = Verdict::Unsat;
	std::optional<CompletionStructure> witness;
	SearchStats stats;
	std::vector<TraceEvent> trace;  // first redundancy clashes, in search order
	/// True if the witness has no blocked node, so it is a finite open answer set.
	bool blocking_free = false;
};

/// Rule applications of the original algorithm. Every rule returns the
/// successor states of one nondeterministic step; an empty result is a
/// local failure.
class A1Rules {
public:
	/// `p` must be a validated, constraint-free program (throws ValidationError otherwise).
	explicit A1Rules(const Program& p);

	const Program& program() const noexcept { return *p_; }

	/// Initial structure: roots for every constant plus an anonymous root
	/// (unless `eps_constant` names a constant), ct(eps) = {pred} unexpanded.
	CompletionStructure initial(int pred, std::optional<int> eps_constant) const;
	/// Initial unit structure: a single root with empty content, constants present but inert.
	CompletionStructure initial_unit(std::optional<int> root_constant) const;

	std::vector<CompletionStructure> expand_unary_positive(const CompletionStructure& cs, int x, int pred) const;
	std::vector<CompletionStructure> expand_unary_negative(const CompletionStructure& cs, int x, int pred) const;
	std::vector<CompletionStructure> choose_unary(const CompletionStructure& cs, int x) const;
	std::vector<CompletionStructure> expand_binary_positive(const CompletionStructure& cs, int x, int y, int pred) const;
	std::vector<CompletionStructure> expand_binary_negative(const CompletionStructure& cs, int x, int y, int pred) const;
	std::vector<CompletionStructure> choose_binary(const CompletionStructure& cs, int x, int y) const;

	/// Creates the ES arcs x -> c that binary rules with constant second term
	/// and no positive connecting atom may populate. Returns true if any was added.
	bool ensure_required_arcs(CompletionStructure& cs, int x) const;

	bool is_saturated(const CompletionStructure& cs, int x) const;
	std::optional<int> find_blocking_pair(const CompletionStructure& cs, int x) const;
	bool is_redundant_node(const CompletionStructure& cs, int x, const RedundancyPolicy& policy) const;

	/// One nondeterministic step at x (the first applicable rule in the order
	/// unary entries, arc entries, choose unary, choose binary). Empty optional
	/// when x is saturated.
	std::optional<std::vector<CompletionStructure>> step(const CompletionStructure& cs, int x) const;

	const std::vector<RuleShape>& shapes() const noexcept { return shapes_; }

private:
	struct Placement;  // where a body literal lives
	bool head_matches(const RuleShape& r, int x, const CompletionStructure& cs) const;
	bool head_matches(const RuleShape& r, int x, int y, const CompletionStructure& cs) const;
	std::vector<CompletionStructure> refute(const CompletionStructure& cs, int x, const RuleShape& r,
	                                         const std::vector<int>& targets, bool& refuted) const;

	const Program* p_;
	std::vector<RuleShape> shapes_;
	std::vector<std::vector<std::size_t>> by_head_;  // pred id -> shape indices
};

/// Unit mode: every saturated expansion of a single root (anonymous, or the
/// given constant) in search order. Other constants are present but never expanded.
std::vector<CompletionStructure> enumerate_root_expansions(const A1Rules& rules, std::optional<int> root_constant,
                                                           const SearchLimits& limits = {},
                                                           SearchStats* stats = nullptr);

SearchResult check_sat_a1(const Program& p, const std::string& pred, const RedundancyPolicy& policy = {},
                          const SearchLimits& limits = {});

/// Semantic audit of a structure against the original algorithm's notion of
/// a complete clash-free structure: acyclic G, unblocked nodes saturated,
/// every decided literal at an unblocked node justified (positive atoms by a
/// ground rule whose body holds and whose body atoms G links to, negative
/// atoms by a false literal in every ground rule), and no redundant node.
/// When `check_status` is set, unexpanded entries at unblocked nodes are
/// also reported. `only_tree` restricts the node checks to one tree, e.g.
/// the root of a unit whose other constants were never expanded. Returns the
/// list of problems found.
std::vector<std::string> audit_complete_clash_free(const CompletionStructure& cs, const Program& p,
                                                   const RedundancyPolicy& policy, bool check_status,
                                                   std::optional<int> only_tree = std::nullopt);

}  // namespace folp
