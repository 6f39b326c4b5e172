// Ground-truth open answer set semantics over finite universes: grounding,
// the GL-reduct, least models, answer-set checking and a bounded search for
// open answer sets.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "folp/syntax.hpp"

namespace folp {

class ResourceLimit : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct GroundAtomText {
	std::string predicate;
	std::vector<std::string> args;
	auto operator<=>(const GroundAtomText&) const = default;
};
std::string to_string(const GroundAtomText& a);

/// (U, M): a universe and a set of ground regular atoms over it.
struct OpenInterpretation {
	std::vector<std::string> universe;
	std::set<GroundAtomText> atoms;
	bool operator==(const OpenInterpretation&) const = default;
};

/// Witness format: one "element <name>" line per universe member (universe
/// order), then one "atom <atom>" line per member of M (sorted by atom text).
std::string format_witness(const OpenInterpretation& i);

/// Equality up to a renaming of the elements that are not constants of `p`.
bool equal_modulo_anonymous(const OpenInterpretation& a, const OpenInterpretation& b, const Program& p);

// ---------------------------------------------------------------------------

struct GroundRule {
	int head = -1;           // atom id; -1 for constraints
	bool choice = false;     // h v not h <-
	std::vector<int> pos;    // beta+
	std::vector<int> neg;    // beta-
};

class GroundProgram {
public:
	int intern(const GroundAtomText& a);
	std::optional<int> find(const GroundAtomText& a) const;
	const GroundAtomText& atom(int id) const { return atoms_.at(static_cast<std::size_t>(id)); }
	std::size_t atom_count() const noexcept { return atoms_.size(); }

	std::vector<GroundRule> rules;        // rules with a head (including choice rules)
	std::vector<GroundRule> constraints;  // headless rules

private:
	std::vector<GroundAtomText> atoms_;
	std::map<GroundAtomText, int> ids_;
};

struct Universe {
	std::vector<std::string> elements;
	/// cts(P) followed by `anonymous` fresh elements u1, u2, ...
	static Universe for_program(const Program& p, std::size_t anonymous);
};

inline constexpr std::size_t kDefaultAtomBudget = std::size_t{1} << 22;

/// Exhaustive grounding. Inequalities between equal elements drop the rule,
/// satisfied inequalities are removed. Throws ResourceLimit when the Herbrand
/// base over `u` exceeds `atom_budget`.
GroundProgram ground(const Program& p, const Universe& u, std::size_t atom_budget = kDefaultAtomBudget);

/// Positive reduct w.r.t. the atom set `i` (ids of gp). Constraints are not
/// part of the reduct; they are checked directly by is_answer_set.
GroundProgram gl_reduct(const GroundProgram& gp, const std::set<int>& i);

/// Least model of a positive, non-disjunctive ground program. Throws
/// std::invalid_argument on negative bodies, choice rules or constraints.
std::set<int> least_model(const GroundProgram& pp);

/// True iff M is an answer set of P grounded over U and every ground
/// constraint has a false body. Atoms over non-universe elements or unknown
/// predicates make the result false.
bool is_answer_set(const Program& p, const OpenInterpretation& i);

/// Independent model check: every ground rule (and constraint) is satisfied by M.
bool is_model(const Program& p, const OpenInterpretation& i);

struct OracleOptions {
	std::size_t atom_budget = kDefaultAtomBudget;
};

/// Searches universes of size max(1,|cts|)..max_size for an open answer set
/// containing pred(x) for some x. Among the witnesses of the smallest
/// universe, returns one of minimum |M|, ties broken lexicographically.
/// An empty result is not a proof of unsatisfiability.
std::optional<OpenInterpretation> bounded_sat(const Program& p, const std::string& pred, std::size_t max_size,
                                              const OracleOptions& opts = {});

}  // namespace folp
