// Forest logic program syntax: terms, literals, rules, the Program inventory,
// the text parser/printer, shape validation and constraint elimination.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace folp {

class ParseError : public std::runtime_error {
public:
	ParseError(int line, int column, const std::string& msg);
	int line() const noexcept { return line_; }
	int column() const noexcept { return column_; }
private:
	int line_;
	int column_;
};

/// Raised when an operation that requires a well-formed FoLP receives one
/// that violates the tree-shape conditions.
class ValidationError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct Term {
	enum class Kind : std::uint8_t { Constant, Variable };
	Kind kind = Kind::Constant;
	std::string name;

	static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }
	static Term variable(std::string n) { return {Kind::Variable, std::move(n)}; }
	bool is_variable() const noexcept { return kind == Kind::Variable; }
	bool is_constant() const noexcept { return kind == Kind::Constant; }
	auto operator<=>(const Term&) const = default;
};

struct Atom {
	std::string predicate;
	std::vector<Term> args;  // one or two terms
	int arity() const noexcept { return static_cast<int>(args.size()); }
	auto operator<=>(const Atom&) const = default;
};

struct Literal {
	enum class Kind : std::uint8_t { Positive, Naf, Inequality };
	Kind kind = Kind::Positive;
	Atom atom;       // Positive / Naf
	Term lhs, rhs;   // Inequality

	static Literal positive(Atom a) { return {Kind::Positive, std::move(a), {}, {}}; }
	static Literal naf(Atom a) { return {Kind::Naf, std::move(a), {}, {}}; }
	static Literal neq(Term l, Term r) { return {Kind::Inequality, {}, std::move(l), std::move(r)}; }
	bool is_regular() const noexcept { return kind != Kind::Inequality; }
	auto operator<=>(const Literal&) const = default;
};

enum class RuleKind : std::uint8_t { Fact, Free, Unary, Binary, Constraint };

struct Rule {
	RuleKind kind = RuleKind::Unary;
	std::optional<Atom> head;   // empty for constraints
	std::vector<Literal> body;  // empty for facts and free rules
	int line = 0;               // source line, 0 when built programmatically

	bool operator==(const Rule& o) const { return kind == o.kind && head == o.head && body == o.body; }
};

struct PredicateInfo {
	std::string name;
	int arity = 1;
	bool free = false;  // defined by a choice rule q(X..) v not q(X..) over distinct variables
	bool only_free = false;  // free and without ordinary rules: its negation needs no refutation
};

/// A program together with its symbol inventories. Predicates and constants
/// are kept in order of first occurrence so that every derived ordering is
/// deterministic.
class Program {
public:
	Program() = default;
	/// Throws ParseError (carrying the rule's line) on an arity conflict.
	explicit Program(std::vector<Rule> rules);

	const std::vector<Rule>& rules() const noexcept { return rules_; }
	const std::vector<std::string>& constants() const noexcept { return constants_; }
	const std::vector<PredicateInfo>& predicates() const noexcept { return preds_; }
	std::vector<std::string> unary_predicates() const;
	std::vector<std::string> binary_predicates() const;

	std::optional<int> predicate_id(std::string_view name) const;
	const PredicateInfo& predicate(int id) const { return preds_.at(static_cast<std::size_t>(id)); }
	bool is_free(std::string_view name) const;
	bool has_constant(std::string_view name) const;
	int constant_index(std::string_view name) const;  // -1 if absent
	/// Indices of rules with `name` in the head (the P_q index).
	const std::vector<std::size_t>& rules_for(std::string_view name) const;
	bool has_constraints() const;

	bool operator==(const Program& o) const { return rules_ == o.rules_; }

private:
	std::vector<Rule> rules_;
	std::vector<std::string> constants_;
	std::vector<PredicateInfo> preds_;
	std::map<std::string, int, std::less<>> pred_ids_;
	std::map<std::string, std::vector<std::size_t>, std::less<>> by_head_;
};

Program parse_program(std::string_view text);
Program load_program(const std::string& path);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Rule& r);
/// Canonical text: one rule per line in the surface grammar; parses back to an equal program.
std::string print_program(const Program& p);

struct Violation {
	std::size_t rule = 0;
	int line = 0;
	std::string condition;
};

/// Empty result means the program is a forest logic program.
std::vector<Violation> validate_folp(const Program& p);

/// Replaces every constraint `:- body` with `co__k(s) :- not co__k(s), body`
/// where s is the constraint's root term and co__k is a fresh unary predicate.
Program eliminate_constraints(const Program& p);

// ---------------------------------------------------------------------------
// Tree-shaped view of a rule used by the tableau engines.

struct SignedPred {
	int pred = 0;
	bool positive = true;
	SignedPred complement() const noexcept { return {pred, !positive}; }
	auto operator<=>(const SignedPred&) const = default;
};

struct SuccessorPart {
	Term term;
	std::vector<SignedPred> gamma;  // binary literals on (s, term)
	std::vector<SignedPred> delta;  // unary literals on term
	bool has_positive_gamma() const;
};

struct RuleShape {
	std::size_t rule = 0;       // index into Program::rules()
	int head = -1;              // predicate id, -1 for constraints
	bool binary_head = false;
	bool choice = false;        // free rule: justifies the head, never forces it
	Term s;                     // root term
	std::vector<SignedPred> beta;
	/// Unary rules: one part per distinct successor term.
	/// Binary rules: exactly one part, whose term is the head's second argument.
	std::vector<SuccessorPart> successors;
	std::vector<std::pair<int, int>> neq;  // pairs of indices into successors
};

/// Throws ValidationError when the rule is not tree-shaped.
RuleShape shape_of(const Program& p, std::size_t rule_index);
std::vector<RuleShape> shapes_of(const Program& p);

std::string signed_name(const Program& p, SignedPred sp);

}  // namespace folp
