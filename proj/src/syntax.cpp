#include "folp/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace folp {

ParseError::ParseError(int line, int column, const std::string& msg)
	: std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg)
	, line_(line)
	, column_(column) {}

// ---------------------------------------------------------------------------
// Program

namespace {

RuleKind classify(const Rule& r) {
	if (r.kind == RuleKind::Free) return RuleKind::Free;
	if (!r.head) return RuleKind::Constraint;
	if (r.body.empty()) return RuleKind::Fact;
	return r.head->arity() == 2 ? RuleKind::Binary : RuleKind::Unary;
}

bool distinct_variables(const Atom& a) {
	for (const Term& t : a.args) {
		if (!t.is_variable()) return false;
	}
	return a.arity() == 1 || a.args[0] != a.args[1];
}

}  // namespace

Program::Program(std::vector<Rule> rules) : rules_(std::move(rules)) {
	auto note_term = [this](const Term& t) {
		if (t.is_constant() && !has_constant(t.name)) constants_.push_back(t.name);
	};
	auto note_atom = [&](const Atom& a, int line) {
		if (a.arity() < 1 || a.arity() > 2) {
			throw ParseError(line, 1, "predicate '" + a.predicate + "' must be unary or binary");
		}
		auto it = pred_ids_.find(a.predicate);
		if (it == pred_ids_.end()) {
			pred_ids_.emplace(a.predicate, static_cast<int>(preds_.size()));
			preds_.push_back({a.predicate, a.arity(), false});
		} else if (preds_[static_cast<std::size_t>(it->second)].arity != a.arity()) {
			throw ParseError(line, 1, "arity conflict for predicate '" + a.predicate + "'");
		}
		for (const Term& t : a.args) note_term(t);
	};
	for (std::size_t i = 0; i < rules_.size(); ++i) {
		Rule& r = rules_[i];
		r.kind = classify(r);
		if (r.head) {
			note_atom(*r.head, r.line);
			by_head_[r.head->predicate].push_back(i);
		}
		for (const Literal& l : r.body) {
			if (l.is_regular()) {
				note_atom(l.atom, r.line);
			} else {
				note_term(l.lhs);
				note_term(l.rhs);
			}
		}
	}
	for (const Rule& r : rules_) {
		if (r.kind == RuleKind::Free && distinct_variables(*r.head)) {
			preds_[static_cast<std::size_t>(pred_ids_.at(r.head->predicate))].free = true;
		}
	}
	for (auto& info : preds_) {
		if (!info.free) continue;
		info.only_free = true;
		for (std::size_t i : by_head_[info.name]) info.only_free = info.only_free && rules_[i].kind == RuleKind::Free;
	}
}

std::vector<std::string> Program::unary_predicates() const {
	std::vector<std::string> out;
	for (const auto& p : preds_) {
		if (p.arity == 1) out.push_back(p.name);
	}
	return out;
}

std::vector<std::string> Program::binary_predicates() const {
	std::vector<std::string> out;
	for (const auto& p : preds_) {
		if (p.arity == 2) out.push_back(p.name);
	}
	return out;
}

std::optional<int> Program::predicate_id(std::string_view name) const {
	auto it = pred_ids_.find(name);
	if (it == pred_ids_.end()) return std::nullopt;
	return it->second;
}

bool Program::is_free(std::string_view name) const {
	auto id = predicate_id(name);
	return id && preds_[static_cast<std::size_t>(*id)].free;
}

bool Program::has_constant(std::string_view name) const { return constant_index(name) >= 0; }

int Program::constant_index(std::string_view name) const {
	auto it = std::find(constants_.begin(), constants_.end(), name);
	return it == constants_.end() ? -1 : static_cast<int>(it - constants_.begin());
}

const std::vector<std::size_t>& Program::rules_for(std::string_view name) const {
	static const std::vector<std::size_t> none;
	auto it = by_head_.find(name);
	return it == by_head_.end() ? none : it->second;
}

bool Program::has_constraints() const {
	return std::any_of(rules_.begin(), rules_.end(), [](const Rule& r) { return r.kind == RuleKind::Constraint; });
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, If, Neq, End };

struct Token {
	Tok kind;
	std::string text;
	int line;
	int column;
};

class Lexer {
public:
	explicit Lexer(std::string_view src) : src_(src) {}

	Token next() {
		skip_blank();
		const int line = line_, col = col_;
		if (pos_ >= src_.size()) return {Tok::End, "", line, col};
		const char c = src_[pos_];
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t start = pos_;
			while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
			return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col};
		}
		auto single = [&](Tok k) {
			advance();
			return Token{k, std::string(1, c), line, col};
		};
		switch (c) {
			case '(': return single(Tok::LParen);
			case ')': return single(Tok::RParen);
			case ',': return single(Tok::Comma);
			case '.': return single(Tok::Dot);
			case ':':
				if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
					advance();
					advance();
					return {Tok::If, ":-", line, col};
				}
				break;
			case '!':
				if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
					advance();
					advance();
					return {Tok::Neq, "!=", line, col};
				}
				break;
			default: break;
		}
		throw ParseError(line, col, std::string("unexpected character '") + c + "'");
	}

private:
	void advance() {
		if (src_[pos_] == '\n') {
			++line_;
			col_ = 1;
		} else {
			++col_;
		}
		++pos_;
	}
	void skip_blank() {
		while (pos_ < src_.size()) {
			const char c = src_[pos_];
			if (c == '%') {
				while (pos_ < src_.size() && src_[pos_] != '\n') advance();
			} else if (std::isspace(static_cast<unsigned char>(c))) {
				advance();
			} else {
				break;
			}
		}
	}

	std::string_view src_;
	std::size_t pos_ = 0;
	int line_ = 1;
	int col_ = 1;
};

class Parser {
public:
	explicit Parser(std::string_view src) : lex_(src) { shift(); }

	std::vector<Rule> rules() {
		std::vector<Rule> out;
		while (tok_.kind != Tok::End) out.push_back(rule());
		return out;
	}

private:
	void shift() { tok_ = lex_.next(); }

	[[noreturn]] void fail(const std::string& what) const {
		if (tok_.kind == Tok::End) throw ParseError(tok_.line, tok_.column, "unexpected end of input, expected " + what);
		throw ParseError(tok_.line, tok_.column, "unexpected '" + tok_.text + "', expected " + what);
	}

	void expect(Tok k, const char* what) {
		if (tok_.kind != k) fail(what);
		shift();
	}

	static bool is_keyword(const std::string& s) { return s == "not" || s == "v"; }

	Term term() {
		if (tok_.kind != Tok::Ident) fail("a term");
		Term t = std::isupper(static_cast<unsigned char>(tok_.text[0])) || tok_.text[0] == '_'
			? Term::variable(tok_.text)
			: Term::constant(tok_.text);
		shift();
		return t;
	}

	Atom atom() {
		if (tok_.kind != Tok::Ident || !std::islower(static_cast<unsigned char>(tok_.text[0])) || is_keyword(tok_.text)) {
			fail("a predicate name");
		}
		Atom a;
		a.predicate = tok_.text;
		shift();
		expect(Tok::LParen, "'('");
		a.args.push_back(term());
		if (tok_.kind == Tok::Comma) {
			shift();
			a.args.push_back(term());
		}
		expect(Tok::RParen, "')'");
		return a;
	}

	Literal literal() {
		if (tok_.kind == Tok::Ident && tok_.text == "not") {
			shift();
			return Literal::naf(atom());
		}
		// term != term, or an atom: decided by the token after the identifier
		if (tok_.kind == Tok::Ident && !std::islower(static_cast<unsigned char>(tok_.text[0]))) {
			Term l = term();
			expect(Tok::Neq, "'!='");
			return Literal::neq(std::move(l), term());
		}
		Lexer probe = lex_;
		Token after = probe.next();
		if (after.kind == Tok::Neq) {
			Term l = term();
			expect(Tok::Neq, "'!='");
			return Literal::neq(std::move(l), term());
		}
		return Literal::positive(atom());
	}

	std::vector<Literal> body() {
		std::vector<Literal> lits;
		lits.push_back(literal());
		while (tok_.kind == Tok::Comma) {
			shift();
			lits.push_back(literal());
		}
		return lits;
	}

	Rule rule() {
		Rule r;
		r.line = tok_.line;
		if (tok_.kind == Tok::If) {
			shift();
			r.kind = RuleKind::Constraint;
			r.body = body();
			expect(Tok::Dot, "'.'");
			return r;
		}
		const int line = tok_.line, col = tok_.column;
		r.head = atom();
		if (tok_.kind == Tok::Ident && tok_.text == "v") {
			shift();
			if (!(tok_.kind == Tok::Ident && tok_.text == "not")) fail("'not'");
			shift();
			Atom twin = atom();
			if (twin != *r.head) throw ParseError(line, col, "free rule must repeat its head atom after 'v not'");
			r.kind = RuleKind::Free;
			expect(Tok::Dot, "'.'");
			return r;
		}
		if (tok_.kind == Tok::If) {
			shift();
			r.body = body();
		}
		expect(Tok::Dot, "'.'");
		r.kind = r.body.empty() ? RuleKind::Fact : (r.head->arity() == 2 ? RuleKind::Binary : RuleKind::Unary);
		return r;
	}

	Lexer lex_;
	Token tok_{Tok::End, "", 1, 1};
};

}  // namespace

Program parse_program(std::string_view text) {
	Parser parser(text);
	return Program(parser.rules());
}

Program load_program(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw std::runtime_error("cannot read program file '" + path + "'");
	std::stringstream ss;
	ss << in.rdbuf();
	return parse_program(ss.str());
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Atom& a) {
	std::string s = a.predicate + "(" + to_string(a.args[0]);
	if (a.arity() == 2) s += "," + to_string(a.args[1]);
	return s + ")";
}

std::string to_string(const Literal& l) {
	switch (l.kind) {
		case Literal::Kind::Positive: return to_string(l.atom);
		case Literal::Kind::Naf: return "not " + to_string(l.atom);
		case Literal::Kind::Inequality: return to_string(l.lhs) + " != " + to_string(l.rhs);
	}
	return {};
}

std::string to_string(const Rule& r) {
	std::string out;
	if (r.kind == RuleKind::Free) return to_string(*r.head) + " v not " + to_string(*r.head) + ".";
	if (r.head) out = to_string(*r.head);
	if (!r.body.empty()) {
		out += r.head ? " :- " : ":- ";
		for (std::size_t i = 0; i < r.body.size(); ++i) {
			if (i) out += ", ";
			out += to_string(r.body[i]);
		}
	}
	return out + ".";
}

std::string print_program(const Program& p) {
	std::string out;
	for (const Rule& r : p.rules()) out += to_string(r) + "\n";
	return out;
}

std::string signed_name(const Program& p, SignedPred sp) {
	return (sp.positive ? "" : "not ") + p.predicate(sp.pred).name;
}

// ---------------------------------------------------------------------------
// Shape analysis

bool SuccessorPart::has_positive_gamma() const {
	return std::any_of(gamma.begin(), gamma.end(), [](SignedPred s) { return s.positive; });
}

namespace {

using Issues = std::vector<std::string>;

Term constraint_root(const Rule& r) {
	for (const Literal& l : r.body) {
		if (l.is_regular() && l.atom.arity() == 2) return l.atom.args[0];
	}
	for (const Literal& l : r.body) {
		if (l.is_regular() && l.atom.args[0].is_variable()) return l.atom.args[0];
	}
	for (const Literal& l : r.body) {
		if (l.is_regular()) return l.atom.args[0];
	}
	return r.body.front().lhs;
}

void push_unique(std::vector<SignedPred>& v, SignedPred sp) {
	if (std::find(v.begin(), v.end(), sp) == v.end()) v.push_back(sp);
}

RuleShape analyze(const Program& p, std::size_t index, Issues& issues) {
	const Rule& r = p.rules()[index];
	RuleShape shape;
	shape.rule = index;
	auto pid = [&](const Atom& a) { return *p.predicate_id(a.predicate); };
	auto both_vars_equal = [](const Term& a, const Term& b) { return a.is_variable() && a == b; };

	if (r.kind == RuleKind::Free) {
		shape.choice = true;
		shape.head = pid(*r.head);
		shape.s = r.head->args[0];
		if (r.head->arity() == 2) {
			shape.binary_head = true;
			if (both_vars_equal(r.head->args[0], r.head->args[1])) {
				issues.push_back("free rule: both-variable terms must differ");
			}
			shape.successors.push_back({r.head->args[1], {}, {}});
		}
		return shape;
	}

	if (r.head) {
		shape.head = pid(*r.head);
		shape.s = r.head->args[0];
	} else {
		if (r.body.empty()) {
			issues.push_back("constraint with empty body");
			return shape;
		}
		shape.s = constraint_root(r);
	}
	const Term& s = shape.s;

	auto part_index = [&](const Term& t) -> int {
		for (std::size_t i = 0; i < shape.successors.size(); ++i) {
			if (shape.successors[i].term == t) return static_cast<int>(i);
		}
		shape.successors.push_back({t, {}, {}});
		return static_cast<int>(shape.successors.size()) - 1;
	};

	if (r.head && r.head->arity() == 2) {
		shape.binary_head = true;
		const Term& t = r.head->args[1];
		if (both_vars_equal(s, t)) issues.push_back("binary rule: both-variable head terms must differ");
		shape.successors.push_back({t, {}, {}});
		SuccessorPart& part = shape.successors.front();
		for (const Literal& l : r.body) {
			if (!l.is_regular()) {
				issues.push_back("binary rule: inequality literals are not allowed");
				continue;
			}
			const SignedPred sp{pid(l.atom), l.kind == Literal::Kind::Positive};
			if (l.atom.arity() == 1) {
				if (l.atom.args[0] == s) {
					push_unique(shape.beta, sp);
				} else if (l.atom.args[0] == t) {
					push_unique(part.delta, sp);
				} else {
					issues.push_back("binary rule: unary literal '" + to_string(l) + "' is not on a head term");
				}
			} else if (l.atom.args[0] == s && l.atom.args[1] == t) {
				push_unique(part.gamma, sp);
			} else {
				issues.push_back("binary rule: binary literal '" + to_string(l) + "' must connect the head terms");
			}
		}
		if (t.is_variable() && !part.has_positive_gamma()) {
			issues.push_back("binary rule: no positive atom connects the head terms (gamma+ is empty)");
		}
		return shape;
	}

	// unary rule or constraint
	std::vector<std::pair<Term, Term>> neqs;
	for (const Literal& l : r.body) {
		if (!l.is_regular()) {
			neqs.emplace_back(l.lhs, l.rhs);
			continue;
		}
		const SignedPred sp{pid(l.atom), l.kind == Literal::Kind::Positive};
		if (l.atom.arity() == 1) {
			if (l.atom.args[0] == s) {
				push_unique(shape.beta, sp);
			} else {
				push_unique(shape.successors[static_cast<std::size_t>(part_index(l.atom.args[0]))].delta, sp);
			}
			continue;
		}
		const Term& from = l.atom.args[0];
		const Term& to = l.atom.args[1];
		if (from != s) {
			issues.push_back("binary literal '" + to_string(l) + "' does not start at the head term " + s.name);
			continue;
		}
		if (to == s && s.is_variable()) {
			issues.push_back("binary literal '" + to_string(l) + "': both-variable terms must differ");
			continue;
		}
		push_unique(shape.successors[static_cast<std::size_t>(part_index(to))].gamma, sp);
	}
	for (const SuccessorPart& part : shape.successors) {
		if (part.term.is_variable() && !part.has_positive_gamma()) {
			issues.push_back("variable successor " + part.term.name +
			                 " has no positive atom connecting it to " + s.name + " (gamma+ is empty)");
		}
	}
	for (const auto& [a, b] : neqs) {
		if (a == b) {
			issues.push_back("inequality " + a.name + " != " + b.name + " relates a term to itself");
			continue;
		}
		int ia = -1, ib = -1;
		for (std::size_t i = 0; i < shape.successors.size(); ++i) {
			if (shape.successors[i].term == a) ia = static_cast<int>(i);
			if (shape.successors[i].term == b) ib = static_cast<int>(i);
		}
		if (ia < 0 || ib < 0) {
			issues.push_back("inequality " + a.name + " != " + b.name + " must relate successor terms");
			continue;
		}
		shape.neq.emplace_back(ia, ib);
	}
	return shape;
}

}  // namespace

RuleShape shape_of(const Program& p, std::size_t rule_index) {
	Issues issues;
	RuleShape shape = analyze(p, rule_index, issues);
	if (!issues.empty()) {
		const Rule& r = p.rules()[rule_index];
		throw ValidationError("rule '" + to_string(r) + "': " + issues.front());
	}
	return shape;
}

std::vector<RuleShape> shapes_of(const Program& p) {
	std::vector<RuleShape> out;
	out.reserve(p.rules().size());
	for (std::size_t i = 0; i < p.rules().size(); ++i) out.push_back(shape_of(p, i));
	return out;
}

std::vector<Violation> validate_folp(const Program& p) {
	std::vector<Violation> out;
	for (std::size_t i = 0; i < p.rules().size(); ++i) {
		Issues issues;
		analyze(p, i, issues);
		for (auto& msg : issues) out.push_back({i, p.rules()[i].line, std::move(msg)});
	}
	return out;
}

Program eliminate_constraints(const Program& p) {
	if (!p.has_constraints()) return p;
	std::set<std::string> taken;
	for (const auto& info : p.predicates()) taken.insert(info.name);
	int counter = 0;
	auto fresh = [&] {
		std::string name;
		do {
			name = "co__" + std::to_string(++counter);
		} while (taken.count(name));
		taken.insert(name);
		return name;
	};
	std::vector<Rule> rules;
	rules.reserve(p.rules().size());
	for (std::size_t i = 0; i < p.rules().size(); ++i) {
		const Rule& r = p.rules()[i];
		if (r.kind != RuleKind::Constraint) {
			rules.push_back(r);
			continue;
		}
		const Term root = constraint_root(r);
		Rule out;
		out.kind = RuleKind::Unary;
		out.line = r.line;
		out.head = Atom{fresh(), {root}};
		out.body.push_back(Literal::naf(*out.head));
		out.body.insert(out.body.end(), r.body.begin(), r.body.end());
		rules.push_back(std::move(out));
	}
	return Program(std::move(rules));
}

}  // namespace folp
