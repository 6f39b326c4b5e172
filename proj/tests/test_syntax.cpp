#include <doctest.h>

#include "fixtures.hpp"
#include "folp/syntax.hpp"

using namespace folp;

namespace {

bool mentions(const std::vector<Violation>& vs, const std::string& needle) {
	for (const auto& v : vs) {
		if (v.condition.find(needle) != std::string::npos) return true;
	}
	return false;
}

}  // namespace

TEST_CASE("fact with a constant term") {
	const Program p = parse_program("rmember(a).");
	REQUIRE(p.rules().size() == 1);
	const Rule& r = p.rules()[0];
	CHECK(r.kind == RuleKind::Fact);
	CHECK(r.head->args[0] == Term::constant("a"));
	CHECK(p.constants() == std::vector<std::string>{"a"});
}

TEST_CASE("free binary rule") {
	const Program p = parse_program("support(X,Y) v not support(X,Y).");
	CHECK(p.rules()[0].kind == RuleKind::Free);
	CHECK(p.is_free("support"));
	CHECK(p.binary_predicates() == std::vector<std::string>{"support"});
}

TEST_CASE("truncated rule is a syntax error") {
	CHECK_THROWS_AS(parse_program("p(X) :- q(X"), ParseError);
	try {
		parse_program("p(a).\np(X) :- q(X");
	} catch (const ParseError& e) {
		CHECK(e.line() == 2);
	}
}

TEST_CASE("arity conflicts are rejected") {
	CHECK_THROWS_AS(parse_program("p(a).\np(a,b)."), ParseError);
}

TEST_CASE("printing round-trips") {
	const Program p = testing::sample("organization");
	CHECK(parse_program(print_program(p)) == p);
	CHECK(print_program(parse_program(print_program(p))) == print_program(p));
}

TEST_CASE("sample programs are forest logic programs") {
	for (const char* name : {"organization", "support_chain", "blocking"}) {
		CAPTURE(name);
		CHECK(validate_folp(testing::sample(name)).empty());
	}
}

TEST_CASE("variable successor without a connecting positive atom") {
	const auto vs = validate_folp(parse_program("p(X) :- not f(X,Y)."));
	REQUIRE(vs.size() == 1);
	CHECK(mentions(vs, "gamma+ is empty"));
	CHECK(vs[0].line == 1);
}

TEST_CASE("free rule over one variable twice") {
	CHECK(mentions(validate_folp(parse_program("f(X,X) v not f(X,X).")), "must differ"));
}

TEST_CASE("binary rule shape conditions") {
	CHECK(validate_folp(parse_program("f(X,Y) :- g(X,Y), q(Y).\ng(X,Y) v not g(X,Y).")).empty());
	CHECK(mentions(validate_folp(parse_program("f(X,X) :- g(X,X).")), "must differ"));
	CHECK(mentions(validate_folp(parse_program("f(X,Y) :- q(Y).")), "gamma+ is empty"));
	// a constant second term needs no connecting atom
	CHECK(validate_folp(parse_program("f(X,a) :- q(X).")).empty());
}

TEST_CASE("inequalities must relate successor terms") {
	CHECK(validate_folp(parse_program("p(X) :- f(X,Y), f(X,Z), Y != Z.")).empty());
	CHECK_FALSE(validate_folp(parse_program("p(X) :- f(X,Y), X != Y.")).empty());
}

TEST_CASE("constraint elimination") {
	const Program p = testing::organization();
	CHECK_FALSE(p.has_constraints());
	const Rule& r = p.rules()[3];
	CHECK(to_string(r) == "co__1(X) :- not co__1(X), smember(X), rmember(X).");
	CHECK(validate_folp(p).empty());

	const Program plain = testing::sample("support_chain");
	CHECK(eliminate_constraints(plain) == plain);

	const Program two = eliminate_constraints(parse_program(":- p(X), q(X).\n:- q(X).\np(a).\nq(b)."));
	CHECK(two.predicate_id("co__1").has_value());
	CHECK(two.predicate_id("co__2").has_value());
}

TEST_CASE("fresh constraint predicates avoid existing names") {
	const Program p = eliminate_constraints(parse_program("co__1(a).\n:- co__1(X)."));
	CHECK(p.predicate_id("co__2").has_value());
}

TEST_CASE("rule shapes") {
	const Program p = testing::organization();
	const RuleShape s = shape_of(p, 1);
	CHECK(s.head == *p.predicate_id("smember"));
	REQUIRE(s.successors.size() == 2);
	CHECK(s.neq.size() == 1);
	CHECK(s.successors[0].has_positive_gamma());
	CHECK(shape_of(p, 2).choice);
}
