#include <doctest.h>

#include "fixtures.hpp"
#include "folp/oracle.hpp"

using namespace folp;

namespace {

GroundAtomText atom(std::string pred, std::vector<std::string> args) { return {std::move(pred), std::move(args)}; }

OpenInterpretation organization_model() {
	return {{"x", "a", "b"},
	        {atom("rmember", {"a"}), atom("rmember", {"b"}), atom("smember", {"x"}), atom("support", {"x", "a"}),
	         atom("support", {"x", "b"})}};
}

std::set<int> ids(const GroundProgram& gp, const OpenInterpretation& i) {
	std::set<int> out;
	for (const auto& a : i.atoms) {
		if (auto id = gp.find(a)) out.insert(*id);
	}
	return out;
}

}  // namespace

TEST_CASE("grounding a two-variable rule") {
	const Program p = parse_program("smember(X) :- support(X,Y), smember(Y).");
	const auto gp = ground(p, {{"x", "a"}});
	CHECK(gp.rules.size() == 4);
}

TEST_CASE("grounding keeps the two-constant justification") {
	const Program p = testing::sample("organization");
	const auto gp = ground(p, {{"x", "a", "b"}});
	const int head = *gp.find(atom("smember", {"x"}));
	std::set<int> want{*gp.find(atom("support", {"x", "a"})), *gp.find(atom("rmember", {"a"})),
	                   *gp.find(atom("support", {"x", "b"})), *gp.find(atom("rmember", {"b"}))};
	bool found = false;
	for (const auto& r : gp.rules) {
		if (r.head == head && std::set<int>(r.pos.begin(), r.pos.end()) == want && r.neg.empty()) found = true;
	}
	CHECK(found);
}

TEST_CASE("violated inequality drops the ground rule") {
	const Program p = parse_program("p(X) :- f(X,Y), f(X,Z), Y != Z.\nf(X,Y) v not f(X,Y).");
	const auto gp = ground(p, {{"a"}});
	for (const auto& r : gp.rules) CHECK(gp.atom(r.head).predicate != "p");
}

TEST_CASE("reduct of a choice rule") {
	const Program p = parse_program("a(x).\nb(X) v not b(X).");
	const Universe u{{"x"}};
	const auto gp = ground(p, u);
	const int bx = *gp.find(atom("b", {"x"}));
	auto with = gl_reduct(gp, {bx});
	auto without = gl_reduct(gp, {});
	auto has_fact = [&](const GroundProgram& r, int h) {
		for (const auto& g : r.rules) {
			if (g.head == h && g.pos.empty() && !g.choice) return true;
		}
		return false;
	};
	CHECK(has_fact(with, bx));
	CHECK_FALSE(has_fact(without, bx));
}

TEST_CASE("reduct of p :- not p") {
	const Program p = parse_program("p(X) :- not p(X).");
	const auto gp = ground(p, {{"x"}});
	const int px = *gp.find(atom("p", {"x"}));
	CHECK(gl_reduct(gp, {px}).rules.empty());
	const auto r = gl_reduct(gp, {});
	REQUIRE(r.rules.size() == 1);
	CHECK(least_model(r) == std::set<int>{px});
}

TEST_CASE("least model") {
	const Program p = parse_program("a(x).\nb(X) :- a(X).");
	const auto gp = ground(p, {{"x"}});
	CHECK(least_model(gp).size() == 2);
	CHECK(least_model(GroundProgram{}).empty());
	const auto neg = ground(parse_program("p(X) :- not q(X).\nq(a)."), {{"a"}});
	CHECK_THROWS_AS(least_model(neg), std::invalid_argument);
}

TEST_CASE("reduct of the organization program reproduces its forest model") {
	const Program p = testing::sample("organization");
	const auto m = organization_model();
	const auto gp = ground(p, {m.universe});
	const auto i = ids(gp, m);
	CHECK(least_model(gl_reduct(gp, i)) == i);
}

TEST_CASE("answer set check on the organization program") {
	const Program p = testing::sample("organization");
	auto m = organization_model();
	CHECK(is_answer_set(p, m));
	CHECK(is_model(p, m));
	m.atoms.erase(atom("support", {"x", "b"}));
	CHECK_FALSE(is_answer_set(p, m));
	auto bad = organization_model();
	bad.atoms.insert(atom("rmember", {"zz"}));
	CHECK_FALSE(is_answer_set(p, bad));
}

TEST_CASE("constraints are enforced") {
	const Program p = testing::sample("organization");
	auto m = organization_model();
	m.atoms.insert(atom("smember", {"a"}));
	m.atoms.insert(atom("support", {"a", "b"}));
	CHECK_FALSE(is_answer_set(p, m));
}

TEST_CASE("bounded search finds the forest model") {
	const Program p = testing::sample("organization");
	const auto w = bounded_sat(p, "smember", 3);
	REQUIRE(w);
	CHECK(equal_modulo_anonymous(*w, organization_model(), p));
	CHECK(is_answer_set(p, *w));
}

TEST_CASE("bounded search on small programs") {
	const auto fact = bounded_sat(parse_program("rmember(a)."), "rmember", 1);
	REQUIRE(fact);
	CHECK(fact->universe == std::vector<std::string>{"a"});
	CHECK(fact->atoms == std::set<GroundAtomText>{atom("rmember", {"a"})});

	CHECK_FALSE(bounded_sat(testing::sample("support_chain"), "smember", 3));
	CHECK_FALSE(bounded_sat(parse_program("p(X) :- not p(X)."), "p", 3));
}

TEST_CASE("renaming anonymous elements") {
	const Program p = testing::sample("organization");
	auto m = organization_model();
	OpenInterpretation renamed{{"u7", "a", "b"}, {}};
	for (auto a : m.atoms) {
		for (auto& e : a.args) {
			if (e == "x") e = "u7";
		}
		renamed.atoms.insert(a);
	}
	CHECK(equal_modulo_anonymous(m, renamed, p));
	// constants may not be renamed
	OpenInterpretation swapped = m;
	swapped.atoms.erase(atom("support", {"x", "a"}));
	swapped.atoms.insert(atom("support", {"a", "x"}));
	CHECK_FALSE(equal_modulo_anonymous(m, swapped, p));
}

TEST_CASE("witness format") {
	const std::string s = format_witness(organization_model());
	CHECK(s.rfind("element x\nelement a\nelement b\natom rmember(a)\n", 0) == 0);
}

TEST_CASE("atom budget") {
	CHECK_THROWS_AS(ground(testing::sample("organization"), {{"x", "a", "b"}}, 3), ResourceLimit);
}
