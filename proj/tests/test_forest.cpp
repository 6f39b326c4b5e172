#include <doctest.h>

#include "fixtures.hpp"
#include "folp/forest.hpp"
#include "folp/oracle.hpp"

using namespace folp;

namespace {

int pid(const Program& p, const char* name) { return *p.predicate_id(name); }

/// Root x with one child, both holding `lits`, joined by an arc holding f.
CompletionStructure chain_of_two(std::vector<SignedPred> lits, int f) {
	CompletionStructure cs;
	const int x = cs.ef.add_root("x", -1);
	const int c = cs.ef.add_child(x);
	for (auto sp : lits) {
		cs.ef.node(x).content.insert(sp);
		cs.ef.node(c).content.insert(sp);
	}
	cs.ef.arc(x, c)->content.insert({f, true});
	return cs;
}

}  // namespace

TEST_CASE("node naming") {
	ExtendedForest ef;
	const int x = ef.add_root("x", -1);
	const int c1 = ef.add_child(x);
	const int c2 = ef.add_child(x);
	const int c11 = ef.add_child(c1);
	CHECK(ef.node(c1).id.str() == "x.1");
	CHECK(ef.node(c2).id.str() == "x.2");
	CHECK(ef.node(c11).id.str() == "x.1.1");
	CHECK(ef.node(c11).depth == 2);
	CHECK(ef.has_arc(x, c1));
	CHECK(ef.node(x).id.is_ancestor_of(ef.node(c11).id));
	CHECK_FALSE(ef.node(c2).id.is_ancestor_of(ef.node(c11).id));
	CHECK(ef.ancestors(c11) == std::vector<int>{c1, x});
	CHECK(ef.find(NodeId{"x", {1, 1}}) == c11);
}

TEST_CASE("ES arcs to constants") {
	ExtendedForest ef;
	const int x = ef.add_root("x", -1);
	const int a = ef.add_root("a", 0);
	ef.add_es_arc(x, a);
	CHECK(ef.has_arc(x, a));
	CHECK_FALSE(ef.arc(x, a)->tree);
	CHECK(ef.size() == 2);
	CHECK_THROWS_AS(ef.add_es_arc(x, a), std::invalid_argument);
	CHECK(ef.successors(x) == std::vector<int>{a});
	CHECK(ef.constant_node(0) == a);
}

TEST_CASE("content holds one sign per predicate") {
	Content c;
	CHECK(c.insert({0, true}) == Content::Insert::Added);
	CHECK(c.insert({0, true}) == Content::Insert::Present);
	CHECK(c.insert({0, false}) == Content::Insert::Contradiction);
	CHECK(c.contains({0, true}));
	Content d;
	d.insert({0, true});
	d.insert({1, false});
	CHECK(c.subset_of(d));
	CHECK_FALSE(d.subset_of(c));
	CHECK_FALSE(c.same_literals(d));
}

TEST_CASE("dependency graph") {
	DependencyGraph g;
	const NodeAtom px{0, 0}, px1{0, 1};
	CHECK_FALSE(g.has_cycle());
	g.add_vertex(px);
	CHECK_FALSE(g.has_cycle());
	CHECK(g.add_arc(px, px1));
	CHECK_FALSE(g.add_arc(px, px1));
	CHECK(g.reaches(px, px1));
	CHECK_FALSE(g.reaches(px1, px));
	CHECK_FALSE(g.has_cycle());
	g.add_arc(px1, px);
	CHECK(g.has_cycle());
}

TEST_CASE("recursive support blocks nothing") {
	const Program p = testing::sample("support_chain");
	const int sm = pid(p, "smember"), su = pid(p, "support");
	auto cs = chain_of_two({{sm, true}}, su);
	cs.g.add_arc({sm, 0}, {su, 0, 1});
	cs.g.add_arc({sm, 0}, {sm, 1});
	CHECK(paths_set(cs, p, 0, 1) == std::set<std::pair<int, int>>{{sm, sm}});
	CHECK_FALSE(find_blocking_ancestor(cs, p, 1));
}

TEST_CASE("a path ending in a free predicate allows blocking") {
	const Program p = testing::sample("blocking");
	const int pp = pid(p, "p"), q = pid(p, "q"), f = pid(p, "f");
	auto cs = chain_of_two({{pp, true}, {q, false}}, f);
	cs.g.add_arc({pp, 0}, {f, 0, 1});
	CHECK(paths_set(cs, p, 0, 1).empty());
	CHECK(find_blocking_ancestor(cs, p, 1) == 0);
	CHECK(equal_content_ancestors(cs, 1) == 1);
	CHECK_THROWS_AS(induced_interpretation(cs, p), std::logic_error);
}

TEST_CASE("empty graph has no paths") {
	const Program p = testing::sample("blocking");
	auto cs = chain_of_two({}, pid(p, "f"));
	CHECK(paths_set(cs, p, 0, 1).empty());
}

TEST_CASE("constant roots never block") {
	const Program p = parse_program("q(a).\nf(X,Y) v not f(X,Y).");
	CompletionStructure cs;
	const int a = cs.ef.add_root("a", 0);
	const int c = cs.ef.add_child(a);
	cs.ef.node(a).content.insert({pid(p, "q"), true});
	cs.ef.node(c).content.insert({pid(p, "q"), true});
	CHECK_FALSE(find_blocking_ancestor(cs, p, c));
}

TEST_CASE("induced interpretation of the organization structure") {
	const Program p = testing::organization();
	const int sm = pid(p, "smember"), rm = pid(p, "rmember"), su = pid(p, "support");
	CompletionStructure cs;
	const int x = cs.ef.add_root("x", -1);
	const int a = cs.ef.add_root("a", p.constant_index("a"));
	const int b = cs.ef.add_root("b", p.constant_index("b"));
	cs.ef.node(x).content.insert({sm, true});
	cs.ef.node(a).content.insert({rm, true});
	cs.ef.node(b).content.insert({rm, true});
	for (int c : {a, b}) {
		cs.ef.add_es_arc(x, c);
		cs.ef.arc(x, c)->content.insert({su, true});
		cs.g.add_arc({sm, x}, {su, x, c});
		cs.g.add_arc({sm, x}, {rm, c});
	}
	CHECK(cs.g.arc_count() == 4);
	CHECK_FALSE(cs.g.has_cycle());
	const auto m = induced_interpretation(cs, p);
	CHECK(m.universe == std::vector<std::string>{"x", "a", "b"});
	CHECK(m.atoms.size() == 5);
	CHECK(is_answer_set(testing::sample("organization"), m));

	const std::string dot = to_dot(cs, p);
	CHECK(dot.find("digraph") == 0);
	CHECK(dot.find("style=dashed") != std::string::npos);
}

TEST_CASE("single node interpretation") {
	const Program p = parse_program("p(X) :- not q(X).\nq(X) :- not p(X).");
	CompletionStructure cs;
	cs.ef.add_root("x", -1);
	cs.ef.node(0).content.insert({pid(p, "p"), true});
	cs.ef.node(0).content.insert({pid(p, "q"), false});
	const auto m = induced_interpretation(cs, p);
	CHECK(m.universe == std::vector<std::string>{"x"});
	CHECK(m.atoms == std::set<GroundAtomText>{{"p", {"x"}}});
}
