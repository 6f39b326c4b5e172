// Shared tableau state: extended forests with per-node/per-arc contents and
// the atom dependency graph.
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "folp/oracle.hpp"
#include "folp/syntax.hpp"

namespace folp {

/// Node name: a tree root (constant or anonymous root) followed by a path of
/// child indices. Printed as "x", "x.1", "x.1.2".
struct NodeId {
	std::string root;
	std::vector<int> path;
	std::string str() const;
	/// x <_F y: same tree and x is a proper prefix of y.
	bool is_ancestor_of(const NodeId& y) const;
	auto operator<=>(const NodeId&) const = default;
};

struct ContentEntry {
	bool positive = true;
	bool expanded = false;
	bool operator==(const ContentEntry&) const = default;
};

/// Predicate id -> decided sign (and A1 status). At most one sign per
/// predicate: inserting the complement is reported as a contradiction.
class Content {
public:
	enum class Insert { Added, Present, Contradiction };

	Insert insert(SignedPred sp);
	bool contains(SignedPred sp) const;
	bool decides(int pred) const { return entries_.count(pred) > 0; }
	const ContentEntry* find(int pred) const;
	ContentEntry* find(int pred);
	bool empty() const noexcept { return entries_.empty(); }
	std::size_t size() const noexcept { return entries_.size(); }
	const std::map<int, ContentEntry>& entries() const noexcept { return entries_; }
	std::map<int, ContentEntry>& entries_mut() noexcept { return entries_; }
	std::vector<SignedPred> literals() const;
	bool subset_of(const Content& other) const;
	bool same_literals(const Content& other) const;
	bool operator==(const Content&) const = default;

private:
	std::map<int, ContentEntry> entries_;
};

struct ForestNode {
	NodeId id;
	int parent = -1;        // -1 for tree roots
	int constant = -1;      // index into cts(P) when this node is a constant root
	int depth = 0;
	std::vector<int> children;
	Content content;
	bool is_root() const noexcept { return parent < 0; }
	bool is_constant() const noexcept { return constant >= 0; }
	bool operator==(const ForestNode&) const = default;
};

struct ForestArc {
	bool tree = true;  // false: ES arc to a constant root
	Content content;
	bool operator==(const ForestArc&) const = default;
};

class ExtendedForest {
public:
	int add_root(std::string name, int constant_index);
	/// Tree child x.(n+1), n being the largest child index used under x so far.
	int add_child(int x);
	/// Arc x -> c for a constant root c. Throws std::invalid_argument on a duplicate.
	void add_es_arc(int x, int c);

	std::size_t size() const noexcept { return nodes_.size(); }
	const ForestNode& node(int x) const { return nodes_.at(static_cast<std::size_t>(x)); }
	ForestNode& node(int x) { return nodes_.at(static_cast<std::size_t>(x)); }
	const std::vector<ForestNode>& nodes() const noexcept { return nodes_; }
	int find(const NodeId& id) const;  // -1 if absent
	int constant_node(int constant_index) const;  // -1 if absent

	bool has_arc(int x, int y) const { return arcs_.count({x, y}) > 0; }
	const ForestArc* arc(int x, int y) const;
	ForestArc* arc(int x, int y);
	const std::map<std::pair<int, int>, ForestArc>& arcs() const noexcept { return arcs_; }
	/// Outgoing arcs of x: tree children first (creation order), then ES arcs.
	std::vector<int> successors(int x) const;
	/// Ancestors of x, nearest first.
	std::vector<int> ancestors(int x) const;
	/// Roots in creation order, then every tree in preorder.
	std::vector<int> expansion_order() const;
	bool operator==(const ExtendedForest&) const = default;

private:
	std::vector<ForestNode> nodes_;
	std::map<std::pair<int, int>, ForestArc> arcs_;
	std::vector<int> next_index_;
};

/// Ground atom over forest nodes (b = -1 for unary atoms).
struct NodeAtom {
	int pred = 0;
	int a = 0;
	int b = -1;
	bool unary() const noexcept { return b < 0; }
	auto operator<=>(const NodeAtom&) const = default;
};

class DependencyGraph {
public:
	void add_vertex(const NodeAtom& v);
	/// Adds both endpoints as vertices. Returns false if the arc was present.
	bool add_arc(const NodeAtom& from, const NodeAtom& to);
	bool has_vertex(const NodeAtom& v) const { return vertices_.count(v) > 0; }
	bool has_arc(const NodeAtom& from, const NodeAtom& to) const;
	bool reaches(const NodeAtom& from, const NodeAtom& to) const;
	bool has_cycle() const;
	/// Every vertex from which some atom in `targets` is reachable by a path of length >= 1.
	std::set<NodeAtom> reaching(const std::vector<NodeAtom>& targets) const;

	const std::set<NodeAtom>& vertices() const noexcept { return vertices_; }
	std::vector<std::pair<NodeAtom, NodeAtom>> arcs() const;
	std::size_t arc_count() const noexcept { return arc_count_; }
	bool operator==(const DependencyGraph&) const = default;

private:
	std::set<NodeAtom> vertices_;
	std::map<NodeAtom, std::set<NodeAtom>> out_;
	std::map<NodeAtom, std::set<NodeAtom>> in_;
	std::size_t arc_count_ = 0;
};

/// Tableau state shared by both engines. `expanded` is the node-level status
/// used by the optimized engine; the original engine keeps statuses per
/// content entry.
struct CompletionStructure {
	ExtendedForest ef;
	DependencyGraph g;
	std::vector<bool> expanded;
	int eps = 0;  // node holding the checked predicate
	bool operator==(const CompletionStructure&) const = default;
};

/// paths_G(y, x) = {(p, q) | p(y) reaches q(x), q not free}, over unary atoms.
std::set<std::pair<int, int>> paths_set(const CompletionStructure& cs, const Program& p, int y, int x);

/// Nearest anonymous ancestor y with ct(x) subset of ct(y) and empty paths_G(y, x).
std::optional<int> find_blocking_ancestor(const CompletionStructure& cs, const Program& p, int x);

/// Number of ancestors whose content has exactly the literals of ct(x).
std::size_t equal_content_ancestors(const CompletionStructure& cs, int x);

/// Finite open interpretation read off the structure: U = nodes, M = the
/// positive node and arc contents. Throws std::logic_error if a node is blocked.
OpenInterpretation induced_interpretation(const CompletionStructure& cs, const Program& p);

std::string atom_text(const CompletionStructure& cs, const Program& p, const NodeAtom& a);
std::string content_text(const Program& p, const Content& c);

/// Graphviz rendering. Forest nodes carry "name\n{literals}" labels, tree arcs
/// are solid, ES arcs dashed, both labelled with their contents; the
/// dependency graph is a second cluster with atom-text vertices.
std::string to_dot(const CompletionStructure& cs, const Program& p);

}  // namespace folp
