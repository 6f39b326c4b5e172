#include "folp/forest.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace folp {

std::string NodeId::str() const {
	std::string s = root;
	for (int i : path) s += "." + std::to_string(i);
	return s;
}

bool NodeId::is_ancestor_of(const NodeId& y) const {
	return root == y.root && path.size() < y.path.size() && std::equal(path.begin(), path.end(), y.path.begin());
}

// ---------------------------------------------------------------------------

Content::Insert Content::insert(SignedPred sp) {
	auto [it, inserted] = entries_.try_emplace(sp.pred, ContentEntry{sp.positive, false});
	if (inserted) return Insert::Added;
	return it->second.positive == sp.positive ? Insert::Present : Insert::Contradiction;
}

bool Content::contains(SignedPred sp) const {
	auto it = entries_.find(sp.pred);
	return it != entries_.end() && it->second.positive == sp.positive;
}

const ContentEntry* Content::find(int pred) const {
	auto it = entries_.find(pred);
	return it == entries_.end() ? nullptr : &it->second;
}

ContentEntry* Content::find(int pred) {
	auto it = entries_.find(pred);
	return it == entries_.end() ? nullptr : &it->second;
}

std::vector<SignedPred> Content::literals() const {
	std::vector<SignedPred> out;
	out.reserve(entries_.size());
	for (const auto& [pred, e] : entries_) out.push_back({pred, e.positive});
	return out;
}

bool Content::subset_of(const Content& other) const {
	return std::all_of(entries_.begin(), entries_.end(),
	                   [&](const auto& kv) { return other.contains({kv.first, kv.second.positive}); });
}

bool Content::same_literals(const Content& other) const {
	return entries_.size() == other.entries_.size() && subset_of(other);
}

// ---------------------------------------------------------------------------

int ExtendedForest::add_root(std::string name, int constant_index) {
	ForestNode n;
	n.id = NodeId{std::move(name), {}};
	n.constant = constant_index;
	nodes_.push_back(std::move(n));
	next_index_.push_back(1);
	return static_cast<int>(nodes_.size()) - 1;
}

int ExtendedForest::add_child(int x) {
	ForestNode n;
	const ForestNode& parent = node(x);
	n.id = parent.id;
	n.id.path.push_back(next_index_[static_cast<std::size_t>(x)]++);
	n.parent = x;
	n.depth = parent.depth + 1;
	nodes_.push_back(std::move(n));
	next_index_.push_back(1);
	const int y = static_cast<int>(nodes_.size()) - 1;
	node(x).children.push_back(y);
	arcs_.emplace(std::make_pair(x, y), ForestArc{true, {}});
	return y;
}

void ExtendedForest::add_es_arc(int x, int c) {
	if (!node(c).is_constant() || !node(c).is_root()) throw std::invalid_argument("ES arc target must be a constant root");
	if (!arcs_.emplace(std::make_pair(x, c), ForestArc{false, {}}).second) {
		throw std::invalid_argument("duplicate ES arc " + node(x).id.str() + " -> " + node(c).id.str());
	}
}

int ExtendedForest::find(const NodeId& id) const {
	for (std::size_t i = 0; i < nodes_.size(); ++i) {
		if (nodes_[i].id == id) return static_cast<int>(i);
	}
	return -1;
}

int ExtendedForest::constant_node(int constant_index) const {
	for (std::size_t i = 0; i < nodes_.size(); ++i) {
		if (nodes_[i].constant == constant_index && nodes_[i].is_root()) return static_cast<int>(i);
	}
	return -1;
}

const ForestArc* ExtendedForest::arc(int x, int y) const {
	auto it = arcs_.find({x, y});
	return it == arcs_.end() ? nullptr : &it->second;
}

ForestArc* ExtendedForest::arc(int x, int y) {
	auto it = arcs_.find({x, y});
	return it == arcs_.end() ? nullptr : &it->second;
}

std::vector<int> ExtendedForest::successors(int x) const {
	std::vector<int> out = node(x).children;
	for (auto it = arcs_.lower_bound({x, -1}); it != arcs_.end() && it->first.first == x; ++it) {
		if (!it->second.tree) out.push_back(it->first.second);
	}
	return out;
}

std::vector<int> ExtendedForest::ancestors(int x) const {
	std::vector<int> out;
	for (int y = node(x).parent; y >= 0; y = node(y).parent) out.push_back(y);
	return out;
}

std::vector<int> ExtendedForest::expansion_order() const {
	std::vector<int> out;
	std::vector<int> roots;
	for (std::size_t i = 0; i < nodes_.size(); ++i) {
		if (nodes_[i].is_root()) roots.push_back(static_cast<int>(i));
	}
	out = roots;
	std::function<void(int)> visit = [&](int x) {
		for (int c : node(x).children) {
			out.push_back(c);
			visit(c);
		}
	};
	for (int r : roots) visit(r);
	return out;
}

// ---------------------------------------------------------------------------

void DependencyGraph::add_vertex(const NodeAtom& v) { vertices_.insert(v); }

bool DependencyGraph::add_arc(const NodeAtom& from, const NodeAtom& to) {
	vertices_.insert(from);
	vertices_.insert(to);
	if (!out_[from].insert(to).second) return false;
	in_[to].insert(from);
	++arc_count_;
	return true;
}

bool DependencyGraph::has_arc(const NodeAtom& from, const NodeAtom& to) const {
	auto it = out_.find(from);
	return it != out_.end() && it->second.count(to) > 0;
}

bool DependencyGraph::reaches(const NodeAtom& from, const NodeAtom& to) const {
	std::set<NodeAtom> seen;
	std::vector<NodeAtom> stack{from};
	while (!stack.empty()) {
		const NodeAtom v = stack.back();
		stack.pop_back();
		auto it = out_.find(v);
		if (it == out_.end()) continue;
		for (const NodeAtom& w : it->second) {
			if (w == to) return true;
			if (seen.insert(w).second) stack.push_back(w);
		}
	}
	return false;
}

std::set<NodeAtom> DependencyGraph::reaching(const std::vector<NodeAtom>& targets) const {
	std::set<NodeAtom> seen;
	std::vector<NodeAtom> stack(targets.begin(), targets.end());
	while (!stack.empty()) {
		const NodeAtom v = stack.back();
		stack.pop_back();
		auto it = in_.find(v);
		if (it == in_.end()) continue;
		for (const NodeAtom& w : it->second) {
			if (seen.insert(w).second) stack.push_back(w);
		}
	}
	return seen;
}

bool DependencyGraph::has_cycle() const {
	enum Mark : char { White, Grey, Black };
	std::map<NodeAtom, Mark> mark;
	for (const NodeAtom& start : vertices_) {
		if (mark[start] != White) continue;
		// iterative DFS with explicit child iterators
		std::vector<std::pair<NodeAtom, std::vector<NodeAtom>>> stack;
		auto children = [&](const NodeAtom& v) {
			auto it = out_.find(v);
			return it == out_.end() ? std::vector<NodeAtom>{} : std::vector<NodeAtom>(it->second.begin(), it->second.end());
		};
		mark[start] = Grey;
		stack.emplace_back(start, children(start));
		while (!stack.empty()) {
			auto& [v, pending] = stack.back();
			if (pending.empty()) {
				mark[v] = Black;
				stack.pop_back();
				continue;
			}
			const NodeAtom w = pending.back();
			pending.pop_back();
			const Mark m = mark[w];
			if (m == Grey) return true;
			if (m == White) {
				mark[w] = Grey;
				stack.emplace_back(w, children(w));
			}
		}
	}
	return false;
}

std::vector<std::pair<NodeAtom, NodeAtom>> DependencyGraph::arcs() const {
	std::vector<std::pair<NodeAtom, NodeAtom>> out;
	for (const auto& [from, tos] : out_) {
		for (const auto& to : tos) out.emplace_back(from, to);
	}
	return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<NodeAtom> non_free_unary_atoms(const CompletionStructure& cs, const Program& p, int x) {
	std::vector<NodeAtom> out;
	for (const auto& [pred, e] : cs.ef.node(x).content.entries()) {
		if (e.positive && !p.predicate(pred).free) out.push_back({pred, x, -1});
	}
	return out;
}

}  // namespace

std::set<std::pair<int, int>> paths_set(const CompletionStructure& cs, const Program& p, int y, int x) {
	std::set<std::pair<int, int>> out;
	for (const NodeAtom& target : non_free_unary_atoms(cs, p, x)) {
		for (const NodeAtom& src : cs.g.reaching({target})) {
			if (src.unary() && src.a == y) out.emplace(src.pred, target.pred);
		}
	}
	return out;
}

std::optional<int> find_blocking_ancestor(const CompletionStructure& cs, const Program& p, int x) {
	const ForestNode& n = cs.ef.node(x);
	if (n.is_root()) return std::nullopt;
	const auto reach = cs.g.reaching(non_free_unary_atoms(cs, p, x));
	for (int y : cs.ef.ancestors(x)) {
		const ForestNode& anc = cs.ef.node(y);
		if (anc.is_constant()) continue;
		if (!n.content.subset_of(anc.content)) continue;
		const bool path = std::any_of(reach.begin(), reach.end(), [&](const NodeAtom& a) { return a.unary() && a.a == y; });
		if (!path) return y;
	}
	return std::nullopt;
}

std::size_t equal_content_ancestors(const CompletionStructure& cs, int x) {
	const Content& c = cs.ef.node(x).content;
	std::size_t k = 0;
	for (int y : cs.ef.ancestors(x)) {
		if (cs.ef.node(y).content.same_literals(c)) ++k;
	}
	return k;
}

OpenInterpretation induced_interpretation(const CompletionStructure& cs, const Program& p) {
	OpenInterpretation out;
	for (std::size_t x = 0; x < cs.ef.size(); ++x) {
		if (find_blocking_ancestor(cs, p, static_cast<int>(x))) {
			throw std::logic_error("structure contains the blocked node " + cs.ef.node(static_cast<int>(x)).id.str());
		}
	}
	for (const ForestNode& n : cs.ef.nodes()) {
		out.universe.push_back(n.id.str());
		for (const auto& [pred, e] : n.content.entries()) {
			if (e.positive) out.atoms.insert({p.predicate(pred).name, {n.id.str()}});
		}
	}
	for (const auto& [key, arc] : cs.ef.arcs()) {
		for (const auto& [pred, e] : arc.content.entries()) {
			if (e.positive) {
				out.atoms.insert({p.predicate(pred).name, {cs.ef.node(key.first).id.str(), cs.ef.node(key.second).id.str()}});
			}
		}
	}
	return out;
}

std::string atom_text(const CompletionStructure& cs, const Program& p, const NodeAtom& a) {
	std::string s = p.predicate(a.pred).name + "(" + cs.ef.node(a.a).id.str();
	if (!a.unary()) s += "," + cs.ef.node(a.b).id.str();
	return s + ")";
}

std::string content_text(const Program& p, const Content& c) {
	std::vector<std::pair<std::string, bool>> lits;
	for (const auto& [pred, e] : c.entries()) lits.emplace_back(p.predicate(pred).name, !e.positive);
	std::sort(lits.begin(), lits.end());
	std::string s = "{";
	for (std::size_t i = 0; i < lits.size(); ++i) {
		if (i) s += ", ";
		s += (lits[i].second ? "not " : "") + lits[i].first;
	}
	return s + "}";
}

std::string to_dot(const CompletionStructure& cs, const Program& p) {
	std::string out = "digraph folp {\n  subgraph cluster_forest {\n    label=\"forest\";\n";
	for (int x : cs.ef.expansion_order()) {
		const ForestNode& n = cs.ef.node(x);
		out += "    \"" + n.id.str() + "\" [label=\"" + n.id.str() + "\\n" + content_text(p, n.content) + "\"];\n";
	}
	for (const auto& [key, arc] : cs.ef.arcs()) {
		out += "    \"" + cs.ef.node(key.first).id.str() + "\" -> \"" + cs.ef.node(key.second).id.str() +
		       "\" [label=\"" + content_text(p, arc.content) + "\"" + (arc.tree ? "" : ", style=dashed") + "];\n";
	}
	out += "  }\n  subgraph cluster_dependencies {\n    label=\"dependencies\";\n";
	for (const NodeAtom& v : cs.g.vertices()) {
		const std::string t = atom_text(cs, p, v);
		out += "    \"g:" + t + "\" [label=\"" + t + "\"];\n";
	}
	for (const auto& [from, to] : cs.g.arcs()) {
		out += "    \"g:" + atom_text(cs, p, from) + "\" -> \"g:" + atom_text(cs, p, to) + "\";\n";
	}
	return out + "  }\n}\n";
}

}  // namespace folp
