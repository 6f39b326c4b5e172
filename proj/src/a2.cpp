#include "folp/a2.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace folp {

namespace {

using CS = CompletionStructure;

Literals content_literals(const Content& c) {
	Literals out;
	for (const auto& [pred, e] : c.entries()) out.push_back({pred, e.positive});
	return out;
}

bool node_expanded(const CS& cs, int x) {
	return static_cast<std::size_t>(x) < cs.expanded.size() && cs.expanded[static_cast<std::size_t>(x)];
}

/// Inserts a literal; positive atoms become G vertices. Returns the insert outcome.
Content::Insert put(CS& cs, Content& c, SignedPred sp, const NodeAtom& atom) {
	const auto r = c.insert(sp);
	if (r == Content::Insert::Added) {
		c.find(sp.pred)->expanded = true;
		if (sp.positive) cs.g.add_vertex(atom);
	}
	return r;
}

std::size_t total_paths(const UnitStructure& u, const Program& p) {
	std::size_t n = 0;
	for (std::size_t i = 0; i < u.successors.size(); ++i) n += u.paths_to(p, static_cast<int>(i)).size();
	return n;
}

}  // namespace

bool local_satisfies(const UnitStructure& u, const Literals& s) {
	Literals sorted = s;
	std::sort(sorted.begin(), sorted.end());
	return std::includes(u.root_content.begin(), u.root_content.end(), sorted.begin(), sorted.end());
}

bool unit_fits(const CS& cs, int x, const UnitStructure& u) {
	const ForestNode& n = cs.ef.node(x);
	const bool constant_root = n.is_constant() && n.is_root();
	if (constant_root != u.root_constant.has_value()) return false;
	if (constant_root && n.constant != *u.root_constant) return false;
	return local_satisfies(u, content_literals(n.content));
}

bool expand_cs(CS& cs, int x, const UnitStructure& u) {
	if (!unit_fits(cs, x, u)) throw std::invalid_argument("unit does not fit node " + cs.ef.node(x).id.str());
	if (node_expanded(cs, x)) throw std::invalid_argument("node " + cs.ef.node(x).id.str() + " is already expanded");

	for (SignedPred sp : u.root_content) {
		if (put(cs, cs.ef.node(x).content, sp, {sp.pred, x}) == Content::Insert::Contradiction) return false;
	}
	if (u.root_arc) {
		if (!cs.ef.has_arc(x, x)) cs.ef.add_es_arc(x, x);
		for (SignedPred sp : *u.root_arc) {
			if (put(cs, cs.ef.arc(x, x)->content, sp, {sp.pred, x, x}) == Content::Insert::Contradiction) return false;
		}
	}
	std::vector<int> succ;
	for (const UnitSuccessor& s : u.successors) {
		const int c = cs.ef.add_child(x);
		succ.push_back(c);
		for (SignedPred sp : s.content) put(cs, cs.ef.node(c).content, sp, {sp.pred, c});
		for (SignedPred sp : s.arc) put(cs, cs.ef.arc(x, c)->content, sp, {sp.pred, x, c});
	}
	cs.expanded.resize(cs.ef.size(), false);
	cs.expanded[static_cast<std::size_t>(x)] = true;

	for (const ConstantRequirement& r : u.constants) {
		const int cn = cs.ef.constant_node(r.constant);
		const bool frozen = node_expanded(cs, cn);
		for (SignedPred sp : r.content) {
			const auto res = put(cs, cs.ef.node(cn).content, sp, {sp.pred, cn});
			if (res == Content::Insert::Contradiction) return false;
			if (frozen && res == Content::Insert::Added) return false;
		}
		if (r.arc) {
			if (!cs.ef.has_arc(x, cn)) cs.ef.add_es_arc(x, cn);
			for (SignedPred sp : *r.arc) {
				if (put(cs, cs.ef.arc(x, cn)->content, sp, {sp.pred, x, cn}) == Content::Insert::Contradiction) return false;
			}
		}
	}

	auto node_of = [&](int ref) {
		if (ref == UnitRef::kRoot) return x;
		if (UnitRef::is_constant(ref)) return cs.ef.constant_node(UnitRef::constant_index(ref));
		return succ.at(static_cast<std::size_t>(ref));
	};
	auto atom_of = [&](const UnitAtom& a) {
		return NodeAtom{a.pred, node_of(a.a), a.unary() ? -1 : node_of(a.b)};
	};
	std::vector<std::pair<NodeAtom, NodeAtom>> added;
	for (const auto& [f, t] : u.garcs) {
		const NodeAtom from = atom_of(f), to = atom_of(t);
		if (cs.g.add_arc(from, to)) added.emplace_back(from, to);
	}
	for (const auto& [from, to] : added) {
		if (from == to || cs.g.reaches(to, from)) return false;
	}
	return true;
}

std::vector<const UnitStructure*> match_candidates(const CS& cs, int x, const UnitCompilation& units,
                                                   const Program& p) {
	std::vector<std::pair<std::pair<std::size_t, std::size_t>, const UnitStructure*>> keyed;
	for (const UnitStructure& u : units.units) {
		if (u.redundant || !unit_fits(cs, x, u)) continue;
		keyed.push_back({{u.successors.size(), total_paths(u, p)}, &u});
	}
	std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
	std::vector<const UnitStructure*> out;
	for (const auto& [_, u] : keyed) out.push_back(u);
	return out;
}

std::vector<CS> match(const CS& cs, int x, const UnitCompilation& units, const Program& p) {
	std::vector<CS> out;
	for (const UnitStructure* u : match_candidates(cs, x, units, p)) {
		CS next = cs;
		if (expand_cs(next, x, *u)) out.push_back(std::move(next));
	}
	return out;
}

namespace {

struct Search {
	const Program& p;
	const UnitCompilation& units;
	const RedundancyPolicy& policy;
	const SearchLimits& limits;
	SearchStats& stats;
	std::vector<TraceEvent>& trace;
	std::uint64_t k;
	int cap = -1;
	bool cap_hit = false;
	bool weak_clash = false;
	std::optional<CS> found;
	std::set<const UnitStructure*> used;

	static constexpr std::size_t kTraceLimit = 64;

	Search(const Program& prog, const UnitCompilation& u, const RedundancyPolicy& pol, const SearchLimits& lim,
	       SearchStats& st, std::vector<TraceEvent>& tr)
	    : p(prog), units(u), policy(pol), limits(lim), stats(st), trace(tr), k(pol.k(prog)) {}

	void tick() {
		++stats.steps;
		if (stats.steps > limits.max_steps) throw ResourceLimit("search step budget exhausted");
		if (limits.deadline && (stats.steps & 0xff) == 0 && std::chrono::steady_clock::now() > *limits.deadline) {
			throw ResourceLimit("search deadline exceeded");
		}
	}

	int select(const CS& cs) const {
		const auto& ef = cs.ef;
		std::vector<int> roots;
		for (std::size_t i = 0; i < ef.size(); ++i) {
			if (ef.node(static_cast<int>(i)).is_root()) roots.push_back(static_cast<int>(i));
		}
		for (int r : roots) {
			if (!node_expanded(cs, r)) return r;
		}
		for (int r : roots) {
			std::vector<int> st(ef.node(r).children.rbegin(), ef.node(r).children.rend());
			while (!st.empty()) {
				const int x = st.back();
				st.pop_back();
				if (find_blocking_ancestor(cs, p, x)) continue;
				if (!node_expanded(cs, x)) return x;
				const auto& ch = ef.node(x).children;
				st.insert(st.end(), ch.rbegin(), ch.rend());
			}
		}
		return -1;
	}

	bool run(CS cs) {
		for (;;) {
			tick();
			const int x = select(cs);
			if (x < 0) {
				found = std::move(cs);
				return true;
			}
			const int depth = cs.ef.node(x).depth;
			if (cap >= 0 && depth > cap) {
				cap_hit = true;
				return false;
			}
			stats.max_depth = std::max(stats.max_depth, depth);
			std::vector<CS> live;
			for (const UnitStructure* u : match_candidates(cs, x, units, p)) {
				++stats.units_tried;
				CS next = cs;
				if (!expand_cs(next, x, *u)) continue;
				++stats.matches;
				if (!used.insert(u).second) ++stats.unit_reuse;
				stats.nodes_created += next.ef.size() - cs.ef.size();
				if (!next.ef.node(x).is_root()) {
					const auto eq = equal_content_ancestors(next, x);
					if (eq >= k) {
						++stats.redundancy_clashes;
						if (policy.weakens(p)) weak_clash = true;
						if (trace.size() < kTraceLimit) trace.push_back({"redundancy", next.ef.node(x).id.str(), depth, eq});
						continue;
					}
				}
				live.push_back(std::move(next));
			}
			if (live.empty()) {
				++stats.backtracks;
				return false;
			}
			if (live.size() == 1) {
				cs = std::move(live.front());
				continue;
			}
			++stats.choice_points;
			for (CS& b : live) {
				if (run(std::move(b))) return true;
				++stats.backtracks;
			}
			return false;
		}
	}
};

}  // namespace

SearchResult check_sat_a2(const Program& p, const std::string& pred, const UnitCompilation& units,
                          const RedundancyPolicy& policy, const SearchLimits& limits) {
	if (units.fingerprint != program_fingerprint(p)) throw CacheError("unit cache was compiled from a different program");
	const A1Rules rules(p);
	const auto id = p.predicate_id(pred);
	if (!id || p.predicate(*id).arity != 1) throw std::invalid_argument("not a unary predicate: " + pred);

	SearchResult res;
	std::vector<std::optional<int>> eps_choices{std::nullopt};
	for (std::size_t i = 0; i < p.constants().size(); ++i) eps_choices.emplace_back(static_cast<int>(i));

	for (int cap = 0;; cap = cap == 0 ? 1 : cap * 2) {
		const bool user_capped = policy.max_depth && cap >= *policy.max_depth;
		if (user_capped) cap = *policy.max_depth;
		Search s(p, units, policy, limits, res.stats, res.trace);
		s.cap = cap;
		for (const auto& eps : eps_choices) {
			CS init = rules.initial(*id, eps);
			init.expanded.assign(init.ef.size(), false);
			if (s.run(std::move(init))) {
				res.verdict = Verdict::Sat;
				res.stats.depth_cap = cap;
				res.witness = std::move(s.found);
				res.blocking_free = true;
				for (std::size_t i = 0; i < res.witness->ef.size(); ++i) {
					if (find_blocking_ancestor(*res.witness, p, static_cast<int>(i))) res.blocking_free = false;
				}
				return res;
			}
		}
		res.stats.depth_cap = cap;
		if (!s.cap_hit) {
			res.verdict = s.weak_clash ? Verdict::Unknown : Verdict::Unsat;
			return res;
		}
		if (user_capped) {
			res.verdict = Verdict::Unknown;
			return res;
		}
		res.trace.clear();
	}
}

}  // namespace folp
