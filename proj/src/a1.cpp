#include "folp/a1.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace folp {

std::string to_string(Verdict v) {
	switch (v) {
		case Verdict::Sat: return "SAT";
		case Verdict::Unsat: return "UNSAT";
		case Verdict::Unknown: return "UNKNOWN";
	}
	return "?";
}

std::uint64_t RedundancyPolicy::default_k(std::size_t p) {
	constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
	if (p * p >= 63 || p >= 63) return kMax;
	const std::uint64_t inner = (std::uint64_t{1} << (p * p)) - 1;
	const std::uint64_t outer = std::uint64_t{1} << p;
	if (inner != 0 && outer > (kMax - 3) / inner) return kMax;
	return outer * inner + 3;
}

std::uint64_t RedundancyPolicy::k(const Program& p) const {
	const std::uint64_t def = default_k(p.unary_predicates().size());
	return override_k ? std::min(*override_k, def) : def;
}

bool RedundancyPolicy::weakens(const Program& p) const {
	return override_k && *override_k < default_k(p.unary_predicates().size());
}

namespace {

using CS = CompletionStructure;

constexpr int kFreshBase = -1000;  // part target kFreshBase - j: j-th fresh child

bool is_fresh(int t) { return t <= kFreshBase; }

enum class Truth { True, False, Open };

Truth node_truth(const CS& cs, int z, SignedPred sp) {
	const Content& c = cs.ef.node(z).content;
	if (c.contains(sp)) return Truth::True;
	if (c.contains(sp.complement())) return Truth::False;
	return Truth::Open;
}

/// Missing arcs make binary atoms false; a negative literal on a missing arc
/// is reported Open when `refutable` (it can still be refuted by creating the arc).
Truth arc_truth(const CS& cs, int x, int y, SignedPred sp, bool refutable) {
	const ForestArc* a = cs.ef.arc(x, y);
	if (a == nullptr) {
		if (sp.positive) return Truth::False;
		return refutable ? Truth::Open : Truth::True;
	}
	if (a->content.contains(sp)) return Truth::True;
	if (a->content.contains(sp.complement())) return Truth::False;
	return Truth::Open;
}

struct BodyLit {
	int x = 0;
	int y = -1;  // -1: unary literal at x; otherwise binary literal on (x, y)
	SignedPred sp;
};

/// Ground body of `r` with root node x and resolved part targets.
std::vector<BodyLit> ground_body(const RuleShape& r, int x, const std::vector<int>& targets) {
	std::vector<BodyLit> out;
	for (SignedPred sp : r.beta) out.push_back({x, -1, sp});
	for (std::size_t i = 0; i < r.successors.size(); ++i) {
		for (SignedPred sp : r.successors[i].gamma) out.push_back({x, targets[i], sp});
	}
	for (std::size_t i = 0; i < r.successors.size(); ++i) {
		for (SignedPred sp : r.successors[i].delta) out.push_back({targets[i], -1, sp});
	}
	return out;
}

Truth lit_truth(const CS& cs, const BodyLit& l, bool refutable) {
	return l.y < 0 ? node_truth(cs, l.x, l.sp) : arc_truth(cs, l.x, l.y, l.sp, refutable);
}

NodeAtom lit_atom(const BodyLit& l) { return {l.sp.pred, l.x, l.y}; }

std::vector<int> constant_nodes(const CS& cs) {
	std::vector<int> out;
	for (std::size_t i = 0; i < cs.ef.size(); ++i) {
		if (cs.ef.node(static_cast<int>(i)).is_constant()) out.push_back(static_cast<int>(i));
	}
	return out;
}

int constant_target(const CS& cs, const Program& p, const Term& t) {
	const int idx = p.constant_index(t.name);
	const int n = idx < 0 ? -1 : cs.ef.constant_node(idx);
	if (n < 0) throw std::logic_error("no node for constant " + t.name);
	return n;
}

/// Calls visit(targets) for every assignment of r's successor parts at x.
/// Variable parts range over the successors of x and, when `grow`, over
/// fresh children (in restricted-growth order) and constants without an arc.
template <class F>
void for_each_grounding(const CS& cs, const Program& p, const RuleShape& r, int x, bool grow, F&& visit) {
	const std::vector<int> succ = cs.ef.successors(x);
	std::vector<int> extra_constants;
	if (grow) {
		for (int c : constant_nodes(cs)) {
			if (std::find(succ.begin(), succ.end(), c) == succ.end()) extra_constants.push_back(c);
		}
	}
	std::vector<int> targets(r.successors.size(), 0);
	auto distinct_ok = [&]() {
		for (auto [a, b] : r.neq) {
			if (targets[static_cast<std::size_t>(a)] == targets[static_cast<std::size_t>(b)]) return false;
		}
		return true;
	};
	auto rec = [&](auto& self, std::size_t i, int fresh_used) -> void {
		if (i == r.successors.size()) {
			if (distinct_ok()) visit(targets);
			return;
		}
		const Term& t = r.successors[i].term;
		if (t.is_constant()) {
			targets[i] = constant_target(cs, p, t);
			self(self, i + 1, fresh_used);
			return;
		}
		for (int y : succ) {
			targets[i] = y;
			self(self, i + 1, fresh_used);
		}
		if (!grow) return;
		for (int j = 0; j <= fresh_used; ++j) {
			targets[i] = kFreshBase - j;
			self(self, i + 1, std::max(fresh_used, j + 1));
		}
		for (int c : extra_constants) {
			targets[i] = c;
			self(self, i + 1, fresh_used);
		}
	};
	rec(rec, 0, 0);
}

}  // namespace

// ---------------------------------------------------------------------------

A1Rules::A1Rules(const Program& p) : p_(&p) {
	if (p.has_constraints()) throw ValidationError("program has constraints; eliminate them first");
	const auto violations = validate_folp(p);
	if (!violations.empty()) {
		throw ValidationError("not a forest logic program: " + violations.front().condition);
	}
	shapes_ = shapes_of(p);
	by_head_.assign(p.predicates().size(), {});
	for (std::size_t i = 0; i < shapes_.size(); ++i) {
		if (shapes_[i].head >= 0) by_head_[static_cast<std::size_t>(shapes_[i].head)].push_back(i);
	}
}

namespace {

struct Mutator {
	const Program& p;
	CS& cs;

	bool trivially_justified(SignedPred sp) const {
		const PredicateInfo& info = p.predicate(sp.pred);
		return sp.positive ? info.free : info.only_free;
	}
	void rearm(int x) {
		for (auto& [pred, e] : cs.ef.node(x).content.entries_mut()) {
			if (!e.positive && !p.predicate(pred).only_free) e.expanded = false;
		}
	}
	void ensure_arc(int x, int y) {
		if (cs.ef.has_arc(x, y)) return;
		cs.ef.add_es_arc(x, y);
		rearm(x);
	}
	int fresh_child(int x) {
		const int c = cs.ef.add_child(x);
		rearm(x);
		return c;
	}
	bool put_node(int x, SignedPred sp) {
		Content& c = cs.ef.node(x).content;
		const auto r = c.insert(sp);
		if (r == Content::Insert::Contradiction) return false;
		if (r == Content::Insert::Added) {
			if (sp.positive) cs.g.add_vertex({sp.pred, x});
			if (trivially_justified(sp)) c.find(sp.pred)->expanded = true;
		}
		return true;
	}
	bool put_arc(int x, int y, SignedPred sp) {
		ensure_arc(x, y);
		Content& c = cs.ef.arc(x, y)->content;
		const auto r = c.insert(sp);
		if (r == Content::Insert::Contradiction) return false;
		if (r == Content::Insert::Added) {
			if (sp.positive) cs.g.add_vertex({sp.pred, x, y});
			if (trivially_justified(sp)) c.find(sp.pred)->expanded = true;
		}
		return true;
	}
	bool put(const BodyLit& l) { return l.y < 0 ? put_node(l.x, l.sp) : put_arc(l.x, l.y, l.sp); }

	/// Asserts the body, links head to positive body atoms; false on a clash.
	bool justify(const NodeAtom& head, const std::vector<BodyLit>& body) {
		for (const BodyLit& l : body) {
			if (!put(l)) return false;
		}
		std::vector<NodeAtom> added;
		for (const BodyLit& l : body) {
			if (!l.sp.positive) continue;
			const NodeAtom to = lit_atom(l);
			if (cs.g.add_arc(head, to)) added.push_back(to);
		}
		for (const NodeAtom& to : added) {
			if (to == head || cs.g.reaches(to, head)) return false;
		}
		return true;
	}
};

}  // namespace

bool A1Rules::head_matches(const RuleShape& r, int x, const CS& cs) const {
	if (r.s.is_variable()) return true;
	return cs.ef.node(x).constant == p_->constant_index(r.s.name);
}

bool A1Rules::head_matches(const RuleShape& r, int x, int y, const CS& cs) const {
	if (!head_matches(r, x, cs)) return false;
	const Term& t = r.successors.front().term;
	if (t.is_variable()) return true;
	return cs.ef.node(y).constant == p_->constant_index(t.name);
}

CS A1Rules::initial(int pred, std::optional<int> eps_constant) const {
	CS cs;
	if (!eps_constant) cs.eps = cs.ef.add_root("x", -1);
	for (std::size_t i = 0; i < p_->constants().size(); ++i) {
		const int n = cs.ef.add_root(p_->constants()[i], static_cast<int>(i));
		if (eps_constant && *eps_constant == static_cast<int>(i)) cs.eps = n;
	}
	cs.expanded.assign(cs.ef.size(), false);
	Mutator{*p_, cs}.put_node(cs.eps, {pred, true});
	return cs;
}

CS A1Rules::initial_unit(std::optional<int> root_constant) const {
	CS cs = initial(0, root_constant);
	cs.ef.node(cs.eps).content = Content{};
	cs.g = DependencyGraph{};
	return cs;
}

std::vector<CS> A1Rules::expand_unary_positive(const CS& cs, int x, int pred) const {
	std::vector<CS> out;
	const NodeAtom head{pred, x};
	for (std::size_t si : by_head_[static_cast<std::size_t>(pred)]) {
		const RuleShape& r = shapes_[si];
		if (r.binary_head || !head_matches(r, x, cs)) continue;
		if (r.choice) {
			CS next = cs;
			next.ef.node(x).content.find(pred)->expanded = true;
			out.push_back(std::move(next));
			continue;
		}
		for_each_grounding(cs, *p_, r, x, true, [&](const std::vector<int>& targets) {
			CS next = cs;
			Mutator m{*p_, next};
			std::vector<int> resolved = targets;
			std::vector<int> fresh;
			for (int& t : resolved) {
				if (!is_fresh(t)) continue;
				const auto j = static_cast<std::size_t>(kFreshBase - t);
				while (fresh.size() <= j) fresh.push_back(m.fresh_child(x));
				t = fresh[j];
			}
			for (std::size_t i = 0; i < r.successors.size(); ++i) {
				if (!r.successors[i].gamma.empty()) m.ensure_arc(x, resolved[i]);
			}
			if (!m.justify(head, ground_body(r, x, resolved))) return;
			next.ef.node(x).content.find(pred)->expanded = true;
			out.push_back(std::move(next));
		});
	}
	return out;
}

std::vector<CS> A1Rules::refute(const CS& cs, int x, const RuleShape& r, const std::vector<int>& targets,
                                bool& refuted) const {
	const auto body = ground_body(r, x, targets);
	std::vector<CS> out;
	refuted = false;
	for (const BodyLit& l : body) {
		if (lit_truth(cs, l, true) == Truth::False) {
			refuted = true;
			return out;
		}
	}
	for (const BodyLit& l : body) {
		if (lit_truth(cs, l, true) != Truth::Open) continue;
		CS next = cs;
		Mutator m{*p_, next};
		if (!m.put({l.x, l.y, l.sp.complement()})) continue;
		out.push_back(std::move(next));
	}
	return out;
}

std::vector<CS> A1Rules::expand_unary_negative(const CS& cs, int x, int pred) const {
	for (std::size_t si : by_head_[static_cast<std::size_t>(pred)]) {
		const RuleShape& r = shapes_[si];
		if (r.binary_head || r.choice || !head_matches(r, x, cs)) continue;
		std::optional<std::vector<CS>> branches;
		for_each_grounding(cs, *p_, r, x, false, [&](const std::vector<int>& targets) {
			if (branches) return;
			bool refuted = false;
			auto b = refute(cs, x, r, targets, refuted);
			if (!refuted) branches = std::move(b);
		});
		if (branches) return std::move(*branches);
	}
	CS next = cs;
	next.ef.node(x).content.find(pred)->expanded = true;
	return {std::move(next)};
}

std::vector<CS> A1Rules::expand_binary_positive(const CS& cs, int x, int y, int pred) const {
	std::vector<CS> out;
	const NodeAtom head{pred, x, y};
	for (std::size_t si : by_head_[static_cast<std::size_t>(pred)]) {
		const RuleShape& r = shapes_[si];
		if (!r.binary_head || !head_matches(r, x, y, cs)) continue;
		CS next = cs;
		if (!r.choice) {
			Mutator m{*p_, next};
			if (!m.justify(head, ground_body(r, x, {y}))) continue;
		}
		next.ef.arc(x, y)->content.find(pred)->expanded = true;
		out.push_back(std::move(next));
	}
	return out;
}

std::vector<CS> A1Rules::expand_binary_negative(const CS& cs, int x, int y, int pred) const {
	for (std::size_t si : by_head_[static_cast<std::size_t>(pred)]) {
		const RuleShape& r = shapes_[si];
		if (!r.binary_head || r.choice || !head_matches(r, x, y, cs)) continue;
		bool refuted = false;
		auto b = refute(cs, x, r, {y}, refuted);
		if (!refuted) return b;
	}
	CS next = cs;
	next.ef.arc(x, y)->content.find(pred)->expanded = true;
	return {std::move(next)};
}

std::vector<CS> A1Rules::choose_unary(const CS& cs, int x) const {
	for (std::size_t i = 0; i < p_->predicates().size(); ++i) {
		const int pred = static_cast<int>(i);
		if (p_->predicate(pred).arity != 1 || cs.ef.node(x).content.decides(pred)) continue;
		std::vector<CS> out;
		for (bool positive : {false, true}) {
			CS next = cs;
			Mutator{*p_, next}.put_node(x, {pred, positive});
			out.push_back(std::move(next));
		}
		return out;
	}
	return {};
}

std::vector<CS> A1Rules::choose_binary(const CS& cs, int x, int y) const {
	for (std::size_t i = 0; i < p_->predicates().size(); ++i) {
		const int pred = static_cast<int>(i);
		if (p_->predicate(pred).arity != 2 || cs.ef.arc(x, y)->content.decides(pred)) continue;
		std::vector<CS> out;
		for (bool positive : {false, true}) {
			CS next = cs;
			Mutator{*p_, next}.put_arc(x, y, {pred, positive});
			out.push_back(std::move(next));
		}
		return out;
	}
	return {};
}

bool A1Rules::ensure_required_arcs(CS& cs, int x) const {
	bool added = false;
	for (const RuleShape& r : shapes_) {
		if (!r.binary_head || r.choice || !head_matches(r, x, cs)) continue;
		const SuccessorPart& part = r.successors.front();
		if (part.term.is_variable() || part.has_positive_gamma()) continue;
		const int c = constant_target(cs, *p_, part.term);
		if (cs.ef.has_arc(x, c)) continue;
		Mutator{*p_, cs}.ensure_arc(x, c);
		added = true;
	}
	return added;
}

bool A1Rules::is_saturated(const CS& cs, int x) const {
	const ForestNode& n = cs.ef.node(x);
	std::size_t unary = 0;
	for (const auto& [pred, e] : n.content.entries()) {
		if (!e.expanded) return false;
		++unary;
	}
	std::size_t unary_total = 0, binary_total = 0;
	for (const PredicateInfo& pi : p_->predicates()) (pi.arity == 1 ? unary_total : binary_total)++;
	if (unary != unary_total) return false;
	for (int y : cs.ef.successors(x)) {
		const Content& c = cs.ef.arc(x, y)->content;
		if (c.size() != binary_total) return false;
		for (const auto& [pred, e] : c.entries()) {
			if (!e.expanded) return false;
		}
	}
	for (const RuleShape& r : shapes_) {
		if (!r.binary_head || r.choice || !head_matches(r, x, cs)) continue;
		const SuccessorPart& part = r.successors.front();
		if (part.term.is_variable() || part.has_positive_gamma()) continue;
		if (!cs.ef.has_arc(x, constant_target(cs, *p_, part.term))) return false;
	}
	return true;
}

std::optional<int> A1Rules::find_blocking_pair(const CS& cs, int x) const {
	return find_blocking_ancestor(cs, *p_, x);
}

bool A1Rules::is_redundant_node(const CS& cs, int x, const RedundancyPolicy& policy) const {
	if (cs.ef.node(x).is_root() || !is_saturated(cs, x) || find_blocking_pair(cs, x)) return false;
	return equal_content_ancestors(cs, x) >= policy.k(*p_);
}

std::optional<std::vector<CS>> A1Rules::step(const CS& cs, int x) const {
	const ForestNode& n = cs.ef.node(x);
	for (const auto& [pred, e] : n.content.entries()) {
		if (e.expanded) continue;
		return e.positive ? expand_unary_positive(cs, x, pred) : expand_unary_negative(cs, x, pred);
	}
	const auto succ = cs.ef.successors(x);
	for (int y : succ) {
		for (const auto& [pred, e] : cs.ef.arc(x, y)->content.entries()) {
			if (e.expanded) continue;
			return e.positive ? expand_binary_positive(cs, x, y, pred) : expand_binary_negative(cs, x, y, pred);
		}
	}
	auto u = choose_unary(cs, x);
	if (!u.empty()) return u;
	for (int y : succ) {
		auto b = choose_binary(cs, x, y);
		if (!b.empty()) return b;
	}
	return std::nullopt;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Search {
	Search(const A1Rules& r, const RedundancyPolicy& pol, const SearchLimits& lim, SearchStats& st,
	       std::vector<TraceEvent>& tr)
	    : rules(r), policy(pol), limits(lim), stats(st), trace(tr), k(pol.k(r.program())) {}

	const A1Rules& rules;
	const RedundancyPolicy& policy;
	const SearchLimits& limits;
	SearchStats& stats;
	std::vector<TraceEvent>& trace;
	std::uint64_t k;
	int cap = -1;  // -1: no depth cap
	bool unit_mode = false;
	bool cap_hit = false;
	bool weak_clash = false;
	std::function<bool(const CS&)> on_complete;  // true stops the search

	static constexpr std::size_t kTraceLimit = 64;

	void tick() {
		++stats.steps;
		if (stats.steps > limits.max_steps) throw ResourceLimit("search step budget exhausted");
		if (limits.deadline && (stats.steps & 0xff) == 0 && std::chrono::steady_clock::now() > *limits.deadline) {
			throw ResourceLimit("search deadline exceeded");
		}
	}

	/// First unsaturated, unblocked node in expansion order; -1 when complete.
	int select(const CS& cs) const {
		if (unit_mode) return rules.is_saturated(cs, cs.eps) ? -1 : cs.eps;
		const auto& ef = cs.ef;
		std::vector<int> stack;
		for (int i = static_cast<int>(ef.size()) - 1; i >= 0; --i) {
			if (ef.node(i).is_root()) stack.push_back(i);
		}
		// roots first, then preorder
		std::vector<int> roots(stack.rbegin(), stack.rend());
		for (int r : roots) {
			if (!rules.is_saturated(cs, r)) return r;
		}
		for (int r : roots) {
			std::vector<int> st(ef.node(r).children.rbegin(), ef.node(r).children.rend());
			while (!st.empty()) {
				const int x = st.back();
				st.pop_back();
				if (rules.find_blocking_pair(cs, x)) continue;
				if (!rules.is_saturated(cs, x)) return x;
				const auto& ch = ef.node(x).children;
				st.insert(st.end(), ch.rbegin(), ch.rend());
			}
		}
		return -1;
	}

	/// Returns true when the search should stop.
	bool run(CS cs) {
		for (;;) {
			tick();
			const int x = select(cs);
			if (x < 0) return on_complete(cs);
			const int depth = cs.ef.node(x).depth;
			if (cap >= 0 && depth > cap) {
				cap_hit = true;
				return false;
			}
			stats.max_depth = std::max(stats.max_depth, depth);
			if (rules.ensure_required_arcs(cs, x)) continue;
			auto branches = rules.step(cs, x);
			if (!branches) throw std::logic_error("selected node is saturated");
			std::vector<CS> live;
			for (CS& b : *branches) {
				// identical siblings (e.g. rules with the same shape) have identical subtrees
				if (std::find(live.begin(), live.end(), b) != live.end()) continue;
				stats.nodes_created += b.ef.size() - cs.ef.size();
				if (!unit_mode && !b.ef.node(x).is_root() && rules.is_saturated(b, x)) {
					const auto eq = equal_content_ancestors(b, x);
					if (eq >= k) {
						++stats.redundancy_clashes;
						if (policy.weakens(rules.program())) weak_clash = true;
						if (trace.size() < kTraceLimit) {
							trace.push_back({"redundancy", b.ef.node(x).id.str(), depth, eq});
						}
						continue;
					}
				}
				live.push_back(std::move(b));
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

bool has_blocked_node(const CS& cs, const Program& p) {
	for (std::size_t i = 0; i < cs.ef.size(); ++i) {
		if (find_blocking_ancestor(cs, p, static_cast<int>(i))) return true;
	}
	return false;
}

}  // namespace

SearchResult check_sat_a1(const Program& p, const std::string& pred, const RedundancyPolicy& policy,
                          const SearchLimits& limits) {
	const A1Rules rules(p);
	const auto id = p.predicate_id(pred);
	if (!id || p.predicate(*id).arity != 1) throw std::invalid_argument("not a unary predicate: " + pred);

	SearchResult res;
	std::vector<std::optional<int>> eps_choices{std::nullopt};
	for (std::size_t i = 0; i < p.constants().size(); ++i) eps_choices.emplace_back(static_cast<int>(i));

	for (int cap = 0;; cap = cap == 0 ? 1 : cap * 2) {
		const bool user_capped = policy.max_depth && cap >= *policy.max_depth;
		if (user_capped) cap = *policy.max_depth;
		Search s(rules, policy, limits, res.stats, res.trace);
		s.cap = cap;
		s.on_complete = [&](const CS& cs) {
			res.witness = cs;
			return true;
		};
		for (const auto& eps : eps_choices) {
			if (s.run(rules.initial(*id, eps))) {
				res.verdict = Verdict::Sat;
				res.stats.depth_cap = cap;
				res.blocking_free = !has_blocked_node(*res.witness, p);
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

std::vector<CS> enumerate_root_expansions(const A1Rules& rules, std::optional<int> root_constant,
                                          const SearchLimits& limits, SearchStats* stats_out) {
	SearchStats stats;
	std::vector<TraceEvent> trace;
	const RedundancyPolicy policy;
	Search s(rules, policy, limits, stats, trace);
	s.unit_mode = true;
	std::vector<CS> out;
	s.on_complete = [&](const CS& cs) {
		out.push_back(cs);
		return false;
	};
	s.run(rules.initial_unit(root_constant));
	if (stats_out) *stats_out = stats;
	return out;
}

// ---------------------------------------------------------------------------
// Audit

std::vector<std::string> audit_complete_clash_free(const CS& cs, const Program& p, const RedundancyPolicy& policy,
                                                   bool check_status, std::optional<int> only_tree) {
	const A1Rules rules(p);
	std::vector<std::string> problems;
	auto report = [&](std::string msg) { problems.push_back(std::move(msg)); };
	if (cs.g.has_cycle()) report("dependency graph has a cycle");

	std::vector<bool> blocked(cs.ef.size(), false);
	for (int x : cs.ef.expansion_order()) {
		const ForestNode& n = cs.ef.node(x);
		blocked[static_cast<std::size_t>(x)] =
		    (!n.is_root() && blocked[static_cast<std::size_t>(n.parent)]) || find_blocking_ancestor(cs, p, x).has_value();
	}

	auto holds = [&](const std::vector<BodyLit>& body) {
		for (const BodyLit& l : body) {
			if (lit_truth(cs, l, false) != Truth::True) return false;
		}
		return true;
	};
	auto linked = [&](const NodeAtom& head, const std::vector<BodyLit>& body) {
		for (const BodyLit& l : body) {
			if (l.sp.positive && !cs.g.has_arc(head, lit_atom(l))) return false;
		}
		return true;
	};
	const auto& shapes = rules.shapes();
	auto by_head = [&](int pred) {
		std::vector<const RuleShape*> out;
		for (const RuleShape& r : shapes) {
			if (r.head == pred) out.push_back(&r);
		}
		return out;
	};
	auto s_matches = [&](const RuleShape& r, int x) {
		return r.s.is_variable() || cs.ef.node(x).constant == p.constant_index(r.s.name);
	};
	auto t_matches = [&](const RuleShape& r, int y) {
		const Term& t = r.successors.front().term;
		return t.is_variable() || cs.ef.node(y).constant == p.constant_index(t.name);
	};

	std::size_t unary_total = 0, binary_total = 0;
	for (const PredicateInfo& pi : p.predicates()) (pi.arity == 1 ? unary_total : binary_total)++;

	auto tree_of = [&](int x) {
		while (!cs.ef.node(x).is_root()) x = cs.ef.node(x).parent;
		return x;
	};
	for (int x : cs.ef.expansion_order()) {
		if (blocked[static_cast<std::size_t>(x)]) continue;
		if (only_tree && tree_of(x) != *only_tree) continue;
		const ForestNode& n = cs.ef.node(x);
		const std::string name = n.id.str();
		if (n.content.size() != unary_total) report(name + ": unary predicates undecided");
		for (const auto& [pred, e] : n.content.entries()) {
			const std::string lit = name + ": " + signed_name(p, {pred, e.positive});
			if (check_status && !e.expanded) report(lit + " unexpanded");
			if (e.positive ? p.predicate(pred).free : p.predicate(pred).only_free) continue;
			const NodeAtom head{pred, x};
			bool justified = false;
			bool violated = false;
			for (const RuleShape* r : by_head(pred)) {
				if (r->binary_head || !s_matches(*r, x)) continue;
				if (r->choice) {
					justified = true;
					continue;
				}
				for_each_grounding(cs, p, *r, x, false, [&](const std::vector<int>& t) {
					const auto body = ground_body(*r, x, t);
					if (!holds(body)) return;
					if (e.positive && linked(head, body)) justified = true;
					if (!e.positive) violated = true;
				});
			}
			if (e.positive && !justified) report(lit + " has no supporting rule");
			if (!e.positive && violated) report(lit + " but some rule body holds");
		}
		for (int y : cs.ef.successors(x)) {
			const Content& c = cs.ef.arc(x, y)->content;
			const std::string arc = name + "->" + cs.ef.node(y).id.str();
			if (c.size() != binary_total) report(arc + ": binary predicates undecided");
			for (const auto& [pred, e] : c.entries()) {
				const std::string lit = arc + ": " + signed_name(p, {pred, e.positive});
				if (check_status && !e.expanded) report(lit + " unexpanded");
				if (e.positive ? p.predicate(pred).free : p.predicate(pred).only_free) continue;
				const NodeAtom head{pred, x, y};
				bool justified = false;
				bool violated = false;
				for (const RuleShape* r : by_head(pred)) {
					if (!r->binary_head || !s_matches(*r, x) || !t_matches(*r, y)) continue;
					if (r->choice) {
						justified = true;
						continue;
					}
					const auto body = ground_body(*r, x, {y});
					if (!holds(body)) continue;
					if (e.positive && linked(head, body)) justified = true;
					if (!e.positive) violated = true;
				}
				if (e.positive && !justified) report(lit + " has no supporting rule");
				if (!e.positive && violated) report(lit + " but some rule body holds");
			}
		}
		// atoms on absent arcs to constants are false; no rule may force them
		for (const RuleShape& r : shapes) {
			if (!r.binary_head || r.choice || !s_matches(r, x)) continue;
			const Term& t = r.successors.front().term;
			if (t.is_variable()) continue;
			const int y = constant_target(cs, p, t);
			if (cs.ef.has_arc(x, y)) continue;
			if (holds(ground_body(r, x, {y}))) {
				report(name + ": rule for " + p.predicate(r.head).name + " fires towards " + t.name + " without an arc");
			}
		}
		if (!n.is_root() && equal_content_ancestors(cs, x) >= policy.k(p)) report(name + ": redundant node");
	}
	return problems;
}

}  // namespace folp
