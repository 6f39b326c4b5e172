#include "folp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace folp {

std::string to_string(const GroundAtomText& a) {
	std::string s = a.predicate + "(";
	for (std::size_t i = 0; i < a.args.size(); ++i) {
		if (i) s += ",";
		s += a.args[i];
	}
	return s + ")";
}

std::string format_witness(const OpenInterpretation& i) {
	std::string out;
	for (const auto& e : i.universe) out += "element " + e + "\n";
	std::vector<std::string> atoms;
	for (const auto& a : i.atoms) atoms.push_back(to_string(a));
	std::sort(atoms.begin(), atoms.end());
	for (const auto& a : atoms) out += "atom " + a + "\n";
	return out;
}

bool equal_modulo_anonymous(const OpenInterpretation& a, const OpenInterpretation& b, const Program& p) {
	if (a.universe.size() != b.universe.size() || a.atoms.size() != b.atoms.size()) return false;
	std::vector<std::string> anon_a, anon_b;
	for (const auto& e : a.universe) {
		if (!p.has_constant(e)) anon_a.push_back(e);
	}
	for (const auto& e : b.universe) {
		if (!p.has_constant(e)) anon_b.push_back(e);
	}
	if (anon_a.size() != anon_b.size()) return false;
	std::sort(anon_b.begin(), anon_b.end());
	do {
		std::map<std::string, std::string> rename;
		for (std::size_t i = 0; i < anon_a.size(); ++i) rename[anon_a[i]] = anon_b[i];
		std::set<GroundAtomText> mapped;
		for (GroundAtomText atom : a.atoms) {
			for (auto& arg : atom.args) {
				if (auto it = rename.find(arg); it != rename.end()) arg = it->second;
			}
			mapped.insert(std::move(atom));
		}
		if (mapped == b.atoms) return true;
	} while (std::next_permutation(anon_b.begin(), anon_b.end()));
	return false;
}

// ---------------------------------------------------------------------------

int GroundProgram::intern(const GroundAtomText& a) {
	auto [it, inserted] = ids_.emplace(a, static_cast<int>(atoms_.size()));
	if (inserted) atoms_.push_back(a);
	return it->second;
}

std::optional<int> GroundProgram::find(const GroundAtomText& a) const {
	auto it = ids_.find(a);
	if (it == ids_.end()) return std::nullopt;
	return it->second;
}

Universe Universe::for_program(const Program& p, std::size_t anonymous) {
	Universe u;
	u.elements = p.constants();
	for (std::size_t i = 1; i <= anonymous; ++i) u.elements.push_back("u" + std::to_string(i));
	return u;
}

namespace {

std::vector<std::string> variables_of(const Rule& r) {
	std::vector<std::string> vars;
	auto note = [&](const Term& t) {
		if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name) == vars.end()) vars.push_back(t.name);
	};
	if (r.head) {
		for (const Term& t : r.head->args) note(t);
	}
	for (const Literal& l : r.body) {
		if (l.is_regular()) {
			for (const Term& t : l.atom.args) note(t);
		} else {
			note(l.lhs);
			note(l.rhs);
		}
	}
	return vars;
}

}  // namespace

GroundProgram ground(const Program& p, const Universe& u, std::size_t atom_budget) {
	if (u.elements.empty()) throw std::invalid_argument("universe must be non-empty");
	for (const auto& c : p.constants()) {
		if (std::find(u.elements.begin(), u.elements.end(), c) == u.elements.end()) {
			throw std::invalid_argument("universe lacks constant '" + c + "'");
		}
	}
	std::size_t base = 0;
	const std::size_t n = u.elements.size();
	for (const auto& info : p.predicates()) base += info.arity == 1 ? n : n * n;
	if (base > atom_budget) {
		throw ResourceLimit("ground atom count " + std::to_string(base) + " exceeds budget " + std::to_string(atom_budget));
	}

	GroundProgram gp;
	for (const Rule& r : p.rules()) {
		const auto vars = variables_of(r);
		std::map<std::string, std::string> sub;
		auto value = [&](const Term& t) -> const std::string& { return t.is_variable() ? sub.at(t.name) : t.name; };
		auto ground_atom = [&](const Atom& a) {
			GroundAtomText g{a.predicate, {}};
			for (const Term& t : a.args) g.args.push_back(value(t));
			return gp.intern(g);
		};
		std::vector<std::size_t> idx(vars.size(), 0);
		while (true) {
			for (std::size_t i = 0; i < vars.size(); ++i) sub[vars[i]] = u.elements[idx[i]];
			bool dropped = false;
			GroundRule g;
			for (const Literal& l : r.body) {
				if (l.kind == Literal::Kind::Inequality) {
					if (value(l.lhs) == value(l.rhs)) {
						dropped = true;
						break;
					}
				}
			}
			if (!dropped) {
				for (const Literal& l : r.body) {
					if (l.kind == Literal::Kind::Positive) g.pos.push_back(ground_atom(l.atom));
					if (l.kind == Literal::Kind::Naf) g.neg.push_back(ground_atom(l.atom));
				}
				if (r.head) {
					g.head = ground_atom(*r.head);
					g.choice = r.kind == RuleKind::Free;
					gp.rules.push_back(std::move(g));
				} else {
					gp.constraints.push_back(std::move(g));
				}
			}
			std::size_t k = 0;
			while (k < idx.size() && ++idx[k] == n) idx[k++] = 0;
			if (k == idx.size()) break;
		}
	}
	return gp;
}

GroundProgram gl_reduct(const GroundProgram& gp, const std::set<int>& i) {
	GroundProgram out = gp;
	out.rules.clear();
	out.constraints.clear();
	for (const GroundRule& r : gp.rules) {
		if (r.choice) {
			if (i.count(r.head)) out.rules.push_back({r.head, false, {}, {}});
			continue;
		}
		const bool blocked = std::any_of(r.neg.begin(), r.neg.end(), [&](int a) { return i.count(a) > 0; });
		if (!blocked) out.rules.push_back({r.head, false, r.pos, {}});
	}
	return out;
}

namespace {

/// Least model of the rules accepted by `keep` (negative bodies ignored).
std::vector<char> least_model_of(const GroundProgram& gp, const std::function<bool(const GroundRule&)>& keep) {
	const std::size_t n = gp.atom_count();
	std::vector<char> in(n, 0);
	std::vector<int> missing(gp.rules.size(), 0);
	std::vector<std::vector<int>> watch(n);
	std::vector<int> queue;
	for (std::size_t ri = 0; ri < gp.rules.size(); ++ri) {
		const GroundRule& r = gp.rules[ri];
		if (!keep(r)) {
			missing[ri] = -1;
			continue;
		}
		missing[ri] = static_cast<int>(r.pos.size());
		for (int a : r.pos) watch[static_cast<std::size_t>(a)].push_back(static_cast<int>(ri));
		if (missing[ri] == 0 && !in[static_cast<std::size_t>(r.head)]) {
			in[static_cast<std::size_t>(r.head)] = 1;
			queue.push_back(r.head);
		}
	}
	while (!queue.empty()) {
		const int a = queue.back();
		queue.pop_back();
		for (int ri : watch[static_cast<std::size_t>(a)]) {
			if (--missing[static_cast<std::size_t>(ri)] == 0) {
				const int h = gp.rules[static_cast<std::size_t>(ri)].head;
				if (!in[static_cast<std::size_t>(h)]) {
					in[static_cast<std::size_t>(h)] = 1;
					queue.push_back(h);
				}
			}
		}
	}
	return in;
}

}  // namespace

std::set<int> least_model(const GroundProgram& pp) {
	if (!pp.constraints.empty()) throw std::invalid_argument("least_model: constraints are not allowed");
	for (const GroundRule& r : pp.rules) {
		if (r.choice || !r.neg.empty() || r.head < 0) {
			throw std::invalid_argument("least_model: program must be positive and non-disjunctive");
		}
	}
	const auto in = least_model_of(pp, [](const GroundRule&) { return true; });
	std::set<int> out;
	for (std::size_t a = 0; a < in.size(); ++a) {
		if (in[a]) out.insert(static_cast<int>(a));
	}
	return out;
}

namespace {

bool interpret(const Program& p, const OpenInterpretation& i, GroundProgram& gp, std::set<int>& m) {
	const std::set<std::string> elems(i.universe.begin(), i.universe.end());
	if (elems.empty() || elems.size() != i.universe.size()) return false;
	for (const auto& c : p.constants()) {
		if (!elems.count(c)) return false;
	}
	Universe u{i.universe};
	gp = ground(p, u);
	for (const auto& a : i.atoms) {
		auto id = p.predicate_id(a.predicate);
		if (!id || p.predicate(*id).arity != static_cast<int>(a.args.size())) return false;
		for (const auto& arg : a.args) {
			if (!elems.count(arg)) return false;
		}
		m.insert(gp.intern(a));
	}
	return true;
}

bool constraints_hold(const GroundProgram& gp, const std::set<int>& m) {
	for (const GroundRule& c : gp.constraints) {
		const bool pos = std::all_of(c.pos.begin(), c.pos.end(), [&](int a) { return m.count(a) > 0; });
		const bool neg = std::none_of(c.neg.begin(), c.neg.end(), [&](int a) { return m.count(a) > 0; });
		if (pos && neg) return false;
	}
	return true;
}

}  // namespace

bool is_answer_set(const Program& p, const OpenInterpretation& i) {
	GroundProgram gp;
	std::set<int> m;
	if (!interpret(p, i, gp, m)) return false;
	if (!constraints_hold(gp, m)) return false;
	return least_model(gl_reduct(gp, m)) == m;
}

bool is_model(const Program& p, const OpenInterpretation& i) {
	GroundProgram gp;
	std::set<int> m;
	if (!interpret(p, i, gp, m)) return false;
	for (const GroundRule& r : gp.rules) {
		if (r.choice) continue;
		const bool body = std::all_of(r.pos.begin(), r.pos.end(), [&](int a) { return m.count(a) > 0; }) &&
		                  std::none_of(r.neg.begin(), r.neg.end(), [&](int a) { return m.count(a) > 0; });
		if (body && !m.count(r.head)) return false;
	}
	return constraints_hold(gp, m);
}

// ---------------------------------------------------------------------------
// Bounded search. Only atoms that occur negatively or as choice heads (the
// atoms the reduct depends on) are guessed; the rest follows from the least
// model. Partial guesses are bounded from below and above by two least models.

namespace {

class AnswerSetSearch {
public:
	AnswerSetSearch(const GroundProgram& gp, std::vector<int> targets) : gp_(gp), targets_(std::move(targets)) {
		const std::size_t n = gp.atom_count();
		guessed_.assign(n, 0);
		value_.assign(n, kUnknown);
		for (const GroundRule& r : gp.rules) {
			if (r.choice) guessed_[static_cast<std::size_t>(r.head)] = 1;
			for (int a : r.neg) guessed_[static_cast<std::size_t>(a)] = 1;
		}
		for (const GroundRule& r : gp.constraints) {
			for (int a : r.neg) guessed_[static_cast<std::size_t>(a)] = 1;
		}
		for (std::size_t a = 0; a < n; ++a) {
			if (guessed_[a]) order_.push_back(static_cast<int>(a));
		}
		std::sort(order_.begin(), order_.end(),
		          [&](int x, int y) { return to_string(gp.atom(x)) < to_string(gp.atom(y)); });
	}

	std::optional<std::set<int>> run() {
		search();
		return best_;
	}

private:
	static constexpr signed char kUnknown = -1;

	bool neg_false(const GroundRule& r) const {
		return std::all_of(r.neg.begin(), r.neg.end(), [&](int a) { return value_[static_cast<std::size_t>(a)] == 0; });
	}
	bool neg_not_true(const GroundRule& r) const {
		return std::none_of(r.neg.begin(), r.neg.end(), [&](int a) { return value_[static_cast<std::size_t>(a)] == 1; });
	}

	std::vector<std::string> key(const std::set<int>& m) const {
		std::vector<std::string> k;
		for (int a : m) k.push_back(to_string(gp_.atom(a)));
		std::sort(k.begin(), k.end());
		return k;
	}

	// Returns false on conflict.
	bool propagate(std::vector<char>& lower) {
		while (true) {
			lower = least_model_of(gp_, [&](const GroundRule& r) {
				return r.choice ? value_[static_cast<std::size_t>(r.head)] == 1 : neg_false(r);
			});
			const auto upper = least_model_of(gp_, [&](const GroundRule& r) {
				return r.choice ? value_[static_cast<std::size_t>(r.head)] != 0 : neg_not_true(r);
			});
			if (std::none_of(targets_.begin(), targets_.end(), [&](int a) { return upper[static_cast<std::size_t>(a)]; })) {
				return false;
			}
			if (best_) {
				const auto size = static_cast<std::size_t>(std::count(lower.begin(), lower.end(), 1));
				if (size > best_->size()) return false;
			}
			for (const GroundRule& c : gp_.constraints) {
				const bool pos = std::all_of(c.pos.begin(), c.pos.end(), [&](int a) { return lower[static_cast<std::size_t>(a)]; });
				const bool neg = std::all_of(c.neg.begin(), c.neg.end(), [&](int a) {
					return value_[static_cast<std::size_t>(a)] == 0 || !upper[static_cast<std::size_t>(a)];
				});
				if (pos && neg) return false;
			}
			bool forced = false;
			for (int a : order_) {
				auto& v = value_[static_cast<std::size_t>(a)];
				const bool lo = lower[static_cast<std::size_t>(a)], up = upper[static_cast<std::size_t>(a)];
				if (v == 1 && !up) return false;
				if (v == 0 && lo) return false;
				if (v == kUnknown && lo) {
					v = 1;
					forced = true;
				} else if (v == kUnknown && !up) {
					v = 0;
					forced = true;
				}
			}
			if (!forced) return true;
		}
	}

	void search() {
		const auto saved = value_;
		std::vector<char> lower;
		if (!propagate(lower)) {
			value_ = saved;
			return;
		}
		auto next = std::find_if(order_.begin(), order_.end(),
		                         [&](int a) { return value_[static_cast<std::size_t>(a)] == kUnknown; });
		if (next == order_.end()) {
			std::set<int> m;
			for (std::size_t a = 0; a < lower.size(); ++a) {
				if (lower[a]) m.insert(static_cast<int>(a));
			}
			if (!best_ || m.size() < best_->size() || (m.size() == best_->size() && key(m) < key(*best_))) best_ = m;
		} else {
			for (signed char choice : {0, 1}) {
				value_[static_cast<std::size_t>(*next)] = choice;
				search();
			}
		}
		value_ = saved;
	}

	const GroundProgram& gp_;
	std::vector<int> targets_;
	std::vector<char> guessed_;
	std::vector<signed char> value_;
	std::vector<int> order_;
	std::optional<std::set<int>> best_;
};

}  // namespace

std::optional<OpenInterpretation> bounded_sat(const Program& p, const std::string& pred, std::size_t max_size,
                                              const OracleOptions& opts) {
	auto id = p.predicate_id(pred);
	if (!id || p.predicate(*id).arity != 1) throw std::invalid_argument("'" + pred + "' is not a unary predicate of the program");
	const std::size_t ncts = p.constants().size();
	if (max_size < std::max<std::size_t>(ncts, 1)) {
		throw std::invalid_argument("max universe size is smaller than the number of constants");
	}
	for (std::size_t size = std::max<std::size_t>(ncts, 1); size <= max_size; ++size) {
		const Universe u = Universe::for_program(p, size - ncts);
		const GroundProgram gp = ground(p, u, opts.atom_budget);
		std::vector<int> targets;
		for (const auto& e : u.elements) {
			if (auto t = gp.find({pred, {e}})) targets.push_back(*t);
		}
		if (targets.empty()) continue;
		AnswerSetSearch search(gp, targets);
		if (auto m = search.run()) {
			OpenInterpretation w{u.elements, {}};
			for (int a : *m) w.atoms.insert(gp.atom(a));
			if (!is_answer_set(p, w)) throw std::logic_error("bounded_sat produced a non-answer-set witness");
			return w;
		}
	}
	return std::nullopt;
}

}  // namespace folp
