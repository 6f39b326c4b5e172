#include "folp/units.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace folp {

namespace {

Literals literals_of(const Content& c) {
	Literals out;
	for (const auto& [pred, e] : c.entries()) out.push_back({pred, e.positive});
	return out;
}

bool includes(const Literals& big, const Literals& small) {
	return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

template <class T>
bool includes(const std::set<T>& big, const std::set<T>& small) {
	return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::set<std::pair<int, int>> UnitStructure::paths_to(const Program& p, int ref) const {
	std::map<UnitAtom, std::vector<UnitAtom>> out;
	for (const auto& [from, to] : garcs) out[from].push_back(to);
	std::set<std::pair<int, int>> result;
	for (const auto& [start, _] : out) {
		if (!start.unary() || start.a != UnitRef::kRoot) continue;
		std::set<UnitAtom> seen;
		std::vector<UnitAtom> stack = out[start];
		while (!stack.empty()) {
			const UnitAtom v = stack.back();
			stack.pop_back();
			if (!seen.insert(v).second) continue;
			if (v.unary() && v.a == ref && !p.predicate(v.pred).free) result.emplace(start.pred, v.pred);
			if (auto it = out.find(v); it != out.end()) stack.insert(stack.end(), it->second.begin(), it->second.end());
		}
	}
	return result;
}

std::vector<int> UnitStructure::unblocked_successors() const {
	std::vector<int> out;
	for (std::size_t i = 0; i < successors.size(); ++i) {
		if (!successors[i].blocked) out.push_back(static_cast<int>(i));
	}
	return out;
}

UnitStructure unit_from_structure(const CompletionStructure& cs, const Program& p) {
	const int root = cs.eps;
	const ForestNode& rn = cs.ef.node(root);
	UnitStructure u;
	if (rn.is_constant()) u.root_constant = rn.constant;
	u.root_content = literals_of(rn.content);
	if (const ForestArc* a = cs.ef.arc(root, root)) u.root_arc = literals_of(a->content);

	std::map<int, int> ref;  // node -> unit ref
	ref[root] = UnitRef::kRoot;
	const auto& children = rn.children;
	for (std::size_t i = 0; i < children.size(); ++i) ref[children[i]] = static_cast<int>(i);
	for (std::size_t i = 0; i < cs.ef.size(); ++i) {
		const ForestNode& n = cs.ef.node(static_cast<int>(i));
		if (n.is_constant() && static_cast<int>(i) != root) ref[static_cast<int>(i)] = UnitRef::constant(n.constant);
	}
	auto map_atom = [&](const NodeAtom& a) {
		return UnitAtom{a.pred, ref.at(a.a), a.unary() ? UnitAtom::kNone : ref.at(a.b)};
	};
	std::vector<std::pair<UnitAtom, UnitAtom>> garcs;
	for (const auto& [from, to] : cs.g.arcs()) garcs.emplace_back(map_atom(from), map_atom(to));

	std::vector<UnitSuccessor> raw;
	for (int c : children) {
		raw.push_back({literals_of(cs.ef.node(c).content), literals_of(cs.ef.arc(root, c)->content),
		               find_blocking_ancestor(cs, p, c).has_value()});
	}
	// canonical successor order
	constexpr int kSelf = -1000;
	auto incident = [&](int i) {
		std::vector<std::pair<UnitAtom, UnitAtom>> out;
		auto relabel = [&](UnitAtom a) {
			if (a.a == i) a.a = kSelf;
			if (a.b == i) a.b = kSelf;
			return a;
		};
		for (const auto& [f, t] : garcs) {
			if (f.a == i || f.b == i || t.a == i || t.b == i) out.emplace_back(relabel(f), relabel(t));
		}
		std::sort(out.begin(), out.end());
		return out;
	};
	std::vector<int> order(raw.size());
	for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
	std::vector<std::decay_t<decltype(incident(0))>> inc;
	for (std::size_t i = 0; i < raw.size(); ++i) inc.push_back(incident(static_cast<int>(i)));
	std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
		const auto& ra = raw[static_cast<std::size_t>(a)];
		const auto& rb = raw[static_cast<std::size_t>(b)];
		return std::tie(ra.content, ra.arc, ra.blocked, inc[static_cast<std::size_t>(a)]) <
		       std::tie(rb.content, rb.arc, rb.blocked, inc[static_cast<std::size_t>(b)]);
	});
	std::vector<int> new_index(raw.size());
	for (std::size_t k = 0; k < order.size(); ++k) {
		new_index[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
		u.successors.push_back(raw[static_cast<std::size_t>(order[k])]);
	}
	auto renumber = [&](int r) { return r >= 0 ? new_index[static_cast<std::size_t>(r)] : r; };
	for (auto& [f, t] : garcs) {
		f.a = renumber(f.a);
		t.a = renumber(t.a);
		if (!f.unary()) f.b = renumber(f.b);
		if (!t.unary()) t.b = renumber(t.b);
	}
	std::sort(garcs.begin(), garcs.end());
	u.garcs = std::move(garcs);

	for (std::size_t i = 0; i < cs.ef.size(); ++i) {
		const int n = static_cast<int>(i);
		const ForestNode& node = cs.ef.node(n);
		if (!node.is_constant() || n == root) continue;
		ConstantRequirement req{node.constant, literals_of(node.content), std::nullopt};
		if (const ForestArc* a = cs.ef.arc(root, n)) req.arc = literals_of(a->content);
		if (!req.content.empty() || req.arc) u.constants.push_back(std::move(req));
	}
	u.final = is_final(u);
	return u;
}

bool is_final(const UnitStructure& u) {
	if (!u.constants.empty()) return false;
	return std::all_of(u.successors.begin(), u.successors.end(), [](const UnitSuccessor& s) { return s.blocked; });
}

namespace {

bool covers(const UnitStructure& u1, const UnitStructure& u2, const Program& p) {
	if (u1.root_constant != u2.root_constant || u1.root_content != u2.root_content) return false;
	if (u2.root_arc && (!u1.root_arc || !includes(*u1.root_arc, *u2.root_arc))) return false;

	for (const ConstantRequirement& r2 : u2.constants) {
		auto it = std::find_if(u1.constants.begin(), u1.constants.end(),
		                       [&](const ConstantRequirement& r) { return r.constant == r2.constant; });
		if (it == u1.constants.end()) return false;
		if (!includes(it->content, r2.content)) return false;
		if (r2.arc && (!it->arc || !includes(*it->arc, *r2.arc))) return false;
		const int ref = UnitRef::constant(r2.constant);
		if (!includes(u1.paths_to(p, ref), u2.paths_to(p, ref))) return false;
	}

	const auto nb1 = u1.unblocked_successors();
	const auto nb2 = u2.unblocked_successors();
	if (nb2.size() > nb1.size()) return false;
	std::vector<std::set<std::pair<int, int>>> paths1, paths2;
	for (int i : nb1) paths1.push_back(u1.paths_to(p, i));
	for (int j : nb2) paths2.push_back(u2.paths_to(p, j));
	std::vector<std::vector<bool>> fits(nb2.size(), std::vector<bool>(nb1.size()));
	for (std::size_t j = 0; j < nb2.size(); ++j) {
		for (std::size_t i = 0; i < nb1.size(); ++i) {
			const auto& s1 = u1.successors[static_cast<std::size_t>(nb1[i])];
			const auto& s2 = u2.successors[static_cast<std::size_t>(nb2[j])];
			fits[j][i] = includes(s1.content, s2.content) && includes(paths1[i], paths2[j]);
		}
	}
	// bipartite matching, augmenting paths
	std::vector<int> owner(nb1.size(), -1);
	auto augment = [&](auto& self, std::size_t j, std::vector<bool>& seen) -> bool {
		for (std::size_t i = 0; i < nb1.size(); ++i) {
			if (!fits[j][i] || seen[i]) continue;
			seen[i] = true;
			if (owner[i] < 0 || self(self, static_cast<std::size_t>(owner[i]), seen)) {
				owner[i] = static_cast<int>(j);
				return true;
			}
		}
		return false;
	};
	for (std::size_t j = 0; j < nb2.size(); ++j) {
		std::vector<bool> seen(nb1.size(), false);
		if (!augment(augment, j, seen)) return false;
	}
	return true;
}

}  // namespace

bool is_redundant(const UnitStructure& u1, const UnitStructure& u2, const Program& p) {
	return covers(u1, u2, p) && !covers(u2, u1, p);
}

void prune_redundant(std::vector<UnitStructure>& units, const Program& p) {
	for (auto& u : units) u.redundant = false;
	for (std::size_t i = 0; i < units.size(); ++i) {
		for (std::size_t j = 0; j < units.size() && !units[i].redundant; ++j) {
			if (i != j && is_redundant(units[i], units[j], p)) units[i].redundant = true;
		}
	}
}

std::string program_fingerprint(const Program& p) {
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char ch : print_program(p)) {
		h ^= ch;
		h *= 0x100000001b3ULL;
	}
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

UnitCompilation compile_units(const Program& p, const SearchLimits& limits) {
	const A1Rules rules(p);
	UnitCompilation out;
	out.fingerprint = program_fingerprint(p);
	std::vector<std::optional<int>> roots{std::nullopt};
	for (std::size_t i = 0; i < p.constants().size(); ++i) roots.emplace_back(static_cast<int>(i));
	for (const auto& root : roots) {
		SearchStats st;
		const auto expansions = enumerate_root_expansions(rules, root, limits, &st);
		out.stats.steps += st.steps;
		out.stats.enumerated += expansions.size();
		std::map<std::string, UnitStructure> distinct;
		for (const auto& cs : expansions) {
			UnitStructure u = unit_from_structure(cs, p);
			distinct.emplace(unit_text(u, p), std::move(u));
		}
		for (auto& [_, u] : distinct) out.units.push_back(std::move(u));
	}
	prune_redundant(out.units, p);
	out.stats.distinct = out.units.size();
	for (const auto& u : out.units) {
		out.stats.final_units += u.final;
		out.stats.redundant += u.redundant;
	}
	out.stats.retained = out.stats.distinct - out.stats.redundant;
	return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string lits_text(const Program& p, const Literals& ls) {
	std::string out;
	for (const SignedPred& sp : ls) {
		if (!out.empty()) out += ' ';
		out += (sp.positive ? '+' : '-') + p.predicate(sp.pred).name;
	}
	return out;
}

std::string ref_text(const Program& p, int r) {
	if (r == UnitRef::kRoot) return "@";
	if (UnitRef::is_constant(r)) return p.constants().at(static_cast<std::size_t>(UnitRef::constant_index(r)));
	return "@" + std::to_string(r + 1);
}

std::string unit_atom_text(const Program& p, const UnitAtom& a) {
	std::string s = p.predicate(a.pred).name + "(" + ref_text(p, a.a);
	if (!a.unary()) s += "," + ref_text(p, a.b);
	return s + ")";
}

std::string line_with(const std::string& head, const std::string& rest) {
	return rest.empty() ? head : head + " " + rest;
}

}  // namespace

std::string unit_text(const UnitStructure& u, const Program& p) {
	std::string s = "unit\n";
	s += "root " + (u.root_constant ? p.constants().at(static_cast<std::size_t>(*u.root_constant)) : std::string("_")) + "\n";
	s += line_with("content", lits_text(p, u.root_content)) + "\n";
	if (u.root_arc) s += line_with("rootarc", lits_text(p, *u.root_arc)) + "\n";
	for (const UnitSuccessor& su : u.successors) {
		s += line_with(su.blocked ? "bsucc" : "succ", lits_text(p, su.content)) + " | " + lits_text(p, su.arc);
		while (!s.empty() && s.back() == ' ') s.pop_back();
		s += "\n";
	}
	for (const ConstantRequirement& r : u.constants) {
		s += line_with("const " + p.constants().at(static_cast<std::size_t>(r.constant)), lits_text(p, r.content));
		if (r.arc) s += line_with(" |", lits_text(p, *r.arc));
		s += "\n";
	}
	for (const auto& [f, t] : u.garcs) s += "garc " + unit_atom_text(p, f) + " " + unit_atom_text(p, t) + "\n";
	s += "final " + std::string(u.final ? "1" : "0") + "\n";
	return s;
}

std::string save_cache_text(const UnitCompilation& c, const Program& p) {
	std::string s = "folp-units 1\n";
	s += "fingerprint " + c.fingerprint + "\n";
	s += "units " + std::to_string(c.units.size()) + "\n";
	for (const auto& u : c.units) {
		s += unit_text(u, p);
		s += "redundant " + std::string(u.redundant ? "1" : "0") + "\n";
		s += "end\n";
	}
	return s;
}

void save_cache(const UnitCompilation& c, const Program& p, const std::string& path) {
	std::ofstream out(path, std::ios::binary);
	if (!out) throw CacheError("cannot write cache file " + path);
	out << save_cache_text(c, p);
	if (!out) throw CacheError("failed writing cache file " + path);
}

namespace {

class CacheReader {
public:
	CacheReader(const std::string& text, const Program& p) : p_(p) {
		std::istringstream in(text);
		for (std::string line; std::getline(in, line);) {
			if (!line.empty() && line.back() == '\r') line.pop_back();
			lines_.push_back(line);
		}
	}

	UnitCompilation read() {
		UnitCompilation c;
		expect_word(next(), "folp-units", "1");
		c.fingerprint = expect_word(next(), "fingerprint", {});
		if (c.fingerprint != program_fingerprint(p_)) {
			throw CacheError("cache fingerprint " + c.fingerprint + " does not match program " + program_fingerprint(p_));
		}
		const std::string n = expect_word(next(), "units", {});
		std::size_t count = 0;
		try {
			count = std::stoul(n);
		} catch (const std::exception&) {
			fail("bad unit count '" + n + "'");
		}
		for (std::size_t i = 0; i < count; ++i) c.units.push_back(read_unit());
		if (pos_ < lines_.size()) fail("trailing content");
		c.stats.distinct = c.units.size();
		for (const auto& u : c.units) {
			c.stats.final_units += u.final;
			c.stats.redundant += u.redundant;
		}
		c.stats.retained = c.stats.distinct - c.stats.redundant;
		return c;
	}

private:
	[[noreturn]] void fail(const std::string& msg) const {
		throw CacheError("cache line " + std::to_string(pos_) + ": " + msg);
	}

	const std::string& next() {
		if (pos_ >= lines_.size()) fail("unexpected end of cache");
		return lines_[pos_++];
	}

	static std::vector<std::string> words(const std::string& line) {
		std::istringstream in(line);
		std::vector<std::string> out;
		for (std::string w; in >> w;) out.push_back(w);
		return out;
	}

	std::string expect_word(const std::string& line, const std::string& key, const std::optional<std::string>& value) {
		const auto w = words(line);
		if (w.size() != 2 || w[0] != key) fail("expected '" + key + " <value>'");
		if (value && w[1] != *value) fail("unsupported " + key + " " + w[1]);
		return w[1];
	}

	int pred(const std::string& name, int arity) const {
		const auto id = p_.predicate_id(name);
		if (!id || p_.predicate(*id).arity != arity) fail("unknown predicate " + name);
		return *id;
	}

	int constant(const std::string& name) const {
		const int c = p_.constant_index(name);
		if (c < 0) fail("unknown constant " + name);
		return c;
	}

	Literals lits(const std::vector<std::string>& w, std::size_t from, std::size_t to, int arity) const {
		Literals out;
		for (std::size_t i = from; i < to; ++i) {
			const std::string& t = w[i];
			if (t.size() < 2 || (t[0] != '+' && t[0] != '-')) fail("bad literal '" + t + "'");
			out.push_back({pred(t.substr(1), arity), t[0] == '+'});
		}
		std::sort(out.begin(), out.end());
		return out;
	}

	int ref(const std::string& s, std::size_t succ_count) const {
		if (s == "@") return UnitRef::kRoot;
		if (s.size() > 1 && s[0] == '@') {
			int i = 0;
			try {
				i = std::stoi(s.substr(1));
			} catch (const std::exception&) {
				fail("bad node reference " + s);
			}
			if (i < 1 || static_cast<std::size_t>(i) > succ_count) fail("bad node reference " + s);
			return i - 1;
		}
		return UnitRef::constant(constant(s));
	}

	UnitAtom atom(const std::string& s, std::size_t succ_count) const {
		const auto open = s.find('(');
		if (open == std::string::npos || s.back() != ')') fail("bad atom " + s);
		const std::string args = s.substr(open + 1, s.size() - open - 2);
		const auto comma = args.find(',');
		UnitAtom a;
		if (comma == std::string::npos) {
			a.pred = pred(s.substr(0, open), 1);
			a.a = ref(args, succ_count);
		} else {
			a.pred = pred(s.substr(0, open), 2);
			a.a = ref(args.substr(0, comma), succ_count);
			a.b = ref(args.substr(comma + 1), succ_count);
		}
		return a;
	}

	UnitStructure read_unit() {
		if (words(next()) != std::vector<std::string>{"unit"}) fail("expected 'unit'");
		UnitStructure u;
		const std::string root = expect_word(next(), "root", {});
		if (root != "_") u.root_constant = constant(root);
		bool saw_final = false, saw_redundant = false;
		for (;;) {
			const auto w = words(next());
			if (w.empty()) fail("empty line in unit");
			const std::string& key = w[0];
			if (key == "end") break;
			if (key == "content") {
				u.root_content = lits(w, 1, w.size(), 1);
			} else if (key == "rootarc") {
				u.root_arc = lits(w, 1, w.size(), 2);
			} else if (key == "succ" || key == "bsucc") {
				const auto bar = std::find(w.begin(), w.end(), "|") - w.begin();
				if (static_cast<std::size_t>(bar) == w.size()) fail("successor without arc part");
				u.successors.push_back({lits(w, 1, static_cast<std::size_t>(bar), 1),
				                        lits(w, static_cast<std::size_t>(bar) + 1, w.size(), 2), key == "bsucc"});
			} else if (key == "const") {
				if (w.size() < 2) fail("constant requirement without constant");
				ConstantRequirement r{constant(w[1]), {}, std::nullopt};
				const auto bar = static_cast<std::size_t>(std::find(w.begin(), w.end(), "|") - w.begin());
				r.content = lits(w, 2, std::min(bar, w.size()), 1);
				if (bar < w.size()) r.arc = lits(w, bar + 1, w.size(), 2);
				u.constants.push_back(std::move(r));
			} else if (key == "garc") {
				if (w.size() != 3) fail("garc needs two atoms");
				u.garcs.emplace_back(atom(w[1], u.successors.size()), atom(w[2], u.successors.size()));
			} else if (key == "final" && w.size() == 2) {
				u.final = w[1] == "1";
				saw_final = true;
			} else if (key == "redundant" && w.size() == 2) {
				u.redundant = w[1] == "1";
				saw_redundant = true;
			} else {
				fail("unexpected '" + key + "'");
			}
		}
		if (!saw_final || !saw_redundant) fail("unit lacks final/redundant flags");
		std::sort(u.garcs.begin(), u.garcs.end());
		return u;
	}

	const Program& p_;
	std::vector<std::string> lines_;
	std::size_t pos_ = 0;
};

}  // namespace

UnitCompilation load_cache_text(const std::string& text, const Program& p) { return CacheReader(text, p).read(); }

UnitCompilation load_cache(const std::string& path, const Program& p) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw CacheError("cannot read cache file " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return load_cache_text(ss.str(), p);
}

}  // namespace folp
