// Knowledge compilation: depth-1 unit completion structures enumerated with
// the original algorithm, finality, redundancy between units, and a
// fingerprinted text cache.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "folp/a1.hpp"

namespace folp {

class CacheError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Node reference inside a unit: the root, successor i (0-based), or a constant.
struct UnitRef {
	static constexpr int kRoot = -1;
	static constexpr int kConstBase = -2;  // constant c is kConstBase - c
	static int successor(int i) { return i; }
	static int constant(int c) { return kConstBase - c; }
	static bool is_constant(int r) { return r <= kConstBase; }
	static int constant_index(int r) { return kConstBase - r; }
};

struct UnitAtom {
	int pred = 0;
	int a = UnitRef::kRoot;
	int b = -100;  // kNone for unary atoms
	static constexpr int kNone = -100;
	bool unary() const noexcept { return b == kNone; }
	auto operator<=>(const UnitAtom&) const = default;
};

using Literals = std::vector<SignedPred>;  // sorted by predicate id

struct UnitSuccessor {
	Literals content;
	Literals arc;
	bool blocked = false;
};

/// What a unit asks of a constant other than its own root.
struct ConstantRequirement {
	int constant = 0;
	Literals content;
	std::optional<Literals> arc;  // arc root -> constant, if the unit creates one
};

struct UnitStructure {
	std::optional<int> root_constant;  // empty: anonymous root
	Literals root_content;
	std::optional<Literals> root_arc;  // self arc of a constant root
	std::vector<UnitSuccessor> successors;
	std::vector<ConstantRequirement> constants;  // only constants the unit touches
	std::vector<std::pair<UnitAtom, UnitAtom>> garcs;  // sorted
	bool final = false;
	bool redundant = false;

	/// paths from root unary atoms to non-free unary atoms of `ref`.
	std::set<std::pair<int, int>> paths_to(const Program& p, int ref) const;
	std::vector<int> unblocked_successors() const;
};

/// Builds the unit view of a saturated root expansion (successors in canonical order).
UnitStructure unit_from_structure(const CompletionStructure& cs, const Program& p);

/// Every successor blocked and no constant other than the root touched.
bool is_final(const UnitStructure& u);

/// u1 imposes strictly more constraints than u2: same root kind and root
/// content, every unblocked successor of u2 injectively covered by one of u1
/// with larger content and path set, constant requirements and paths
/// included, and not the other way round.
bool is_redundant(const UnitStructure& u1, const UnitStructure& u2, const Program& p);

/// Marks as redundant every unit that is redundant w.r.t. some other unit.
void prune_redundant(std::vector<UnitStructure>& units, const Program& p);

struct CompileStats {
	std::size_t enumerated = 0;  // saturated root expansions found
	std::size_t distinct = 0;
	std::size_t final_units = 0;
	std::size_t redundant = 0;
	std::size_t retained = 0;
	std::uint64_t steps = 0;
};

struct UnitCompilation {
	std::string fingerprint;
	std::vector<UnitStructure> units;  // canonical order, redundant ones flagged
	CompileStats stats;
};

std::string program_fingerprint(const Program& p);

/// Enumerates the units for an anonymous root and for every constant root.
UnitCompilation compile_units(const Program& p, const SearchLimits& limits = {});

std::string unit_text(const UnitStructure& u, const Program& p);
std::string save_cache_text(const UnitCompilation& c, const Program& p);
void save_cache(const UnitCompilation& c, const Program& p, const std::string& path);
/// Throws CacheError on malformed input or when the fingerprint does not match `p`.
UnitCompilation load_cache_text(const std::string& text, const Program& p);
UnitCompilation load_cache(const std::string& path, const Program& p);

}  // namespace folp
