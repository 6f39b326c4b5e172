// The optimized algorithm: grow completion structures by grafting cached
// unit completion structures onto unexpanded nodes.
#pragma once

#include <string>
#include <vector>

#include "folp/a1.hpp"
#include "folp/units.hpp"

namespace folp {

/// s is included in the unit's root content.
bool local_satisfies(const UnitStructure& u, const Literals& s);

/// True if u can be grafted onto x: same root kind (a constant only matches
/// itself, anonymous roots match anonymous nodes) and ct(x) is locally satisfied.
bool unit_fits(const CompletionStructure& cs, int x, const UnitStructure& u);

/// Grafts u at x: x becomes expanded, successors and arcs are created from
/// the unit, constant requirements are merged and G arcs are copied under
/// the relabelling. Throws std::invalid_argument when u does not fit x or x
/// is already expanded. Returns false on a clash: a requirement contradicts
/// a constant's content or adds to an already expanded constant, or G gets a cycle.
bool expand_cs(CompletionStructure& cs, int x, const UnitStructure& u);

/// Non-redundant units fitting x, in candidate order: fewest successors,
/// then smallest total path set, then cache order.
std::vector<const UnitStructure*> match_candidates(const CompletionStructure& cs, int x,
                                                   const UnitCompilation& units, const Program& p);

/// One branch per candidate unit whose graft succeeds.
std::vector<CompletionStructure> match(const CompletionStructure& cs, int x, const UnitCompilation& units,
                                       const Program& p);

/// Throws CacheError when `units` was compiled from a different program.
SearchResult check_sat_a2(const Program& p, const std::string& pred, const UnitCompilation& units,
                          const RedundancyPolicy& policy = {}, const SearchLimits& limits = {});

}  // namespace folp
