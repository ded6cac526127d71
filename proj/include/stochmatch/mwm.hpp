#pragma once

#include "stochmatch/graph.hpp"

#include <span>

namespace stochmatch {

constexpr int kMwmVertexCap = 22;
constexpr int kBruteforceEdgeCap = 16;

/// Canonical maximum-weight matching over `active` edges.
///
/// Among all maximum-weight matchings the one returned is the first in
/// lexicographic order of sorted edge indices, where a missing position
/// compares greater than any index. Equivalently: the matching containing the
/// smallest index of the symmetric difference wins.
Matching mwm(const WeightedGraph& g, std::span<const int> active);

/// Exhaustive oracle with the same tie-break; at most 16 active edges.
Matching mwm_bruteforce(const WeightedGraph& g, std::span<const int> active);

/// True iff `a` precedes `b` in the canonical tie-break order.
bool canonical_less(std::span<const int> a, std::span<const int> b);

}  // namespace stochmatch
