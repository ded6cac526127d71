#pragma once

#include "stochmatch/graph.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace testutil {

using stochmatch::Edge;
using stochmatch::WeightedGraph;

/// Graph from (u, v, integer weight) triples, denominator 1.
inline WeightedGraph make_graph(int n, std::vector<std::tuple<int, int, long long>> es) {
    std::vector<Edge> edges;
    for (auto [u, v, w] : es) edges.push_back({u, v, static_cast<std::int64_t>(w)});
    return WeightedGraph(n, std::move(edges), 1);
}

/// Random simple graph with at most max_edges edges, weights in [0, wmax].
inline WeightedGraph random_graph(stochmatch::Rng& rng, int n, int max_edges, int wmax) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[rng.below(i)]);
    const int m = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min<int>(max_edges, static_cast<int>(pairs.size()))) + 1));
    std::vector<Edge> edges;
    for (int i = 0; i < m; ++i)
        edges.push_back({pairs[static_cast<std::size_t>(i)].first, pairs[static_cast<std::size_t>(i)].second,
                         static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(wmax) + 1))});
    return WeightedGraph(n, std::move(edges), 1);
}

}  // namespace testutil
